#include <stdexcept>

#include "npf/bernoulli.hpp"
#include "npf/npstats.hpp"
#include "npf/primes.hpp"

namespace npf::bernoulli {

namespace {

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    unsigned __int128 r = 1 % m, x = b % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

std::optional<std::uint64_t> eisenstein_congruence_check(const qexp::FormHandle& form, std::uint64_t ell,
                                                         std::uint64_t N) {
    if (ell < 2) throw std::invalid_argument("eisenstein_congruence_check: modulus must be a prime");
    if (N == 0) return std::nullopt;
    if (N > form.table_bound() && form.series() == nullptr)
        throw std::out_of_range("form has coefficients only up to " + std::to_string(form.table_bound()));

    // σ_{k−1}(n) mod ℓ for all n ≤ N
    std::vector<std::uint64_t> sigma(N + 1, 0);
    for (std::uint64_t d = 1; d <= N; ++d) {
        const std::uint64_t dm = powmod_u64(d, form.weight() - 1, ell);
        for (std::uint64_t n = d; n <= N; n += d) sigma[n] = (sigma[n] + dm) % ell;
    }

    std::vector<BigInt> a;
    const qexp::IntSeries* s = form.series();
    if (s == nullptr || s->precision() <= N) a = qexp::hecke_table(form, N);
    for (std::uint64_t n = 1; n <= N; ++n) {
        const BigInt& an = a.empty() ? (*s)[n] : a[n];
        if (mpz_fdiv_ui(an.get_mpz_t(), ell) != sigma[n]) return n;
    }
    return std::nullopt;
}

AlmostEisensteinResult almost_eisenstein(const qexp::FormHandle& form, std::uint64_t X, std::uint64_t Lmax,
                                         std::uint64_t start) {
    if (Lmax < 2) throw std::invalid_argument("almost_eisenstein: Lmax must be >= 2");
    if (X > form.table_bound())
        throw std::out_of_range("X=" + std::to_string(X) + " exceeds the coefficient table bound " +
                                std::to_string(form.table_bound()));

    // ℓ | N_p for every test prime ⇔ ℓ | gcd of all of them
    AlmostEisensteinResult result;
    BigInt g = 0;
    for (std::uint32_t p : cached_primes(static_cast<std::uint32_t>(X))) {
        if (p < start || !form.is_good_prime(p)) continue;
        const BigInt np = npstats::np_value(form, p);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), np.get_mpz_t());
        ++result.test_primes;
    }
    for (std::uint32_t ell : cached_primes(static_cast<std::uint32_t>(Lmax)))
        if (mpz_divisible_ui_p(g.get_mpz_t(), ell)) result.candidates.push_back(ell);
    result.superset_warning = result.test_primes < kMinEvidencePrimes;
    return result;
}

}  // namespace npf::bernoulli

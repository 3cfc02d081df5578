#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "npf/bernoulli.hpp"
#include "npf/error.hpp"
#include "npf/primes.hpp"
#include "npf/qexp.hpp"

namespace npf::qexp {

namespace {

void check_precision(std::size_t N, std::size_t ceiling) {
    if (N > ceiling)
        throw std::length_error("requested precision " + std::to_string(N) + " exceeds the precision ceiling " +
                                std::to_string(ceiling));
}

bool is_eisenstein_weight(int k) { return k == 4 || k == 6 || k == 8 || k == 10 || k == 14; }

// σ_m(n) for 0 ≤ n < N (entry 0 unused).
std::vector<BigInt> divisor_power_sums(std::size_t N, unsigned m) {
    std::vector<BigInt> sigma(N);
    for (std::size_t d = 1; d < N; ++d) {
        const BigInt dm = pow_ui(d, m);
        for (std::size_t n = d; n < N; n += d) sigma[n] += dm;
    }
    return sigma;
}

struct LevelOneBasis {
    IntSeries e4, e6, delta;
};

// Shared across eigenform_expansion calls at the same precision.
std::shared_ptr<const LevelOneBasis> level_one_basis(std::size_t N) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const LevelOneBasis>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(N); it != cache.end()) return it->second;

    IntSeries e4 = eisenstein_expansion(4, N, N);
    IntSeries e6 = eisenstein_expansion(6, N, N);
    IntSeries diff = series_mul(series_mul(e4, e4), e4) - series_mul(e6, e6);
    for (std::size_t n = 0; n < N; ++n) {
        if (!mpz_divisible_ui_p(diff[n].get_mpz_t(), 1728))
            throw std::logic_error("E4^3 - E6^2 coefficient " + std::to_string(n) + " is not divisible by 1728");
        mpz_divexact_ui(diff[n].get_mpz_t(), diff[n].get_mpz_t(), 1728);
    }
    auto basis = std::make_shared<const LevelOneBasis>(LevelOneBasis{std::move(e4), std::move(e6), std::move(diff)});
    cache.emplace(N, basis);
    return basis;
}

}  // namespace

BigInt eisenstein_constant(int k) {
    if (!is_eisenstein_weight(k)) throw std::invalid_argument("eisenstein weight must be one of 4, 6, 8, 10, 14");
    const BigRational c = BigRational(-2 * k) / bernoulli::bernoulli_number(static_cast<unsigned>(k));
    if (c.get_den() != 1) throw std::logic_error("-2k/B_k is not an integer for k=" + std::to_string(k));
    return c.get_num();
}

IntSeries eisenstein_expansion(int k, std::size_t N, std::size_t ceiling) {
    const BigInt c = eisenstein_constant(k);
    if (N == 0) throw std::invalid_argument("eisenstein_expansion: precision must be at least 1");
    check_precision(N, ceiling);
    std::vector<BigInt> sigma = divisor_power_sums(N, static_cast<unsigned>(k - 1));
    sigma[0] = 1;
    for (std::size_t n = 1; n < N; ++n) sigma[n] *= c;
    return IntSeries(std::move(sigma));
}

std::string_view to_string(FormSource s) {
    return s == FormSource::computed_level_one ? "computed-level-one" : "ingested";
}

FormHandle::FormHandle(Spec spec) {
    if (spec.weight < 4 || spec.weight % 2 != 0)
        throw std::invalid_argument("form weight must be an even integer >= 4, got " + std::to_string(spec.weight));
    if (spec.level == 0) throw std::invalid_argument("form level must be positive");
    for (const auto& [p, a] : spec.ap_table) {
        if (!is_prime_u64(p)) throw std::invalid_argument("a_p table index " + std::to_string(p) + " is not prime");
        if (spec.level % p != 0 && !within_deligne_bound(a, p, spec.weight))
            throw std::invalid_argument("a_" + std::to_string(p) + " = " + a.get_str() +
                                        " violates the Deligne bound 2p^((k-1)/2) for weight " +
                                        std::to_string(spec.weight));
    }
    if (spec.table_bound == 0 && !spec.ap_table.empty()) spec.table_bound = spec.ap_table.rbegin()->first;
    data_ = std::make_shared<const Spec>(std::move(spec));
}

const BigInt& FormHandle::ap(std::uint64_t p) const {
    auto it = data_->ap_table.find(p);
    if (it == data_->ap_table.end()) throw CoefficientUnavailable(p);
    return it->second;
}

bool is_eigenform_weight(int k) { return std::ranges::find(kEigenformWeights, k) != std::end(kEigenformWeights); }

std::string eigenform_label(int k) { return "delta" + std::to_string(k); }

FormHandle eigenform_expansion(int k, std::size_t N, std::size_t ceiling) {
    if (!is_eigenform_weight(k))
        throw std::invalid_argument("no level-one eigenform construction for weight " + std::to_string(k) +
                                    " (expected 12, 16, 18, 20, 22 or 26)");
    if (N < 2) throw std::invalid_argument("eigenform_expansion: precision must be at least 2");
    check_precision(N, ceiling);

    auto basis = level_one_basis(N);
    IntSeries f = basis->delta;
    switch (k) {
        case 12: break;
        case 16: f = series_mul(f, basis->e4); break;
        case 18: f = series_mul(f, basis->e6); break;
        case 20: f = series_mul(f, series_mul(basis->e4, basis->e4)); break;
        case 22: f = series_mul(f, series_mul(basis->e4, basis->e6)); break;
        case 26: f = series_mul(f, series_mul(series_mul(basis->e4, basis->e4), basis->e6)); break;
    }
    if (f[0] != 0 || f[1] != 1)
        throw std::logic_error("weight " + std::to_string(k) + " product is not a normalized cusp form");

    FormHandle::Spec spec;
    spec.weight = static_cast<unsigned>(k);
    spec.level = 1;
    spec.label = eigenform_label(k);
    spec.source = FormSource::computed_level_one;
    spec.table_bound = N - 1;
    for (std::uint32_t p : cached_primes(static_cast<std::uint32_t>(N - 1))) spec.ap_table.emplace(p, f[p]);
    spec.series = std::make_shared<const IntSeries>(std::move(f));
    return FormHandle(std::move(spec));
}

namespace {

// a_{p^e} from a_p: three-term recursion for good p, a_p^e at p | level.
BigInt prime_power_coefficient(const FormHandle& form, std::uint64_t p, unsigned e) {
    const BigInt& ap = form.ap(p);
    if (!form.is_good_prime(p)) {
        BigInt r;
        mpz_pow_ui(r.get_mpz_t(), ap.get_mpz_t(), e);
        return r;
    }
    const BigInt pk = pow_ui(p, form.weight() - 1);
    BigInt prev = 1, cur = ap;
    for (unsigned r = 1; r < e; ++r) {
        BigInt next = ap * cur - pk * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return e == 0 ? BigInt(1) : cur;
}

}  // namespace

BigInt hecke_coefficient(const FormHandle& form, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("hecke_coefficient: n must be positive");
    BigInt result = 1;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        result *= prime_power_coefficient(form, p, e);
    }
    if (m > 1) result *= prime_power_coefficient(form, m, 1);
    return result;
}

std::vector<BigInt> hecke_table(const FormHandle& form, std::uint64_t N) {
    std::vector<BigInt> a(N + 1);
    if (N == 0) return a;
    // smallest prime factor sieve
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t j = i; j <= N; j += i)
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
    a[1] = 1;
    for (std::uint64_t n = 2; n <= N; ++n) {
        const std::uint64_t p = spf[n];
        std::uint64_t m = n;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m == 1)
            a[n] = prime_power_coefficient(form, p, e);
        else
            a[n] = a[n / m] * a[m];
    }
    return a;
}

}  // namespace npf::qexp

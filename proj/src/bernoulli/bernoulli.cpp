#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "npf/bernoulli.hpp"
#include "npf/primes.hpp"

namespace npf::bernoulli {

namespace {

void check_ceiling(unsigned index, unsigned ceiling) {
    if (index > ceiling)
        throw std::out_of_range("Bernoulli index " + std::to_string(index) + " exceeds the ceiling " +
                                std::to_string(ceiling));
}

// Memo of B_0..B_{size-1} plus the running lcm of their denominators.
struct Memo {
    std::mutex mutex;
    std::vector<BigRational> values{BigRational(1)};
    BigInt den_lcm = 1;
};

Memo& memo() {
    static Memo m;
    return m;
}

}  // namespace

BigInt von_staudt_clausen_denominator(unsigned n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("von Staudt-Clausen applies to even n >= 2");
    BigInt d = 1;
    for (std::uint32_t p : cached_primes(n + 1))
        if (n % (p - 1) == 0) d *= p;
    return d;
}

BigRational bernoulli_number(unsigned n) {
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    while (m.values.size() <= n) {
        const unsigned t = static_cast<unsigned>(m.values.size());
        BigRational bt;
        if (t >= 3 && t % 2 == 1) {
            bt = 0;
        } else {
            // (t+1)·B_t = −Σ_{j<t} C(t+1, j)·B_j, summed over the common denominator L.
            const BigInt& L = m.den_lcm;
            BigInt sum = 0, binom, term;
            for (unsigned j = 0; j < t; ++j) {
                const BigRational& bj = m.values[j];
                if (sgn(bj) == 0) continue;
                mpz_bin_uiui(binom.get_mpz_t(), t + 1, j);
                mpz_divexact(term.get_mpz_t(), L.get_mpz_t(), bj.get_den_mpz_t());
                term *= binom;
                term *= bj.get_num();
                sum += term;
            }
            bt = BigRational(-sum, L * (t + 1));
            bt.canonicalize();
            if (t >= 2 && bt.get_den() != von_staudt_clausen_denominator(t))
                throw std::logic_error("denominator of B_" + std::to_string(t) +
                                       " disagrees with von Staudt-Clausen");
        }
        mpz_lcm(m.den_lcm.get_mpz_t(), m.den_lcm.get_mpz_t(), bt.get_den_mpz_t());
        m.values.push_back(std::move(bt));
    }
    return m.values[n];
}

BernoulliEntry bk_over_k(unsigned k, const npstats::FactorBudget& budget, unsigned ceiling) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("bk_over_k: k must be even and >= 4");
    check_ceiling(k, ceiling);
    BernoulliEntry e;
    e.k = k;
    e.b_k = bernoulli_number(k);
    e.bk_over_k = e.b_k / BigRational(k);
    e.numerator_factorization = npstats::factorize(abs(e.bk_over_k.get_num()), budget);
    return e;
}

BigInt sigma_power(std::uint64_t n, unsigned m) {
    if (n == 0) throw std::invalid_argument("sigma_power: n must be positive");
    BigInt s = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        s += pow_ui(d, m);
        if (d != n / d) s += pow_ui(n / d, m);
    }
    return s;
}

bool ChowlaVerdict::passes() const noexcept {
    if (!hypotheses_hold()) return false;
    for (const auto& s : steps)
        if (!s.divides) return false;
    return true;
}

ChowlaVerdict chowla_check(std::uint64_t p, unsigned n, unsigned i_max, unsigned ceiling) {
    if (p < 3 || !is_prime_u64(p)) throw std::invalid_argument("chowla_check: p must be an odd prime");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("chowla_check: n must be even and >= 2");
    const std::uint64_t top = n + (p - 1) * static_cast<std::uint64_t>(i_max);
    if (top > ceiling)
        throw std::out_of_range("Bernoulli index " + std::to_string(top) + " exceeds the ceiling " +
                                std::to_string(ceiling));

    auto divides_numerator = [p](unsigned index) {
        const BigRational q = bernoulli_number(index) / BigRational(index);
        return mpz_divisible_ui_p(q.get_num_mpz_t(), p) != 0;
    };

    ChowlaVerdict v;
    v.p_divides_numerator = divides_numerator(n);
    BigInt two_n = pow_ui(2, n) - 1;
    v.p_coprime_to_2n_minus_1 = mpz_divisible_ui_p(two_n.get_mpz_t(), p) == 0;
    for (unsigned i = 1; i <= i_max; ++i) {
        const unsigned index = n + static_cast<unsigned>(p - 1) * i;
        v.steps.push_back({i, index, divides_numerator(index)});
    }
    return v;
}

std::optional<Progression> common_weight_progression(std::span<const std::pair<BigInt, BigInt>> constraints) {
    Progression acc{0, 1};
    for (const auto& [residue, modulus] : constraints) {
        if (modulus < 1) throw std::invalid_argument("common_weight_progression: moduli must be >= 1");
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), residue.get_mpz_t(), modulus.get_mpz_t());
        // acc.base + acc.modulus·t ≡ r (mod modulus)
        BigInt g, s;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, acc.modulus.get_mpz_t(), modulus.get_mpz_t());
        BigInt diff = r - acc.base;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
        const BigInt m_over_g = modulus / g;
        BigInt t = (diff / g) * s;
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m_over_g.get_mpz_t());
        acc.base += acc.modulus * t;
        acc.modulus *= m_over_g;
        mpz_fdiv_r(acc.base.get_mpz_t(), acc.base.get_mpz_t(), acc.modulus.get_mpz_t());
    }
    return acc;
}

std::vector<OmegaReportRow> omega_numerator_report(unsigned k_max, const npstats::FactorBudget& budget,
                                                   unsigned ceiling, Parallelism par, unsigned k_min) {
    check_ceiling(k_max, ceiling);
    if (k_min < 4) k_min = 4;
    if (k_min % 2 != 0) ++k_min;
    std::vector<unsigned> ks;
    for (unsigned k = k_min; k <= k_max; k += 2) ks.push_back(k);
    // fill the memo up front so workers only read it
    if (!ks.empty()) bernoulli_number(ks.back());

    std::vector<OmegaReportRow> rows(ks.size());
    parallel_for(ks.size(), par, [&](std::size_t i) {
        const BernoulliEntry e = bk_over_k(ks[i], budget, ceiling);
        OmegaReportRow& row = rows[i];
        row.k = ks[i];
        row.numerator = abs(e.bk_over_k.get_num());
        row.complete = e.numerator_factorization.complete();
        row.omega = row.complete ? e.numerator_factorization.omega() : 0;
        row.log_k = std::log(static_cast<double>(row.k));
        row.k_over_log_k = row.k / row.log_k;
    });
    return rows;
}

}  // namespace npf::bernoulli

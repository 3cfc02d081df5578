#pragma once

// Exact Bernoulli numbers and the congruence machinery built on them.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "npf/bigint.hpp"
#include "npf/factor.hpp"
#include "npf/parallel.hpp"
#include "npf/qexp.hpp"

namespace npf::bernoulli {

inline constexpr unsigned kDefaultCeiling = 800;

/// B_n with B_1 = −1/2, from Σ_{j≤n} C(n+1,j)·B_j = 0. Results are memoized
/// process-wide; every even B_n is checked against von Staudt–Clausen.
BigRational bernoulli_number(unsigned n);

/// ∏ p over primes with (p−1) | n (n even, n ≥ 2).
BigInt von_staudt_clausen_denominator(unsigned n);

struct BernoulliEntry {
    unsigned k = 0;
    BigRational b_k;
    BigRational bk_over_k;
    npstats::FactoredInteger numerator_factorization;  // of |num(B_k/k)|
};

BernoulliEntry bk_over_k(unsigned k, const npstats::FactorBudget& budget = {}, unsigned ceiling = kDefaultCeiling);

/// Σ_{d|n} d^m.
BigInt sigma_power(std::uint64_t n, unsigned m);

/// First n in [1, N] with a_n ≢ σ_{k−1}(n) (mod ℓ), or nullopt on success.
std::optional<std::uint64_t> eisenstein_congruence_check(const qexp::FormHandle& form, std::uint64_t ell,
                                                         std::uint64_t N);

struct AlmostEisensteinResult {
    std::vector<std::uint64_t> candidates;
    std::size_t test_primes = 0;
    /// Too few test primes: the candidate list is only an upper approximation.
    bool superset_warning = false;

    std::size_t nu() const noexcept { return candidates.size(); }
};

inline constexpr std::size_t kMinEvidencePrimes = 10;

/// Primes ℓ ≤ Lmax dividing N_p for every good prime start ≤ p ≤ X.
AlmostEisensteinResult almost_eisenstein(const qexp::FormHandle& form, std::uint64_t X, std::uint64_t Lmax,
                                         std::uint64_t start = 5);

struct ChowlaStep {
    unsigned i = 0;
    unsigned index = 0;  // n + (p−1)·i
    bool divides = false;
};

struct ChowlaVerdict {
    bool p_divides_numerator = false;  // p | num(B_n/n)
    bool p_coprime_to_2n_minus_1 = false;
    std::vector<ChowlaStep> steps;  // i = 1..i_max

    bool hypotheses_hold() const noexcept { return p_divides_numerator && p_coprime_to_2n_minus_1; }
    bool passes() const noexcept;
};

ChowlaVerdict chowla_check(std::uint64_t p, unsigned n, unsigned i_max, unsigned ceiling = kDefaultCeiling);

struct Progression {
    BigInt base;
    BigInt modulus;

    friend bool operator==(const Progression&, const Progression&) = default;
};

/// Intersection of k ≡ r_i (mod m_i) by CRT, or nullopt when the residues conflict.
std::optional<Progression> common_weight_progression(std::span<const std::pair<BigInt, BigInt>> constraints);

struct OmegaReportRow {
    unsigned k = 0;
    BigInt numerator;  // |num(B_k/k)|
    bool complete = true;
    unsigned omega = 0;  // meaningful only when complete
    double k_over_log_k = 0;
    double log_k = 0;
};

/// One row per even k in [k_min, k_max].
std::vector<OmegaReportRow> omega_numerator_report(unsigned k_max, const npstats::FactorBudget& budget = {},
                                                   unsigned ceiling = kDefaultCeiling, Parallelism par = {},
                                                   unsigned k_min = 12);

}  // namespace npf::bernoulli

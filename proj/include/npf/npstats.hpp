#pragma once

// N_p(f) = p^(k−1) + 1 − a_p(f): values, factorizations, ω/Ω scans and the
// truncated-ω normality diagnostic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npf/bigint.hpp"
#include "npf/factor.hpp"
#include "npf/parallel.hpp"
#include "npf/qexp.hpp"

namespace npf::npstats {

struct NpRecord {
    std::uint64_t p = 0;
    BigInt np;
    FactoredInteger factorization;
    unsigned omega = 0;      // lower bound when !complete
    unsigned big_omega = 0;  // lower bound when !complete
    bool complete = true;

    friend bool operator==(const NpRecord&, const NpRecord&) = default;
};

/// p^(k−1) + 1 − a_p; ExcludedPrime when p divides the level.
BigInt np_value(const qexp::FormHandle& form, std::uint64_t p);

NpRecord np_record(const qexp::FormHandle& form, std::uint64_t p, const FactorBudget& budget = {});

enum class CountKind { omega, big_omega };
enum class Relation { equal, at_most };

struct ScanFilter {
    CountKind kind = CountKind::omega;
    Relation relation = Relation::equal;
    unsigned target = 0;
};

enum class FilterOutcome { match, no_match, undecided };

/// Incomplete records only decide the filter when their lower bound already exceeds the target.
FilterOutcome evaluate_filter(const ScanFilter& filter, const NpRecord& record);

struct ScanResult {
    std::vector<NpRecord> records;    // ascending p
    std::vector<NpRecord> undecided;  // ascending p; only populated with a filter
};

/// Good primes p ≤ X. With a filter, every prime first gets a rho-free
/// factorization; the full budget is spent only where that does not decide.
ScanResult scan(const qexp::FormHandle& form, std::uint64_t X, const std::optional<ScanFilter>& filter,
                const FactorBudget& budget = {}, Parallelism par = {});

/// Good primes start ≤ p ≤ X with N_p ≢ 0 (mod modulus).
std::vector<std::uint64_t> congruence_scan(const qexp::FormHandle& form, const BigInt& modulus,
                                           std::uint64_t X, std::uint64_t start);

/// #{ℓ ≤ y prime : ℓ | n}.
unsigned truncated_omega(const BigInt& n, std::uint32_t y);

struct ErdosKacReport {
    std::uint64_t X = 0;
    std::uint32_t y = 0;
    std::size_t sample_size = 0;
    double mean = 0;
    double variance = 0;  // unbiased
    double ks_distance = 0;
};

/// Standardized truncated ω over good primes 17 ≤ p ≤ X, compared with N(0,1).
ErdosKacReport erdos_kac_sample(const qexp::FormHandle& form, std::uint64_t X, std::uint32_t y,
                                Parallelism par = {});

/// Kolmogorov–Smirnov distance between a sample and the standard normal CDF.
double ks_distance_to_normal(std::vector<double> sample);

}  // namespace npf::npstats

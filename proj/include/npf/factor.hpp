#pragma once

// Desk-scale integer factorization: trial division, perfect-power
// detection, Pollard–Brent with seeds derived from the input, and a
// Miller–Rabin + strong Lucas battery for what is left.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npf/bigint.hpp"

namespace npf::npstats {

/// Effort limits for factorize(). Everything except `seconds` is
/// deterministic; the wall-clock cap only matters when it trips first.
struct FactorBudget {
    std::uint32_t trial_bound = 1'000'000;
    unsigned rho_rounds = 8;
    std::uint64_t rho_iterations = 1u << 18;  // per round
    double seconds = 10.0;                    // per integer

    /// Trial division, perfect powers and primality only.
    static FactorBudget no_rho(std::uint32_t trial_bound = 1'000'000) {
        FactorBudget b;
        b.trial_bound = trial_bound;
        b.rho_rounds = 0;
        return b;
    }
};

enum class CofactorStatus { none, probable_prime, composite_unfactored };

std::string_view to_string(CofactorStatus s);

struct PrimePower {
    BigInt prime;
    unsigned exponent = 1;
    /// false when only the probable-prime battery vouches for `prime`.
    bool proven = true;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = ∏ prime^exponent · cofactor.
///
/// A probable-prime cofactor is a single prime beyond the deterministic
/// Miller–Rabin range. A composite cofactor is what the budget could not
/// split; it is never a prime power, so it hides at least two more primes.
struct FactoredInteger {
    std::vector<PrimePower> factors;  // strictly ascending primes
    std::optional<BigInt> cofactor;
    CofactorStatus cofactor_status = CofactorStatus::none;

    bool complete() const noexcept { return cofactor_status != CofactorStatus::composite_unfactored; }

    /// Exact when complete(), otherwise a lower bound.
    unsigned omega() const noexcept;
    unsigned big_omega() const noexcept;

    BigInt product() const;

    /// `2^10*3*23*691`; a composite cofactor is rendered in brackets.
    std::string render() const;

    friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

enum class Primality { composite, prime, probable_prime };

/// Deterministic below 3.3·10²⁴ (Miller–Rabin on the first 13 prime bases);
/// above that, the same bases plus a strong Lucas test.
Primality primality(const BigInt& n);

bool strong_probable_prime(const BigInt& n, unsigned long base);
/// Strong Lucas test with Selfridge's parameter choice.
bool strong_lucas_probable_prime(const BigInt& n);

/// The public seed hash used by Pollard–Brent: depends only on (n, round).
std::uint64_t rho_seed(const BigInt& n, unsigned round);

/// Nontrivial factor of composite n within `iterations` steps, or nullopt.
std::optional<BigInt> pollard_brent(const BigInt& n, std::uint64_t seed, std::uint64_t iterations);

/// Never throws for budget exhaustion; the shortfall shows up as a composite cofactor.
FactoredInteger factorize(const BigInt& n, const FactorBudget& budget = {});

}  // namespace npf::npstats

#pragma once

// Richert's weighted-sieve main term, the three parameter families used for
// the ω/Ω bounds, and the Mertens-type product W(z) = ∏_{ℓ<z} (1 − δ(ℓ)).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "npf/bigint.hpp"
#include "npf/parallel.hpp"

namespace npf::sieve {

inline constexpr long double kEulerGamma = 0.577215664901532860606512090082L;

struct SieveParams {
    double alpha = 0;
    double u = 0;
    double v = 0;
    double lambda = 0;
};

/// Thrown when a tuple violates 1/α < u < v, 2/α ≤ v ≤ 4/α, λ ≥ 0.
class InadmissibleParams : public std::invalid_argument {
public:
    InadmissibleParams(std::string inequality, const std::string& detail)
        : std::invalid_argument("inadmissible sieve parameters: " + inequality + " fails (" + detail + ")"),
          inequality_(std::move(inequality)) {}
    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

/// Name of the first violated inequality, if any. Strict λ > 0.
std::optional<std::string> admissibility_violation(const SieveParams& params);
inline bool admissible(const SieveParams& params) { return !admissibility_violation(params); }

/// F(α, v, u, λ) = 2e^γ/(αv) · (log(αv−1) − λαu·log(v/u) + λ(αu−1)·log((αv−1)/(αu−1))).
/// λ = 0 is accepted so the bare leading term can be evaluated.
double richert_F(const SieveParams& params);

enum class Family { g1, g2, g3 };
std::string to_string(Family family);
Family parse_family(std::string_view name);

/// α, u, v as exact rationals; λ = 1/√ln k has no rational form.
struct FamilyParams {
    Family family = Family::g1;
    unsigned k = 0;
    BigRational alpha, u, v;
    double lambda = 0;

    SieveParams numeric() const;
};

FamilyParams params_family(Family family, unsigned k);

/// The printed closed form for G_i(k), evaluated directly (k continuous, k > 1).
double g_closed(Family family, double k);

/// Root of g_closed(family, ·) in [lo, hi] by bisection to 1e−9.
/// Throws std::domain_error when the endpoints do not bracket a sign change.
double positivity_threshold(Family family, double lo, double hi);

struct BoundSet {
    unsigned k = 0;
    std::uint64_t omega_bound = 0;
    std::uint64_t big_omega_bound = 0;
    std::uint64_t grh_omega_bound = 0;
    std::uint64_t selberg_exponent = 0;
};

BoundSet bounds(unsigned k);

struct MertensProduct {
    double w = 1;
    double w_log_z = 0;
};

/// ∏ (1 − δ(ℓ)) over primes ℓ < z with the exact δ(ℓ) for weight k.
MertensProduct mertens_W(std::uint64_t z, unsigned k, Parallelism par = {});

}  // namespace npf::sieve

#pragma once

// Counting in G_ℓ = {g ∈ GL₂(𝔽_ℓ) : det g is a (k−1)-th power}: closed forms,
// brute-force enumeration over ℤ/ℓⁿ, and the density δ(ℓ) = #C_{ℓ,1}/#G_ℓ.

#include <array>
#include <cstdint>

#include "npf/bigint.hpp"

namespace npf::glcount {

struct GroupParams {
    std::uint64_t ell = 0;
    unsigned k = 4;
    unsigned n = 1;

    /// gcd(k−1, ℓ−1), recomputed on every call.
    std::uint64_t lambda() const;
};

/// (ℓ²−1)(ℓ²−ℓ)/λ.
BigInt order_G(const GroupParams& params);

/// (ℓ³ − (λ+1)ℓ)/λ.
BigInt count_C1(const GroupParams& params);

enum class C2Variant {
    eigenvalue_one,
    /// … or g ≡ I modulo ℓ^t for some 1 ≤ t < n
    eigenvalue_one_or_identity_below,
    /// … or g − I nilpotent modulo ℓ^t for some 1 ≤ t < n
    eigenvalue_one_or_unipotent_below,
};

/// Largest modulus ℓⁿ the enumerators accept ((ℓⁿ)⁴ matrices).
inline constexpr std::uint64_t kMaxBruteModulus = 125;

/// Matrices over ℤ/ℓⁿ with det a (k−1)-th power unit satisfying `variant`.
/// "Eigenvalue 1" means a fixed vector v ≢ 0 (mod ℓ).
std::uint64_t brute_count(const GroupParams& params, C2Variant variant);

/// #{g over ℤ/ℓⁿ : det g a (k−1)-th power unit}, by enumeration.
std::uint64_t brute_order(const GroupParams& params);

/// #C_{ℓ,1}/#G_ℓ in lowest terms.
BigRational delta_density(const GroupParams& params);

using Matrix2 = std::array<std::uint64_t, 4>;  // row-major, entries mod m

/// Membership tests shared by the enumerators, exposed for property tests.
bool has_fixed_primitive_vector(const Matrix2& g, std::uint64_t ell, std::uint64_t modulus);
bool in_C(const Matrix2& g, const GroupParams& params, C2Variant variant);

}  // namespace npf::glcount

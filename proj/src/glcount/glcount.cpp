#include <stdexcept>
#include <string>
#include <vector>

#include "npf/glcount.hpp"
#include "npf/primes.hpp"

namespace npf::glcount {

namespace {

void require_prime(std::uint64_t ell) {
    if (!is_prime_u64(ell)) throw std::invalid_argument("ell=" + std::to_string(ell) + " is not prime");
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::uint64_t modulus_of(const GroupParams& params) {
    require_prime(params.ell);
    if (params.n == 0) throw std::invalid_argument("level exponent n must be >= 1");
    if (params.k < 2) throw std::invalid_argument("weight k must be >= 2");
    std::uint64_t m = 1;
    for (unsigned i = 0; i < params.n; ++i) {
        m *= params.ell;
        if (m > kMaxBruteModulus)
            throw std::invalid_argument("ell^n exceeds the enumeration guard " + std::to_string(kMaxBruteModulus));
    }
    return m;
}

std::uint64_t det_mod(const Matrix2& g, std::uint64_t m) { return (g[0] * g[3] % m + m * m - g[1] * g[2] % m) % m; }

// Membership table for the image of x ↦ x^(k−1) on units of ℤ/m.
std::vector<bool> power_image(std::uint64_t m, std::uint64_t ell, unsigned k) {
    std::vector<bool> image(m, false);
    for (std::uint64_t x = 1; x < m; ++x) {
        if (x % ell == 0) continue;
        std::uint64_t r = 1;
        for (unsigned i = 0; i + 1 < k; ++i) r = r * x % m;
        image[r] = true;
    }
    return image;
}

template <class Visit>
void for_each_in_group(const GroupParams& params, std::uint64_t m, Visit&& visit) {
    const std::vector<bool> allowed = power_image(m, params.ell, params.k);
    Matrix2 g{};
    for (g[0] = 0; g[0] < m; ++g[0])
        for (g[1] = 0; g[1] < m; ++g[1])
            for (g[2] = 0; g[2] < m; ++g[2])
                for (g[3] = 0; g[3] < m; ++g[3])
                    if (allowed[det_mod(g, m)]) visit(g);
}

}  // namespace

std::uint64_t GroupParams::lambda() const { return gcd_u64(k - 1, ell - 1); }

BigInt order_G(const GroupParams& params) {
    require_prime(params.ell);
    const BigInt l(static_cast<unsigned long>(params.ell));
    BigInt r = (l * l - 1) * (l * l - l);
    return BigInt(r / static_cast<unsigned long>(params.lambda()));
}

BigInt count_C1(const GroupParams& params) {
    require_prime(params.ell);
    const BigInt l(static_cast<unsigned long>(params.ell));
    const unsigned long lam = params.lambda();
    BigInt r = l * l * l - (lam + 1) * l;
    return BigInt(r / lam);
}

bool has_fixed_primitive_vector(const Matrix2& g, std::uint64_t ell, std::uint64_t m) {
    const std::uint64_t a = (g[0] + m - 1) % m, b = g[1] % m, c = g[2] % m, d = (g[3] + m - 1) % m;
    // a kernel vector of g − I forces det(g − I) ≡ 0
    if ((a * d % m + m * m - b * c % m) % m != 0) return false;
    // primitive vectors up to unit scaling: (1, t) and (ℓs, 1)
    for (std::uint64_t t = 0; t < m; ++t)
        if ((a + b * t) % m == 0 && (c + d * t) % m == 0) return true;
    for (std::uint64_t s = 0; s < m; s += ell)
        if ((a * s + b) % m == 0 && (c * s + d) % m == 0) return true;
    return false;
}

bool in_C(const Matrix2& g, const GroupParams& params, C2Variant variant) {
    const std::uint64_t m = ipow(params.ell, params.n);
    if (has_fixed_primitive_vector(g, params.ell, m)) return true;
    if (params.n < 2 || variant == C2Variant::eigenvalue_one) return false;
    const std::uint64_t l = params.ell;
    if (variant == C2Variant::eigenvalue_one_or_identity_below)
        // identity mod ℓ^t for some t ≥ 1 ⇔ identity mod ℓ
        return g[0] % l == 1 % l && g[1] % l == 0 && g[2] % l == 0 && g[3] % l == 1 % l;
    // g − I nilpotent mod ℓ^t ⇔ nilpotent mod ℓ ⇔ char poly ≡ (Y−1)² mod ℓ
    const std::uint64_t tr = (g[0] + g[3]) % l;
    return tr == 2 % l && det_mod(g, l) == 1 % l;
}

std::uint64_t brute_count(const GroupParams& params, C2Variant variant) {
    const std::uint64_t m = modulus_of(params);
    std::uint64_t count = 0;
    for_each_in_group(params, m, [&](const Matrix2& g) {
        if (in_C(g, params, variant)) ++count;
    });
    return count;
}

std::uint64_t brute_order(const GroupParams& params) {
    const std::uint64_t m = modulus_of(params);
    std::uint64_t count = 0;
    for_each_in_group(params, m, [&](const Matrix2&) { ++count; });
    return count;
}

BigRational delta_density(const GroupParams& params) {
    BigRational d(count_C1(params), order_G(params));
    d.canonicalize();
    return d;
}

}  // namespace npf::glcount

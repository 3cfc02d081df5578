#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>

#include "npf/qexp.hpp"

namespace npf::qexp {

IntSeries::IntSeries(std::size_t precision) : coeffs_(precision) {
    if (precision == 0) throw std::invalid_argument("series precision must be at least 1");
}

IntSeries::IntSeries(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("series precision must be at least 1");
}

IntSeries IntSeries::one(std::size_t precision) {
    IntSeries s(precision);
    s[0] = 1;
    return s;
}

IntSeries IntSeries::truncated(std::size_t precision) const {
    if (precision == 0 || precision > coeffs_.size())
        throw std::invalid_argument("truncation must keep between 1 and " + std::to_string(coeffs_.size()) +
                                    " coefficients");
    return IntSeries(std::vector<BigInt>(coeffs_.begin(), coeffs_.begin() + precision));
}

IntSeries operator+(const IntSeries& a, const IntSeries& b) {
    IntSeries r(std::min(a.precision(), b.precision()));
    for (std::size_t i = 0; i < r.precision(); ++i) r[i] = a[i] + b[i];
    return r;
}

IntSeries operator-(const IntSeries& a, const IntSeries& b) {
    IntSeries r(std::min(a.precision(), b.precision()));
    for (std::size_t i = 0; i < r.precision(); ++i) r[i] = a[i] - b[i];
    return r;
}

IntSeries series_mul_schoolbook(const IntSeries& a, const IntSeries& b) {
    const std::size_t n = std::min(a.precision(), b.precision());
    IntSeries r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return r;
}

namespace {

constexpr std::size_t kLimbBits = GMP_NUMB_BITS;
constexpr std::size_t kKroneckerThreshold = 32;

std::size_t max_bits(std::span<const BigInt> c) {
    std::size_t bits = 0;
    for (const auto& x : c)
        if (sgn(x) != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    return bits;
}

// Σ c_i·2^(w·i) with w = slot_limbs·GMP_NUMB_BITS; signed entries are split
// into a positive and a negative image and subtracted once at the end.
BigInt pack(std::span<const BigInt> c, std::size_t slot_limbs) {
    const std::size_t total = c.size() * slot_limbs;
    BigInt pos, neg;
    mp_limb_t* pl = mpz_limbs_write(pos.get_mpz_t(), static_cast<mp_size_t>(total));
    mp_limb_t* nl = mpz_limbs_write(neg.get_mpz_t(), static_cast<mp_size_t>(total));
    std::memset(pl, 0, total * sizeof(mp_limb_t));
    std::memset(nl, 0, total * sizeof(mp_limb_t));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const mpz_srcptr z = c[i].get_mpz_t();
        const int s = mpz_sgn(z);
        if (s == 0) continue;
        const std::size_t n = mpz_size(z);
        std::memcpy((s > 0 ? pl : nl) + i * slot_limbs, mpz_limbs_read(z), n * sizeof(mp_limb_t));
    }
    mpz_limbs_finish(pos.get_mpz_t(), static_cast<mp_size_t>(total));
    mpz_limbs_finish(neg.get_mpz_t(), static_cast<mp_size_t>(total));
    return pos - neg;
}

IntSeries series_mul_kronecker(const IntSeries& a, const IntSeries& b) {
    const std::size_t n = std::min(a.precision(), b.precision());
    auto ac = a.coeffs().first(n);
    auto bc = b.coeffs().first(n);
    const std::size_t abits = max_bits(ac);
    const std::size_t bbits = max_bits(bc);
    if (abits == 0 || bbits == 0) return IntSeries(n);

    // |c_k| ≤ n·max|a|·max|b| < 2^(abits+bbits+⌈log2 n⌉); one more bit for the offset.
    const std::size_t log_n = std::bit_width(n);
    const std::size_t slot_bits = abits + bbits + log_n + 1;
    const std::size_t slot_limbs = (slot_bits + kLimbBits - 1) / kLimbBits;

    BigInt z = pack(ac, slot_limbs) * pack(bc, slot_limbs);

    // Adding 2^(w−1) to every slot turns the signed digits into ordinary
    // base-2^w digits in (0, 2^w), so they can be read straight off the limbs.
    const std::size_t total = n * slot_limbs;
    BigInt offset;
    {
        mp_limb_t* ol = mpz_limbs_write(offset.get_mpz_t(), static_cast<mp_size_t>(total));
        std::memset(ol, 0, total * sizeof(mp_limb_t));
        for (std::size_t k = 0; k < n; ++k) ol[k * slot_limbs + slot_limbs - 1] = mp_limb_t(1) << (kLimbBits - 1);
        mpz_limbs_finish(offset.get_mpz_t(), static_cast<mp_size_t>(total));
    }
    z += offset;
    mpz_fdiv_r_2exp(z.get_mpz_t(), z.get_mpz_t(), total * kLimbBits);

    BigInt half;
    mpz_setbit(half.get_mpz_t(), slot_limbs * kLimbBits - 1);

    IntSeries r(n);
    const mp_limb_t* zl = mpz_limbs_read(z.get_mpz_t());
    const std::size_t zsize = mpz_size(z.get_mpz_t());
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k * slot_limbs;
        std::size_t len = 0;
        if (lo < zsize) len = std::min(slot_limbs, zsize - lo);
        mpz_ptr out = r[k].get_mpz_t();
        if (len > 0) {
            mp_limb_t* dst = mpz_limbs_write(out, static_cast<mp_size_t>(len));
            std::memcpy(dst, zl + lo, len * sizeof(mp_limb_t));
            mpz_limbs_finish(out, static_cast<mp_size_t>(len));
        }
        r[k] -= half;
    }
    return r;
}

}  // namespace

IntSeries series_mul(const IntSeries& a, const IntSeries& b) {
    if (std::min(a.precision(), b.precision()) < kKroneckerThreshold) return series_mul_schoolbook(a, b);
    return series_mul_kronecker(a, b);
}

IntSeries series_pow(const IntSeries& a, unsigned e) {
    IntSeries result = IntSeries::one(a.precision());
    IntSeries base = a;
    bool first = true;
    while (e != 0) {
        if (e & 1u) {
            result = first ? base : series_mul(result, base);
            first = false;
        }
        e >>= 1;
        if (e != 0) base = series_mul(base, base);
    }
    return result;
}

IntSeries eta_product(std::size_t N) {
    if (N == 0) throw std::invalid_argument("eta_product: precision must be at least 1");
    IntSeries r(N);
    r[0] = 1;
    // ∏(1 − qⁿ) = Σ_{j∈ℤ} (−1)^j q^{j(3j−1)/2}
    for (std::size_t j = 1;; ++j) {
        const std::size_t g1 = j * (3 * j - 1) / 2;
        const std::size_t g2 = j * (3 * j + 1) / 2;
        if (g1 >= N) break;
        const long sign = (j % 2 == 1) ? -1 : 1;
        r[g1] = sign;
        if (g2 < N) r[g2] = sign;
    }
    return r;
}

}  // namespace npf::qexp

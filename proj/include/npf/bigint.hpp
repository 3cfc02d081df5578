#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace npf {

using BigInt = mpz_class;
using BigRational = mpq_class;  // canonical form: reduced, positive denominator

inline BigInt pow_ui(std::uint64_t base, unsigned long exponent) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
    return r;
}

inline std::string to_string(const BigInt& n) { return n.get_str(10); }

inline std::string to_string(const BigRational& q) {
    return q.get_den() == 1 ? q.get_num().get_str(10) : q.get_str(10);
}

/// 4·p^(k−1) ≥ a², i.e. |a| ≤ 2·p^((k−1)/2), decided without floating point.
inline bool within_deligne_bound(const BigInt& a, std::uint64_t p, unsigned weight) {
    BigInt rhs = pow_ui(p, weight - 1) * 4;
    return BigInt(a * a) <= rhs;
}

}  // namespace npf

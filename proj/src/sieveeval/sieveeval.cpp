#include <cmath>
#include <sstream>
#include <vector>

#include "npf/glcount.hpp"
#include "npf/primes.hpp"
#include "npf/sieveeval.hpp"

namespace npf::sieve {

namespace {

std::string describe(const SieveParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << p.alpha << " u=" << p.u << " v=" << p.v << " lambda=" << p.lambda;
    return os.str();
}

std::optional<std::string> ordering_violation(const SieveParams& p) {
    if (!(p.alpha > 0)) return "alpha > 0";
    if (!(1.0 / p.alpha < p.u)) return "1/alpha < u";
    if (!(p.u < p.v)) return "u < v";
    if (!(2.0 / p.alpha <= p.v)) return "2/alpha <= v";
    if (!(p.v <= 4.0 / p.alpha)) return "v <= 4/alpha";
    return std::nullopt;
}

void require_weight(unsigned k) {
    if (k < 4) throw std::invalid_argument("weight k=" + std::to_string(k) + " must be >= 4");
}

}  // namespace

std::optional<std::string> admissibility_violation(const SieveParams& params) {
    if (auto v = ordering_violation(params)) return v;
    if (!(params.lambda > 0)) return "lambda > 0";
    return std::nullopt;
}

double richert_F(const SieveParams& p) {
    if (auto violated = ordering_violation(p)) throw InadmissibleParams(*violated, describe(p));
    if (!(p.lambda >= 0)) throw InadmissibleParams("lambda >= 0", describe(p));
    const long double a = p.alpha, u = p.u, v = p.v, lam = p.lambda;
    const long double av = a * v, au = a * u;
    const long double body = std::log(av - 1) - lam * au * std::log(v / u) + lam * (au - 1) * std::log((av - 1) / (au - 1));
    return static_cast<double>(2 * std::exp(kEulerGamma) / av * body);
}

std::string to_string(Family family) {
    switch (family) {
        case Family::g1: return "g1";
        case Family::g2: return "g2";
        case Family::g3: return "g3";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    if (name == "g1") return Family::g1;
    if (name == "g2") return Family::g2;
    if (name == "g3") return Family::g3;
    throw std::invalid_argument("unknown sieve family '" + std::string(name) + "' (expected g1, g2 or g3)");
}

SieveParams FamilyParams::numeric() const {
    return {alpha.get_d(), u.get_d(), v.get_d(), lambda};
}

FamilyParams params_family(Family family, unsigned k) {
    require_weight(k);
    FamilyParams fp;
    fp.family = family;
    fp.k = k;
    const long km1 = static_cast<long>(k) - 1, kk = k;
    switch (family) {
        case Family::g1:
            fp.alpha = BigRational(km1, 5 * kk);
            fp.u = BigRational(5 * kk + 1, km1);
            fp.v = BigRational(20 * kk, km1);
            break;
        case Family::g2:
            fp.alpha = BigRational(km1, 5 * kk);
            fp.u = BigRational(8 * kk + 1, km1);
            fp.v = BigRational(16 * kk, km1);
            break;
        case Family::g3:
            fp.alpha = BigRational(km1, 8 * kk);
            fp.u = BigRational(8 * kk + 1, km1);
            fp.v = BigRational(32 * kk, km1);
            break;
    }
    fp.alpha.canonicalize();
    fp.u.canonicalize();
    fp.v.canonicalize();
    fp.lambda = 1.0 / std::sqrt(std::log(static_cast<double>(k)));

    // checked on the rationals so no rounding can hide a boundary case
    const BigRational inv_alpha = 1 / fp.alpha;
    if (!(inv_alpha < fp.u && fp.u < fp.v && 2 * inv_alpha <= fp.v && fp.v <= 4 * inv_alpha))
        throw std::logic_error("family " + to_string(family) + " inadmissible at k=" + std::to_string(k));
    return fp;
}

double g_closed(Family family, double k) {
    if (!(k > 1)) throw std::invalid_argument("g_closed needs k > 1 so that sqrt(log k) is positive");
    const long double K = k, s = std::sqrt(std::log(K)), eg = std::exp(kEulerGamma);
    switch (family) {
        case Family::g1:
            return static_cast<double>(eg * (5 * K * std::log(3.0L) * s + std::log(15 * K) - (1 + 5 * K) * std::log(20 * K / (1 + 5 * K))) /
                                       (10 * K * s));
        case Family::g2:
            return static_cast<double>(eg / (16 * K * s) *
                                       (5 * std::log(11.0L / 5) * K * s + (3 * K + 1) * std::log(11 * K / (3 * K + 1)) -
                                        (8 * K + 1) * std::log(16 * K / (8 * K + 1))));
        case Family::g3:
            return static_cast<double>(eg / (32 * K * s) *
                                       (8 * std::log(3.0L) * K * s + std::log(24 * K) - (1 + 8 * K) * std::log(32 * K / (1 + 8 * K))));
    }
    return 0;
}

double positivity_threshold(Family family, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("threshold bracket needs lo < hi");
    double flo = g_closed(family, lo), fhi = g_closed(family, hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo < 0) == (fhi < 0)) {
        std::ostringstream os;
        os.precision(12);
        os << "no sign change for " << to_string(family) << " on [" << lo << ", " << hi << "]: values " << flo << ", " << fhi;
        throw std::domain_error(os.str());
    }
    while (hi - lo > 1e-11) {
        const double mid = lo + (hi - lo) / 2;
        const double fm = g_closed(family, mid);
        if (fm == 0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

BoundSet bounds(unsigned k) {
    require_weight(k);
    const double root = std::sqrt(std::log(static_cast<double>(k)));
    BoundSet b;
    b.k = k;
    b.omega_bound = static_cast<std::uint64_t>(std::floor(5.0 * k + 1 + root));
    b.big_omega_bound = static_cast<std::uint64_t>(std::floor(8.0 * k + 1 + root));
    b.grh_omega_bound = b.big_omega_bound;
    b.selberg_exponent = 9ull * k - 8;
    return b;
}

MertensProduct mertens_W(std::uint64_t z, unsigned k, Parallelism par) {
    MertensProduct out;
    out.w_log_z = z > 0 ? std::log(static_cast<double>(z)) : 0;
    if (z <= 2) return out;
    if (z - 1 > 0xffffffffull) throw std::out_of_range("mertens_W: z too large");
    auto primes = cached_primes(static_cast<std::uint32_t>(z - 1));

    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
    std::vector<long double> partial(blocks, 1.0L);
    parallel_for(blocks, par, [&](std::size_t b) {
        long double acc = 1;
        const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            const BigRational d = glcount::delta_density({primes[i], k, 1});
            acc *= 1 - static_cast<long double>(d.get_d());
        }
        partial[b] = acc;
    });
    long double w = 1;
    for (long double x : partial) w *= x;  // fixed order: identical for any thread count
    out.w = static_cast<double>(w);
    out.w_log_z = static_cast<double>(w * std::log(static_cast<long double>(z)));
    return out;
}

}  // namespace npf::sieve

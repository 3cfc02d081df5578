#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "npf/factor.hpp"
#include "npf/primes.hpp"

namespace npf::npstats {

namespace {

constexpr unsigned long kMillerRabinBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// Miller–Rabin with the 13 bases above has no strong pseudoprime below this.
const BigInt& deterministic_limit() {
    static const BigInt limit("3317044064679887385961981");
    return limit;
}

using Clock = std::chrono::steady_clock;

}  // namespace

std::string_view to_string(CofactorStatus s) {
    switch (s) {
        case CofactorStatus::none: return "none";
        case CofactorStatus::probable_prime: return "probable-prime";
        case CofactorStatus::composite_unfactored: return "composite-unfactored";
    }
    return "?";
}

unsigned FactoredInteger::omega() const noexcept {
    unsigned w = static_cast<unsigned>(factors.size());
    if (cofactor_status == CofactorStatus::probable_prime) w += 1;
    if (cofactor_status == CofactorStatus::composite_unfactored) w += 2;
    return w;
}

unsigned FactoredInteger::big_omega() const noexcept {
    unsigned w = 0;
    for (const auto& f : factors) w += f.exponent;
    if (cofactor_status == CofactorStatus::probable_prime) w += 1;
    if (cofactor_status == CofactorStatus::composite_unfactored) w += 2;
    return w;
}

BigInt FactoredInteger::product() const {
    BigInt r = 1, pe;
    for (const auto& f : factors) {
        mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        r *= pe;
    }
    if (cofactor) r *= *cofactor;
    return r;
}

std::string FactoredInteger::render() const {
    std::vector<std::pair<BigInt, std::string>> parts;
    for (const auto& f : factors) {
        std::string s = f.prime.get_str();
        if (f.exponent > 1) s += "^" + std::to_string(f.exponent);
        parts.emplace_back(f.prime, std::move(s));
    }
    if (cofactor) {
        std::string s = cofactor->get_str();
        if (cofactor_status == CofactorStatus::composite_unfactored) s = "[" + s + "]";
        parts.emplace_back(*cofactor, std::move(s));
    }
    std::ranges::sort(parts, [](const auto& a, const auto& b) { return a.first < b.first; });
    if (parts.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '*';
        out += parts[i].second;
    }
    return out;
}

bool strong_probable_prime(const BigInt& n, unsigned long base) {
    if (n < 2) return false;
    if (n == 2 || n == 3) return true;
    if (mpz_even_p(n.get_mpz_t())) return false;
    BigInt a = base;
    mpz_mod(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    if (a == 0) return true;  // base is a multiple of n: no information
    BigInt nm1 = n - 1;
    BigInt d = nm1;
    const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    BigInt x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

bool strong_lucas_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    if (n == 2) return true;
    if (mpz_even_p(n.get_mpz_t())) return false;
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;

    // Selfridge: first D in 5, −7, 9, −11, … with (D/n) = −1
    long D = 5;
    for (;;) {
        BigInt dz = D;
        const int j = mpz_jacobi(dz.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0 && abs(dz) != n) return false;
        D = D > 0 ? -(D + 2) : -D + 2;
    }
    const long P = 1;
    const BigInt Q = BigInt(1 - D) / 4;

    BigInt d = n + 1;
    const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    auto halve = [&n](BigInt& x) {
        if (mpz_odd_p(x.get_mpz_t())) x += n;
        mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    };

    BigInt U = 1, V = P, Qk = Q;
    mpz_mod(Qk.get_mpz_t(), Qk.get_mpz_t(), n.get_mpz_t());
    const BigInt Dz = D;
    for (long bit = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        // k → 2k
        U = U * V;
        mpz_mod(U.get_mpz_t(), U.get_mpz_t(), n.get_mpz_t());
        V = V * V - 2 * Qk;
        mpz_mod(V.get_mpz_t(), V.get_mpz_t(), n.get_mpz_t());
        Qk = Qk * Qk;
        mpz_mod(Qk.get_mpz_t(), Qk.get_mpz_t(), n.get_mpz_t());
        if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            // k → k+1
            BigInt U1 = P * U + V;
            BigInt V1 = Dz * U + P * V;
            halve(U1);
            halve(V1);
            U = std::move(U1);
            V = std::move(V1);
            Qk = Qk * Q;
            mpz_mod(Qk.get_mpz_t(), Qk.get_mpz_t(), n.get_mpz_t());
        }
    }
    if (U == 0 || V == 0) return true;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
        V = V * V - 2 * Qk;
        mpz_mod(V.get_mpz_t(), V.get_mpz_t(), n.get_mpz_t());
        if (V == 0) return true;
        Qk = Qk * Qk;
        mpz_mod(Qk.get_mpz_t(), Qk.get_mpz_t(), n.get_mpz_t());
    }
    return false;
}

Primality primality(const BigInt& n) {
    if (n < 2) return Primality::composite;
    if (mpz_fits_ulong_p(n.get_mpz_t()))
        return is_prime_u64(mpz_get_ui(n.get_mpz_t())) ? Primality::prime : Primality::composite;
    for (unsigned long b : kMillerRabinBases) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return Primality::composite;
        if (!strong_probable_prime(n, b)) return Primality::composite;
    }
    if (n < deterministic_limit()) return Primality::prime;
    return strong_lucas_probable_prime(n) ? Primality::probable_prime : Primality::composite;
}

std::uint64_t rho_seed(const BigInt& n, unsigned round) {
    // FNV-1a over the limbs, then a splitmix64 finalizer keyed by the round
    std::uint64_t h = 0xcbf29ce484222325ull;
    const mp_limb_t* limbs = mpz_limbs_read(n.get_mpz_t());
    for (std::size_t i = 0; i < mpz_size(n.get_mpz_t()); ++i) {
        std::uint64_t limb = limbs[i];
        for (int b = 0; b < 8; ++b) {
            h ^= (limb >> (8 * b)) & 0xff;
            h *= 0x100000001b3ull;
        }
    }
    std::uint64_t z = h + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(round) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

std::optional<BigInt> pollard_brent_until(const BigInt& n, std::uint64_t seed, std::uint64_t iterations,
                                          std::optional<Clock::time_point> deadline) {
    if (n < 4) return std::nullopt;
    if (mpz_even_p(n.get_mpz_t())) return BigInt(2);

    // c ∈ [1, n−3], y0 ∈ [0, n−1]
    BigInt c = BigInt(static_cast<unsigned long>(seed >> 1));
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), BigInt(n - 3).get_mpz_t());
    c += 1;
    BigInt y = BigInt(static_cast<unsigned long>(seed * 0x2545f4914f6cdd1dull));
    mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());

    auto step = [&](BigInt& v) {
        mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
        v += c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };

    constexpr std::uint64_t kBatch = 128;
    BigInt x, ys, q = 1, g = 1, diff;
    std::uint64_t r = 1, used = 0;
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) step(y);
        used += r;
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            const std::uint64_t m = std::min(kBatch, r - k);
            for (std::uint64_t i = 0; i < m; ++i) {
                step(y);
                diff = x - y;
                mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
                q *= diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += m;
            used += m;
            if (used >= iterations) break;
            if (deadline && Clock::now() > *deadline) break;
        }
        if (g != 1) break;
        if (used >= iterations) return std::nullopt;
        if (deadline && Clock::now() > *deadline) return std::nullopt;
        r *= 2;
    }
    if (g == n) {
        // the batch overshot; replay it one step at a time
        do {
            step(ys);
            diff = x - ys;
            mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == n || g == 1) return std::nullopt;
    return g;
}

// Block products of the trial primes, grouped so a single gcd rules out a whole block.
struct TrialBlocks {
    std::vector<std::uint32_t> primes;
    std::vector<std::size_t> starts;  // block b covers primes[starts[b] .. starts[b+1])
    std::vector<BigInt> products;
};

constexpr std::size_t kBlockSize = 256;
constexpr std::uint32_t kDirectTrialLimit = 1000;

const TrialBlocks& trial_blocks(std::uint32_t bound) {
    static std::mutex mutex;
    static std::map<std::uint32_t, std::unique_ptr<const TrialBlocks>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[bound];
    if (!slot) {
        auto tb = std::make_unique<TrialBlocks>();
        auto all = cached_primes(bound);
        for (std::uint32_t p : all)
            if (p > kDirectTrialLimit) tb->primes.push_back(p);
        for (std::size_t i = 0; i < tb->primes.size(); i += kBlockSize) {
            tb->starts.push_back(i);
            BigInt prod = 1;
            for (std::size_t j = i; j < std::min(i + kBlockSize, tb->primes.size()); ++j) prod *= tb->primes[j];
            tb->products.push_back(std::move(prod));
        }
        tb->starts.push_back(tb->primes.size());
        slot = std::move(tb);
    }
    return *slot;
}

struct Piece {
    BigInt value;
    unsigned multiplicity;
};

void strip(BigInt& n, unsigned long p, std::map<BigInt, PrimePower>& found) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
    }
    if (e) found.emplace(BigInt(p), PrimePower{BigInt(p), e, true});
}

}  // namespace

std::optional<BigInt> pollard_brent(const BigInt& n, std::uint64_t seed, std::uint64_t iterations) {
    return pollard_brent_until(n, seed, iterations, std::nullopt);
}

FactoredInteger factorize(const BigInt& n_in, const FactorBudget& budget) {
    if (n_in < 1) throw std::invalid_argument("factorize: n must be >= 1, got " + n_in.get_str());
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget.seconds));

    std::map<BigInt, PrimePower> found;
    BigInt n = n_in;

    // trial division; once n < p² whatever is left is 1 or prime
    bool settled = false;
    for (std::uint32_t p : cached_primes(std::min(budget.trial_bound, kDirectTrialLimit))) {
        if (n == 1) break;
        if (BigInt(p) * p > n) {
            settled = true;
            break;
        }
        strip(n, p, found);
    }
    if (!settled && budget.trial_bound > kDirectTrialLimit && n > 1) {
        const TrialBlocks& tb = trial_blocks(budget.trial_bound);
        BigInt g;
        for (std::size_t b = 0; b + 1 < tb.starts.size() && n > 1; ++b) {
            const BigInt first = tb.primes[tb.starts[b]];
            if (first * first > n) {
                settled = true;
                break;
            }
            mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), tb.products[b].get_mpz_t());
            if (g == 1) continue;
            for (std::size_t j = tb.starts[b]; j < tb.starts[b + 1]; ++j)
                if (mpz_divisible_ui_p(g.get_mpz_t(), tb.primes[j])) strip(n, tb.primes[j], found);
        }
    }

    std::vector<Piece> composites;
    std::vector<Piece> pending;
    if (n > 1) {
        if (settled)
            found.emplace(n, PrimePower{n, 1, true});
        else
            pending.push_back({n, 1});
    }

    auto add_prime = [&found](const BigInt& p, unsigned mult, bool proven) {
        auto [it, inserted] = found.try_emplace(p, PrimePower{p, mult, proven});
        if (!inserted) it->second.exponent += mult;
    };

    while (!pending.empty()) {
        Piece piece = std::move(pending.back());
        pending.pop_back();
        const Primality verdict = primality(piece.value);
        if (verdict != Primality::composite) {
            add_prime(piece.value, piece.multiplicity, verdict == Primality::prime);
            continue;
        }
        if (mpz_perfect_power_p(piece.value.get_mpz_t())) {
            // largest exponent first so the root is not itself a perfect power
            BigInt root;
            for (unsigned long e = mpz_sizeinbase(piece.value.get_mpz_t(), 2); e >= 2; --e) {
                if (mpz_root(root.get_mpz_t(), piece.value.get_mpz_t(), e)) {
                    pending.push_back({root, piece.multiplicity * static_cast<unsigned>(e)});
                    break;
                }
            }
            continue;
        }
        std::optional<BigInt> d;
        for (unsigned round = 0; round < budget.rho_rounds && !d; ++round) {
            if (Clock::now() > deadline) break;
            d = pollard_brent_until(piece.value, rho_seed(piece.value, round), budget.rho_iterations, deadline);
        }
        if (d) {
            BigInt other = piece.value / *d;
            pending.push_back({*d, piece.multiplicity});
            pending.push_back({std::move(other), piece.multiplicity});
        } else {
            composites.push_back(std::move(piece));
        }
    }

    FactoredInteger out;
    std::vector<PrimePower> unproven;
    for (auto& [p, pp] : found) {
        if (pp.proven)
            out.factors.push_back(pp);
        else
            unproven.push_back(pp);
    }
    if (!composites.empty()) {
        BigInt c = 1, pe;
        for (const auto& piece : composites) {
            mpz_pow_ui(pe.get_mpz_t(), piece.value.get_mpz_t(), piece.multiplicity);
            c *= pe;
        }
        out.cofactor = c;
        out.cofactor_status = CofactorStatus::composite_unfactored;
        out.factors.insert(out.factors.end(), unproven.begin(), unproven.end());
    } else if (unproven.size() == 1 && unproven.front().exponent == 1) {
        out.cofactor = unproven.front().prime;
        out.cofactor_status = CofactorStatus::probable_prime;
    } else {
        out.factors.insert(out.factors.end(), unproven.begin(), unproven.end());
    }
    std::ranges::sort(out.factors, [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });

    if (out.product() != n_in) throw std::logic_error("factorization of " + n_in.get_str() + " does not multiply back");
    return out;
}

}  // namespace npf::npstats

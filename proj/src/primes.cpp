#include "npf/primes.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace npf {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    out.push_back(2);
    // index i represents 2i+1
    const std::size_t half = (static_cast<std::size_t>(limit) + 1) / 2;
    std::vector<bool> composite(half, false);
    for (std::size_t i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        out.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = true;
    }
    return out;
}

std::span<const std::uint32_t> cached_primes(std::uint32_t limit) {
    static std::mutex mutex;
    // Earlier generations stay alive so spans handed out before a regrow
    // remain valid for the life of the process.
    static std::vector<std::unique_ptr<const std::vector<std::uint32_t>>> generations;
    static std::uint32_t sieved_to = 0;
    std::lock_guard lock(mutex);
    if (generations.empty() || limit > sieved_to) {
        std::uint64_t target = std::max<std::uint64_t>({limit, 2ull * sieved_to, 1u << 16});
        target = std::min<std::uint64_t>(target, 0xffffffffull);
        generations.push_back(std::make_unique<const std::vector<std::uint32_t>>(
            primes_up_to(static_cast<std::uint32_t>(target))));
        sieved_to = static_cast<std::uint32_t>(target);
    }
    const auto& primes = *generations.back();
    auto end = std::upper_bound(primes.begin(), primes.end(), limit);
    return {primes.data(), static_cast<std::size_t>(end - primes.begin())};
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this base set is deterministic below 3.3e24
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace npf

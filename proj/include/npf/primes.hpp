#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace npf {

/// All primes ≤ limit (sieve of Eratosthenes, odd-only bitmap).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Cached primes ≤ limit; shares one sieve per process and grows on demand.
std::span<const std::uint32_t> cached_primes(std::uint32_t limit);

/// Deterministic Miller–Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace npf

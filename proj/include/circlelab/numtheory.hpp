#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace circlelab::nt {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t mod(std::int64_t a, std::int64_t m) noexcept {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;

/// Inverse of a modulo m by the extended Euclidean algorithm. Requires
/// gcd(a, m) == 1; m == 1 returns 0.
std::int64_t modinv(std::int64_t a, std::int64_t m);

bool is_prime(std::uint64_t n) noexcept;
std::vector<std::uint32_t> primes_up_to(std::uint32_t n);

/// Prime factorization as (p, k) pairs in increasing p.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

std::uint64_t divisor_count(std::uint64_t n);       // τ(n)
std::uint64_t divisor_count3(std::uint64_t n);      // τ₃(n)
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);  // ascending

/// Smallest-prime-factor sieve over [0, n].
class FactorSieve {
 public:
  explicit FactorSieve(std::uint32_t n);
  std::uint32_t limit() const noexcept { return static_cast<std::uint32_t>(spf_.size() - 1); }
  std::uint32_t smallest_factor(std::uint32_t m) const { return spf_[m]; }
  std::vector<std::pair<std::uint32_t, int>> factorize(std::uint32_t m) const;

 private:
  std::vector<std::uint32_t> spf_;
};

}  // namespace circlelab::nt

#include "circlelab/numtheory.hpp"

#include <algorithm>

#include "circlelab/error.hpp"

namespace circlelab::nt {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::int64_t modinv(std::int64_t a, std::int64_t m) {
  if (m <= 0) throw Error(ErrorCode::InvalidModulus, "modinv with non-positive modulus");
  if (m == 1) return 0;
  std::int64_t old_r = mod(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    std::int64_t tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw Error(ErrorCode::CoprimalityViolation, "modinv of a non-unit");
  return mod(old_s, m);
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t d = 1;
  for (auto [p, k] : factorize(n)) d *= static_cast<std::uint64_t>(k + 1);
  return d;
}

std::uint64_t divisor_count3(std::uint64_t n) {
  std::uint64_t d = 1;
  for (auto [p, k] : factorize(n)) {
    const auto kk = static_cast<std::uint64_t>(k);
    d *= (kk + 1) * (kk + 2) / 2;
  }
  return d;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (auto [p, k] : factorize(n)) result = result / p * (p - 1);
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (auto [p, k] : factorize(n)) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (int e = 1; e <= k; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FactorSieve::FactorSieve(std::uint32_t n) : spf_(static_cast<std::size_t>(n) + 1, 0) {
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (spf_[i] != 0) continue;
    for (std::uint64_t j = i; j <= n; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::vector<std::pair<std::uint32_t, int>> FactorSieve::factorize(std::uint32_t m) const {
  std::vector<std::pair<std::uint32_t, int>> out;
  while (m > 1) {
    const std::uint32_t p = spf_[m];
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  return out;
}

}  // namespace circlelab::nt

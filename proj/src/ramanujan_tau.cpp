#include "circlelab/ramanujan_tau.hpp"

#include <array>
#include <string>

#include "circlelab/error.hpp"

namespace circlelab::coeffs {
namespace {

using u64 = std::uint64_t;

// All satisfy 2²³ | p − 1. The last one is the top Garner digit; the product
// of the first four (≈ 7.13e35) bounds |τ(n)| for n ≤ 10⁶.
constexpr std::array<u64, 5> kPrimes{2013265921ULL, 469762049ULL, 754974721ULL, 998244353ULL,
                                     167772161ULL};
constexpr std::uint32_t kMaxLimit = 1000000;

u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1U) r = r * b % m;
    b = b * b % m;
    e >>= 1U;
  }
  return r;
}

u64 primitive_root(u64 p) {
  const auto factors = nt::factorize(p - 1);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (auto [f, k] : factors) {
      if (pow_mod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

void ntt(std::vector<u64>& a, u64 p, u64 root, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; j & bit; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1U) {
    u64 w = pow_mod(root, (p - 1) / len, p);
    if (inverse) w = pow_mod(w, p - 2, p);
    const std::size_t half = len >> 1U;
    std::vector<u64> tw(half);
    tw[0] = 1;
    for (std::size_t k = 1; k < half; ++k) tw[k] = tw[k - 1] * w % p;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const u64 u = a[i + k];
        const u64 v = a[i + k + half] * tw[k] % p;
        a[i + k] = u + v >= p ? u + v - p : u + v;
        a[i + k + half] = u >= v ? u - v : u + p - v;
      }
    }
  }
  if (inverse) {
    const u64 inv_n = pow_mod(n % p, p - 2, p);
    for (auto& x : a) x = x * inv_n % p;
  }
}

// (series)^8 truncated to `len` coefficients, modulo p.
std::vector<u64> eighth_power_mod(const std::vector<std::int64_t>& series, std::size_t len, u64 p) {
  std::size_t size = 1;
  while (size < 2 * len) size <<= 1U;
  const u64 root = primitive_root(p);
  std::vector<u64> cur(len);
  for (std::size_t i = 0; i < len; ++i) cur[i] = static_cast<u64>(nt::mod(series[i], static_cast<std::int64_t>(p)));
  for (int step = 0; step < 3; ++step) {
    std::vector<u64> buf(size, 0);
    std::copy(cur.begin(), cur.end(), buf.begin());
    ntt(buf, p, root, false);
    for (auto& x : buf) x = x * x % p;
    ntt(buf, p, root, true);
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(len), cur.begin());
  }
  return cur;
}

}  // namespace

std::vector<nt::i128> ramanujan_tau(std::uint32_t limit) {
  if (limit > kMaxLimit) {
    throw Error(ErrorCode::InvalidArgument,
                "tau generation supports limit <= 1e6, got " + std::to_string(limit));
  }
  std::vector<nt::i128> tau(static_cast<std::size_t>(limit) + 1, 0);
  if (limit == 0) return tau;
  const std::size_t len = limit;  // coefficients of q^0 .. q^{limit-1} of ∏(1−qⁿ)²⁴
  std::vector<std::int64_t> jacobi(len, 0);
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t e = k * (k + 1) / 2;
    if (e >= static_cast<std::int64_t>(len)) break;
    jacobi[static_cast<std::size_t>(e)] = (k % 2 == 0 ? 1 : -1) * (2 * k + 1);
  }

  std::array<std::vector<u64>, kPrimes.size()> residues;
  for (std::size_t i = 0; i < kPrimes.size(); ++i) residues[i] = eighth_power_mod(jacobi, len, kPrimes[i]);

  // Garner coefficients: inv[i][j] = m_j^{-1} mod m_i for j < i.
  std::array<std::array<u64, kPrimes.size()>, kPrimes.size()> inv{};
  for (std::size_t i = 0; i < kPrimes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) inv[i][j] = pow_mod(kPrimes[j] % kPrimes[i], kPrimes[i] - 2, kPrimes[i]);
  }
  nt::u128 lower_range = 1;
  for (std::size_t i = 0; i + 1 < kPrimes.size(); ++i) lower_range *= kPrimes[i];
  const u64 top = kPrimes.back();

  for (std::size_t n = 0; n < len; ++n) {
    std::array<u64, kPrimes.size()> digit{};
    for (std::size_t i = 0; i < kPrimes.size(); ++i) {
      const u64 m = kPrimes[i];
      u64 x = residues[i][n];
      for (std::size_t j = 0; j < i; ++j) {
        x = (x + m - digit[j] % m) % m;
        x = x * inv[i][j] % m;
      }
      digit[i] = x;
    }
    nt::u128 value = 0;
    nt::u128 radix = 1;
    for (std::size_t i = 0; i + 1 < kPrimes.size(); ++i) {
      value += radix * digit[i];
      radix *= kPrimes[i];
    }
    nt::i128 signed_value;
    if (digit.back() == 0) {
      signed_value = static_cast<nt::i128>(value);
    } else if (digit.back() == top - 1) {
      signed_value = static_cast<nt::i128>(value) - static_cast<nt::i128>(lower_range);
    } else {
      throw Error(ErrorCode::InvalidArgument, "tau coefficient exceeded the CRT range");
    }
    tau[n + 1] = signed_value;
  }
  return tau;
}

}  // namespace circlelab::coeffs

#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlelab/numtheory.hpp"

namespace circlelab::coeffs {

/// GL(2) Hecke data of a level-1 holomorphic eigenform: τ(p) at primes in
/// the arithmetic normalization, and λ(p) = τ(p)/p^{(k−1)/2}.
class HeckeSource {
 public:
  HeckeSource(int weight, std::map<std::uint64_t, nt::i128> raw_coeffs);

  /// The weight-12 form Δ with τ(p) for every prime p ≤ limit.
  static HeckeSource ramanujan(std::uint32_t limit);

  /// Reads "p tau(p)" lines (comments start with '#'); the first
  /// non-comment line is "weight k".
  static HeckeSource from_file(const std::filesystem::path& path);

  int weight() const noexcept { return weight_; }
  std::uint64_t prime_limit() const noexcept { return prime_limit_; }
  bool has_prime(std::uint64_t p) const { return lambda_.count(p) != 0; }
  nt::i128 raw(std::uint64_t p) const;
  double lambda(std::uint64_t p) const;

  /// λ(p^k) by λ(p^{k+1}) = λ(p)λ(p^k) − λ(p^{k−1}).
  double lambda_prime_power(std::uint64_t p, int k) const;

 private:
  int weight_;
  std::map<std::uint64_t, nt::i128> raw_;
  std::map<std::uint64_t, double> lambda_;
  std::uint64_t prime_limit_ = 0;
};

/// Satake parameters {a², 1, a⁻²} of the symmetric-square lift at p, with
/// a + a⁻¹ = λ(p) and |a| = 1.
struct SatakeTriple {
  std::complex<double> a_sq;

  static SatakeTriple from_lambda(double lambda);
  std::complex<double> product() const { return a_sq * std::complex<double>(1.0) * (1.0 / a_sq); }
};

/// Complete homogeneous symmetric polynomial h_m(a², 1, a⁻²).
std::complex<double> complete_homogeneous(const SatakeTriple& t, int m);

/// Schur polynomial s_{(λ1, λ2, 0)}(a², 1, a⁻²) by Jacobi–Trudi.
std::complex<double> schur_two_row(const SatakeTriple& t, int l1, int l2);

inline constexpr int kDefaultMaxDepth = 64;

/// A(p^k, p^j) = s_{(k+j, j, 0)} in the Satake triple at p. The imaginary
/// residue is checked against 1e−12 (relative to the term size) and dropped.
double coeff_prime_power(const HeckeSource& source, std::uint64_t p, int k, int j,
                         int max_depth = kDefaultMaxDepth);

enum class Backend : std::uint8_t {
  Sym2Tau = 1,
  Unit = 2,      // A(n,1) ≡ 1
  Absolute = 3,  // |A(n,1)| of a sym²-τ table
};

std::string to_string(Backend b);
Backend backend_from_string(const std::string& name);

struct TwoDimLimits {
  std::uint64_t d1 = 0;
  std::uint64_t d2 = 0;
};

/// Immutable table of A(n,1) for 1 ≤ n ≤ N and optionally a block A(d₁,d₂).
class CoefficientTable {
 public:
  CoefficientTable(Backend backend, std::vector<double> a_n1, std::optional<TwoDimLimits> block_limits = {},
                   std::vector<double> block = {});

  Backend backend() const noexcept { return backend_; }
  std::uint64_t limit() const noexcept { return a_n1_.size(); }
  double at(std::uint64_t n) const;  // A(n,1)
  const std::vector<double>& values() const noexcept { return a_n1_; }

  bool has_block() const noexcept { return block_limits_.has_value(); }
  TwoDimLimits block_limits() const { return block_limits_.value_or(TwoDimLimits{}); }
  double at2(std::uint64_t d1, std::uint64_t d2) const;  // A(d₁,d₂)
  const std::vector<double>& block() const noexcept { return block_; }

  /// Same shape with every entry replaced by |A|.
  CoefficientTable absolute() const;

 private:
  Backend backend_;
  std::vector<double> a_n1_;
  std::optional<TwoDimLimits> block_limits_;
  std::vector<double> block_;
};

/// Fills A(n,1) over n ≤ N by multiplicativity over the factorization of n.
CoefficientTable build_table(const HeckeSource& source, std::uint64_t n,
                             std::optional<TwoDimLimits> two_dim = {}, int max_depth = kDefaultMaxDepth);

/// Convenience: τ generated internally for every prime the table needs.
CoefficientTable build_table(Backend backend, std::uint64_t n, std::optional<TwoDimLimits> two_dim = {});

/// (x, Σ_{n≤x}|A(n,1)|²/x) for each x in the grid.
std::vector<std::pair<double, double>> second_moment_scan(const CoefficientTable& table,
                                                          const std::vector<double>& x_grid);

struct KimSarnakReport {
  double max_ratio = 0.0;  // max_n |A(n,1)| / (n^{5/14} τ₃(n))
  std::uint64_t argmax = 1;
};
KimSarnakReport kim_sarnak_diagnostic(const CoefficientTable& table);

// Binary cache: "GL3COEF1", u32 version, u8 backend, u64 N, N doubles,
// then (if present) u64 D1, u64 D2, D1·D2 doubles row-major. Little endian.
inline constexpr std::uint32_t kCacheVersion = 1;
void write_cache(const CoefficientTable& table, const std::filesystem::path& path);
CoefficientTable read_cache(const std::filesystem::path& path);

/// JSON sidecar next to the cache (weight, normalization, build timestamp).
void write_sidecar(const CoefficientTable& table, int weight, const std::filesystem::path& path);

}  // namespace circlelab::coeffs

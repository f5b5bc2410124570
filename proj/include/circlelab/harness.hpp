#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "circlelab/coefficients.hpp"

namespace circlelab::harness {

/// n = n₁^r + ⋯ + n_ℓ^r + n_{ℓ+1}^s with every nᵢ ≥ 1.
struct SumShape {
  int r = 2;
  int s = 2;
  int ell = 2;
};

inline constexpr double kEnumerationBudget = 1e10;

/// Representation counts rep(n) for 0 ≤ n ≤ ⌊2X⌋, by repeated convolution of
/// the power indicators.
class RepCountTable {
 public:
  RepCountTable(const SumShape& shape, double X);
  static RepCountTable from_counts(const SumShape& shape, double X, std::vector<std::uint64_t> counts);

  const SumShape& shape() const noexcept { return shape_; }
  double X() const noexcept { return X_; }
  std::uint64_t limit() const noexcept { return counts_.size() - 1; }
  std::uint64_t rep(std::uint64_t n) const { return counts_.at(n); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const;

 private:
  RepCountTable() = default;
  SumShape shape_;
  double X_ = 0.0;
  std::vector<std::uint64_t> counts_;
};

/// N_r^ℓ·N_s with N_k = ⌊(2X)^{1/k}⌋.
double enumeration_cost(const SumShape& shape, double X);

/// rep(n) for n ≤ ⌊2X⌋ by nested loops over (n₁, …, n_{ℓ+1}), pruning any
/// branch whose partial sum exceeds 2X. The outermost variable is split
/// across workers. BudgetExceeded when enumeration_cost > 10¹⁰.
RepCountTable enumerate_reps(const SumShape& shape, double X, unsigned workers = 1);

/// Σ_{X≤n≤2X} rep(n)·A(n,1)·ω(n/X), ascending n, compensated.
std::complex<double> sum_from_reps(const RepCountTable& reps, double Delta, const coeffs::CoefficientTable& table);

/// 𝒮(X) through enumerate_reps.
std::complex<double> brute_sum_S(const SumShape& shape, double X, double Delta, const coeffs::CoefficientTable& table,
                                 unsigned workers = 1);

struct OrthogonalityReport {
  std::complex<double> lhs;            // brute_sum_S
  std::complex<double> rhs;            // trapezoid ∫₀¹ F_r^ℓ F_s G
  std::complex<double> rhs_reflected;  // same nodes at −α
  double gap = 0.0;                    // |lhs − rhs| / |lhs|
  std::uint64_t nodes = 0;
  double theta = 0.25;
  std::complex<double> major;  // nodes on the major arcs of (X, θ)
  std::complex<double> minor;
  double partition_gap = 0.0;  // |major + minor − rhs| / |rhs|
};

/// Trapezoid rule on αₖ = k/N with F_r, F_s at 2X and G(α, X); every phase
/// is an exact N-th root of unity. Requires X ≤ 2000.
OrthogonalityReport orthogonality_check(const SumShape& shape, double X, double Delta,
                                        const coeffs::CoefficientTable& table, std::uint64_t nodes,
                                        double theta = 0.25);

/// #{Σ_{i≤2^{r−1}} nᵢ^r = Σ_{i≤2^{r−1}} mᵢ^r : nᵢ, mᵢ ≤ X^{1/r}} for r ∈ {2, 3}.
std::uint64_t hua_count(int r, double X);

struct HuaRow {
  double X = 0.0;
  std::uint64_t count = 0;
  double ratio = 0.0;  // count / X^{2^r/r − 1 + ε}
};
std::vector<HuaRow> hua_grid(int r, const std::vector<double>& X_grid, double epsilon = 0.05);

struct MinorScanReport {
  double X = 0.0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double sup_r = 0.0;
  double sup_s = 0.0;
  double envelope_r = 0.0;
  double envelope_s = 0.0;
  double ratio_r = 0.0;
  double ratio_s = 0.0;
  double argmax_r = 0.0;
  double argmax_s = 0.0;
};

/// X^{1/k − θ/2^{k−1}} for k ≤ 7, X^{1/k − θ/(2k(k−1))} for k ≥ 8.
double weyl_envelope(int k, double X, double theta);

/// sup |F_r(α, X)| and sup |F_s(α, X)| over seeded minor-arc samples: half
/// within 10/(qQ) outside a random major arc, half at continued fractions
/// with partial quotients ≤ 4 after a random leading one.
MinorScanReport minor_sup_scan(const SumShape& shape, double X, double theta, std::uint64_t samples,
                               std::uint64_t seed);

struct MajorResidual {
  std::complex<double> exact;
  std::complex<double> main;
  double residual = 0.0;
  double envelope_ratio = 0.0;  // residual / (q^{1/2}(1+|β|X)^{1/2})
};

/// F_r(a/q + β, X) against G_r(a,0;q)/q·Ψ_r(β). The exact side reduces
/// a·nʳ mod q in integers. Requires gcd(a,q) = 1 and |β| ≤ 1/(qQ) with
/// Q = X^{1−1/r} unless given.
MajorResidual major_approx_residual(int r, std::int64_t a, std::int64_t q, double beta, double X, double Q = 0.0);

struct MajorTuple {
  int r = 2;
  std::int64_t a = 1;
  std::int64_t q = 1;
  double beta = 0.0;
  double X = 1.0;
};

/// Fifty fixed tuples: r ∈ {2,3,4}, q ≤ 13, X ∈ {10⁴, 3·10⁴, 10⁵, 3·10⁵, 10⁶}
/// and β a fixed fraction in [−1, 1] of 1/(qQ) with Q = X^{1−1/r}.
std::vector<MajorTuple> standard_major_grid();

struct SlopeFit {
  std::vector<double> X_grid;
  std::vector<double> values;  // |𝒮(X)|
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log fit
  double trivial_exp = 0.0;
  double final_exp = 0.0;
};

/// Least-squares slope of log|𝒮(X)| against log X with Δ = 2·X^δ, sums
/// through RepCountTable. The grid must be geometric with ratio ≥ 2 and
/// length ≥ 5.
SlopeFit slope_fit(const SumShape& shape, double delta_exponent, const std::vector<double>& X_grid,
                   const coeffs::CoefficientTable& table);

/// Geometric grid lo·ratio^k up to hi (inclusive within 1e−9).
std::vector<double> geometric_grid(double lo, double hi, double ratio);

}  // namespace circlelab::harness

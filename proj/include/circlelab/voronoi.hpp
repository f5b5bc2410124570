#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circlelab/coefficients.hpp"
#include "circlelab/weight.hpp"

namespace circlelab::voronoi {

using cplx = std::complex<double>;

/// Archimedean parameters (α₁, α₂, α₃) with α₁+α₂+α₃ = 0 and |Re αⱼ| ≤ 2/5.
class LanglandsParams {
 public:
  explicit LanglandsParams(std::array<cplx, 3> alpha);

  /// (it, 0, −it).
  static LanglandsParams tempered(double t);
  /// Parses "t" (tempered) or "a1,a2,a3" with each entry "re" or "re+imi" / "re-imi".
  static LanglandsParams parse(const std::string& spec);

  const std::array<cplx, 3>& alpha() const noexcept { return alpha_; }
  LanglandsParams conjugate() const;
  /// max_j(−1 − Re αⱼ): the contour must lie strictly to its right.
  double sigma_floor() const noexcept;
  double default_sigma() const noexcept { return sigma_floor() + 0.75; }

 private:
  std::array<cplx, 3> alpha_;
};

enum class Sign { Plus = 1, Minus = -1 };
std::string to_string(Sign s);

/// The two gamma products of γ±, before the 1/(2π^{3(s+1/2)}) factor:
/// first = ∏Γ((1+s+αⱼ)/2)/Γ((−s−αⱼ)/2), second = ∏Γ((2+s+αⱼ)/2)/Γ((1−s−αⱼ)/2).
struct GammaProducts {
  cplx first;
  cplx second;
  cplx prefactor;  // 1/(2π^{3(s+1/2)})
};
GammaProducts gamma_products(cplx s, const LanglandsParams& params);

/// γ±(s) = prefactor·(first ∓ i·second). PoleProximity within 1e−6 of a
/// pole of a numerator gamma factor.
cplx gamma_pm(cplx s, const LanglandsParams& params, Sign sign);

struct PhiSpec {
  weight::WeightFunction w{2.0};
  double X = 1.0;
  double beta = 0.0;
};

struct PhiOptions {
  double h = 0.05;             // trapezoid step in Im s (the estimate also runs at h/2)
  double block = 10.0;         // tail blocks in Im s
  int quiet_blocks = 3;        // consecutive negligible blocks that end the contour
  double tail_relative = 1e-12;
  double t_max = 20000.0;      // NonConvergence beyond this
};

struct PhiValue {
  cplx value;
  double error_estimate = 0.0;  // |step h − step h/2|
  double sigma = 0.0;
  double T = 0.0;               // contour truncation |Im s| ≤ T
};

/// Φ±(x) = (1/2πi)∫_{(σ)} x^{−s} γ±(s) φ̃(−s) ds for φ(y) = ω(y/X)e(−βy).
///
/// With y = X·eᵘ the Mellin factor is X^{−s}·H(t), H(t) = ∫₀^{log 2}
/// ω(eᵘ)e(−βXeᵘ)e^{−σu}e^{−itu} du. H is sampled on the whole t grid by a
/// single zero-padded FFT of the trapezoid rule in u (spectrally accurate
/// for the compactly supported smooth integrand), and the contour integral
/// is the trapezoid rule in t.
class PhiTransform {
 public:
  PhiTransform(PhiSpec spec, LanglandsParams params, std::optional<double> sigma = {}, PhiOptions options = {});

  double sigma() const noexcept { return sigma_; }
  double T() const noexcept { return T_; }
  const PhiSpec& spec() const noexcept { return spec_; }
  const LanglandsParams& params() const noexcept { return params_; }

  PhiValue operator()(double x, Sign sign) const;

  /// H(t) sampled at the grid point closest to t (for diagnostics and tests).
  cplx mellin_at(double t) const;

 private:
  PhiSpec spec_;
  LanglandsParams params_;
  double sigma_;
  PhiOptions options_;
  double T_ = 0.0;
  double dt_ = 0.0;
  // Index j ↔ t = j·dt for j ∈ [−J, J], stored at j + J.
  std::vector<cplx> h_;
  std::vector<cplx> first_;
  std::vector<cplx> second_;  // both already multiplied by the prefactor
};

/// Convenience wrapper for a single evaluation.
PhiValue phi_transform(double x, const PhiSpec& spec, const LanglandsParams& params, Sign sign,
                       std::optional<double> sigma = {}, PhiOptions options = {});

struct PhiRegimeParams {
  double X = 1.0;
  double R = 1.0;  // Δ + |β|X
  double Z = 1.0;  // 1 + |β|X

  static PhiRegimeParams from_spec(const PhiSpec& spec);
};

inline constexpr double kRegimeEpsilon = 0.1;

/// 1: x > R^{3+ε}/X, 2: 1/X ≤ x ≤ R^{3+ε}/X, 3: x < 1/X.
int phi_regime(double x, const PhiRegimeParams& p);

/// Regime-wise bound: 1 in regime 1 (the decay there has no fixed power),
/// (xX)^{1/3}Z in regime 2, (xX)^{1/2}ZR^ε in regime 3.
double phi_envelope(double x, const PhiRegimeParams& p);

struct VoronoiRHSTerm {
  Sign sign = Sign::Plus;
  std::uint64_t d1 = 1;
  std::uint64_t d2 = 1;
  double kloosterman = 0.0;
  cplx phi;
  double weight = 0.0;  // A(d₁,d₂)/(d₁d₂)
};

struct VoronoiRHS {
  cplx value;
  std::size_t term_count = 0;
  std::vector<VoronoiRHSTerm> terms;
};

/// d₂ bound for divisor d₁ | q: d₁²d₂/q³ ≤ truncation·R^{3+ε}/X.
std::uint64_t d2_cutoff(std::uint64_t q, std::uint64_t d1, const PhiRegimeParams& p, double truncation);

/// q Σ± Σ_{d₁|q} Σ_{d₂} A(d₁,d₂)/(d₁d₂) S(ā, ±d₂; q/d₁) Φ±(d₁²d₂/q³), with d₂
/// truncated by d2_cutoff. S over modulus 1 is 1.
VoronoiRHS voronoi_rhs(std::int64_t a, std::int64_t q, const PhiSpec& spec, const coeffs::CoefficientTable& table,
                       const LanglandsParams& params, double truncation, unsigned workers = 1);

/// Σ_n A(n,1) e(an/q) φ(n), the left-hand side, for diagnostics only.
cplx voronoi_lhs(std::int64_t a, std::int64_t q, const PhiSpec& spec, const coeffs::CoefficientTable& table);

}  // namespace circlelab::voronoi

#pragma once

#include <complex>

namespace circlelab::weight {

/// Smooth cutoff on [1, 2] built from the exp(−1/t) step:
/// ω(x) = g(Δ(x−1))·g(Δ(2−x)), g(t) = h(t)/(h(t)+h(1−t)), h(t) = e^{−1/t}.
class WeightFunction {
 public:
  explicit WeightFunction(double delta);

  double delta() const noexcept { return delta_; }
  double operator()(double x) const noexcept;
  long double eval_extended(long double x) const noexcept;

  /// ∫₁² ω(u) du.
  double mass() const;

 private:
  double delta_;
};

double smooth_step(double t) noexcept;
long double smooth_step(long double t) noexcept;

inline double omega_eval(const WeightFunction& w, double x) noexcept { return w(x); }

struct DerivativeBound {
  int order = 0;
  double sup = 0.0;             // sup |ω^{(j)}|
  double sup_normalized = 0.0;  // sup·Δ^{−j}
  double l1 = 0.0;              // ∫|ω^{(j)}|
  double l1_normalized = 0.0;   // ∫|ω^{(j)}|·Δ^{1−j}
};

/// Central finite differences of order j ≤ 4 on a grid of step 10⁻⁴/Δ.
DerivativeBound omega_deriv_bound_check(const WeightFunction& w, int order);

/// ∫_X^{2X} ω(x/X) e(−βx) x^{s−1} dx by Gauss–Legendre panels whose width
/// keeps the phase change per panel below π/2.
std::complex<double> phi_beta_mellin(const WeightFunction& w, double X, double beta, std::complex<double> s);

}  // namespace circlelab::weight

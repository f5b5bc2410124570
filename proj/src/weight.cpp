#include "circlelab/weight.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "circlelab/error.hpp"
#include "circlelab/phase.hpp"
#include "circlelab/quadrature.hpp"
#include "circlelab/summation.hpp"

namespace circlelab::weight {

namespace {

template <typename T>
T step_impl(T t) noexcept {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const T a = std::exp(-1 / t);
  const T b = std::exp(-1 / (1 - t));
  return a / (a + b);
}

}  // namespace

double smooth_step(double t) noexcept { return step_impl(t); }
long double smooth_step(long double t) noexcept { return step_impl(t); }

WeightFunction::WeightFunction(double delta) : delta_(delta) {
  if (!(delta > 1.0)) throw Error(ErrorCode::InvalidArgument, "weight sharpness Delta must exceed 1");
}

double WeightFunction::operator()(double x) const noexcept {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  return smooth_step(delta_ * (x - 1.0)) * smooth_step(delta_ * (2.0 - x));
}

long double WeightFunction::eval_extended(long double x) const noexcept {
  if (x <= 1.0L || x >= 2.0L) return 0.0L;
  const long double d = delta_;
  return smooth_step(d * (x - 1.0L)) * smooth_step(d * (2.0L - x));
}

double WeightFunction::mass() const {
  const auto& gl = gauss_legendre16();
  const int panels = static_cast<int>(std::ceil(64.0 * std::max(1.0, delta_)));
  NeumaierSum sum;
  for (int i = 0; i < panels; ++i) {
    const double a = 1.0 + static_cast<double>(i) / panels;
    const double b = 1.0 + static_cast<double>(i + 1) / panels;
    sum.add(gl.panel([this](double u) { return (*this)(u); }, a, b));
  }
  return sum.value();
}

DerivativeBound omega_deriv_bound_check(const WeightFunction& w, int order) {
  if (order < 0 || order > 4) {
    throw Error(ErrorCode::UnsupportedOrder, "derivative order must be in [0, 4]");
  }
  // Central stencils: coefficients of f(x + k·h), k = −2..2.
  static constexpr std::array<std::array<long double, 5>, 5> kStencil{{
      {0, 0, 1, 0, 0},
      {1.0L / 12, -2.0L / 3, 0, 2.0L / 3, -1.0L / 12},
      {-1.0L / 12, 4.0L / 3, -5.0L / 2, 4.0L / 3, -1.0L / 12},
      {-0.5L, 1, 0, -1, 0.5L},
      {1, -4, 6, -4, 1},
  }};
  const long double h = 1e-4L / w.delta();
  const auto steps = static_cast<long>(std::ceil(1.0L / h));
  DerivativeBound out;
  out.order = order;
  NeumaierSum l1;
  for (long i = 0; i <= steps; ++i) {
    const long double x = 1.0L + static_cast<long double>(i) * h;
    long double d = 0;
    for (int k = -2; k <= 2; ++k) d += kStencil[order][k + 2] * w.eval_extended(x + k * h);
    d /= std::pow(h, static_cast<long double>(order));
    const double ad = static_cast<double>(std::fabs(d));
    out.sup = std::max(out.sup, ad);
    l1.add(ad * static_cast<double>(h));
  }
  out.l1 = l1.value();
  out.sup_normalized = out.sup / std::pow(w.delta(), order);
  out.l1_normalized = out.l1 / std::pow(w.delta(), order - 1);
  return out;
}

std::complex<double> phi_beta_mellin(const WeightFunction& w, double X, double beta, std::complex<double> s) {
  if (!(X > 0.0)) throw Error(ErrorCode::InvalidArgument, "X must be positive");
  // x = X·u: X^s ∫₁² ω(u) e(−βXu) u^{s−1} du.
  const double bx = beta * X;
  const double t = s.imag();
  const double cycles = std::fabs(bx) + std::fabs(t) / (2.0 * std::numbers::pi);
  const double delta = w.delta();
  double max_width = 1.0 / 64.0;
  if (cycles > 0) max_width = std::min(max_width, 1.0 / (4.0 * cycles));
  const double transition_width = std::min(1.0 / (32.0 * delta), max_width);

  std::vector<double> breaks{1.0};
  const double left = std::min(1.0 + 1.0 / delta, 1.5);
  const double right = std::max(2.0 - 1.0 / delta, 1.5);
  breaks.push_back(left);
  if (right > left) breaks.push_back(right);
  breaks.push_back(2.0);

  const std::complex<double> sm1 = s - 1.0;
  auto integrand = [&](double u) -> std::complex<double> {
    const double om = w(u);
    if (om == 0.0) return 0.0;
    return om * unit_phase(-bx * u) * std::exp(sm1 * std::log(u));
  };

  const auto& gl = gauss_legendre16();
  ComplexNeumaierSum sum;
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double a = breaks[seg], b = breaks[seg + 1];
    const bool plateau = seg == 1 && breaks.size() == 4;
    const double width = plateau ? max_width : transition_width;
    const auto panels = static_cast<long>(std::ceil((b - a) / width));
    for (long i = 0; i < panels; ++i) {
      const double pa = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
      const double pb = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(panels);
      sum.add(gl.panel(integrand, pa, pb));
    }
  }
  return std::exp(s * std::log(X)) * sum.value();
}

}  // namespace circlelab::weight

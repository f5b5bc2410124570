#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace circlelab {

/// Gauss–Legendre rule on [−1, 1], nodes found by Newton iteration on P_N.
template <int N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (N + 0.5L));
      long double deriv = 0;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= N; ++k) {
          const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        deriv = N * (x * p1 - p0) / (x * x - 1);
        const long double dx = p1 / deriv;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      nodes[i] = static_cast<double>(x);
      weights[i] = static_cast<double>(2 / ((1 - x * x) * deriv * deriv));
    }
  }

  /// ∫_a^b f over a single panel.
  template <typename F>
  auto panel(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto sum = weights[0] * f(mid + half * nodes[0]);
    for (int i = 1; i < N; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

inline const GaussLegendre<16>& gauss_legendre16() {
  static const GaussLegendre<16> rule;
  return rule;
}

}  // namespace circlelab

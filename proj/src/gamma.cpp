#include "circlelab/gamma.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace circlelab::special {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// B_{2k}/(2k(2k−1)) for k = 1..10.
constexpr std::array<double, 10> kStirling{
    1.0 / 12.0,      -1.0 / 360.0,        1.0 / 1260.0,          -1.0 / 1680.0,     1.0 / 1188.0,
    -691.0 / 360360.0, 1.0 / 156.0,       -3617.0 / 122400.0,    43867.0 / 244188.0, -174611.0 / 125400.0,
};

cplx stirling(cplx z) {
  const cplx inv = 1.0 / z, inv2 = inv * inv;
  cplx series = 0.0, power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

cplx log_gamma_right(cplx z) {
  // Shift until |z| is large enough for ten Stirling terms to reach full precision.
  cplx shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return stirling(z) - shift;
}

}  // namespace

cplx log_sin_pi(cplx z) {
  const double y = z.imag();
  if (std::fabs(y) < 20.0) return std::log(std::sin(kPi * z));
  // sin(πz) = (e^{iπz} − e^{−iπz})/(2i); keep the dominant exponential symbolically.
  if (y > 0) {
    const cplx small = std::exp(cplx(0.0, 2.0 * kPi) * z);  // |·| = e^{−2πy}
    return cplx(0.0, -kPi) * z + std::log((small - 1.0) / cplx(0.0, 2.0));
  }
  const cplx small = std::exp(cplx(0.0, -2.0 * kPi) * z);
  return cplx(0.0, kPi) * z + std::log((1.0 - small) / cplx(0.0, 2.0));
}

cplx log_gamma(cplx z) {
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Γ(z)Γ(1−z) = π / sin(πz).
  return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

cplx log_rgamma(cplx z) {
  if (z.real() >= 0.5) return -log_gamma_right(z);
  return log_sin_pi(z) - std::log(kPi) + log_gamma_right(1.0 - z);
}

double pole_distance(cplx z) {
  const double n = std::min(0.0, std::round(z.real()));
  return std::abs(z - n);
}

}  // namespace circlelab::special

#pragma once

#include <complex>

namespace circlelab::special {

/// log Γ(z) for complex z away from the poles, by Stirling's series after
/// an upward shift, with reflection for Re z < 1/2. The imaginary part is
/// continuous in z off the negative real axis, not the principal branch.
std::complex<double> log_gamma(std::complex<double> z);

/// log(1/Γ(z)); −∞ real part at the non-positive integers.
std::complex<double> log_rgamma(std::complex<double> z);

/// log sin(πz), stable for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z);

/// Distance from z to the nearest non-positive integer.
double pole_distance(std::complex<double> z);

}  // namespace circlelab::special

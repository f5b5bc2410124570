#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "circlelab/numtheory.hpp"

namespace circlelab {

/// e(x) = exp(2πix).
inline std::complex<double> unit_phase(double x) {
  const double reduced = x - std::nearbyint(x);
  const double angle = 2.0 * std::numbers::pi * reduced;
  return {std::cos(angle), std::sin(angle)};
}

/// α mod 1 as a signed 128-bit fixed-point fraction (scale 2¹²⁸), so that
/// α·m mod 1 is exact integer arithmetic for any integer m.
class FixedPhase {
 public:
  explicit FixedPhase(double alpha);

  nt::u128 raw() const noexcept { return frac_; }

  /// e(α·m) with α·m reduced mod 1 in wrapping 128-bit arithmetic.
  std::complex<double> times(nt::u128 m) const noexcept { return unit_phase(to_unit(frac_ * m)); }

  static double to_unit(nt::u128 phase) noexcept {
    return std::ldexp(static_cast<double>(static_cast<nt::i128>(phase)), -128);
  }

 private:
  nt::u128 frac_ = 0;
};

/// m^r mod 2¹²⁸.
inline nt::u128 wrapping_pow(std::uint64_t m, int r) noexcept {
  nt::u128 acc = 1;
  for (int i = 0; i < r; ++i) acc *= m;
  return acc;
}

/// e(k/q) for k in [0, q), from the symmetric residue of k.
class RootsOfUnity {
 public:
  explicit RootsOfUnity(std::uint64_t q);
  std::uint64_t modulus() const noexcept { return re_.size(); }
  double re(std::uint64_t k) const noexcept { return re_[k]; }
  double im(std::uint64_t k) const noexcept { return im_[k]; }
  std::complex<double> operator[](std::uint64_t k) const noexcept { return {re_[k], im_[k]}; }

 private:
  std::vector<double> re_;
  std::vector<double> im_;
};

}  // namespace circlelab

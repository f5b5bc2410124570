#include "circlelab/phase.hpp"

namespace circlelab {

FixedPhase::FixedPhase(double alpha) {
  const double mag = std::fabs(alpha);
  const double frac = mag - std::floor(mag);
  if (frac > 0.0) {
    int exp = 0;
    const double mant = std::frexp(frac, &exp);  // frac = mant·2^exp, mant in [1/2, 1)
    const auto digits = static_cast<nt::u128>(static_cast<std::uint64_t>(std::ldexp(mant, 53)));
    const int shift = 128 + exp - 53;
    if (shift >= 128 || shift <= -128) {
      frac_ = 0;
    } else if (shift >= 0) {
      frac_ = digits << shift;
    } else {
      frac_ = digits >> (-shift);
    }
  }
  if (alpha < 0) frac_ = nt::u128{0} - frac_;
}

RootsOfUnity::RootsOfUnity(std::uint64_t q) : re_(q), im_(q) {
  for (std::uint64_t k = 0; k < q; ++k) {
    const auto signed_k = static_cast<double>(2 * k <= q ? static_cast<std::int64_t>(k)
                                                         : static_cast<std::int64_t>(k) - static_cast<std::int64_t>(q));
    const double angle = 2.0 * std::numbers::pi * signed_k / static_cast<double>(q);
    re_[k] = std::cos(angle);
    im_[k] = std::sin(angle);
  }
}

}  // namespace circlelab

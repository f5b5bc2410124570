#pragma once

#include <array>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace circlelab::theorem {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

/// "p/q" in lowest terms ("p" when q = 1).
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

struct ProblemShape {
  int r = 2;
  int s = 2;
  int ell = 2;
  Rational delta = 0;  // Δ = X^δ
};

enum class RCase { I, II, III, IV };
std::string to_string(RCase c);  // "(i)" … "(iv)"
RCase case_of(int r, int s);

struct ExponentReport {
  Rational theta0;
  Rational trivial_exp;
  Rational main_exp;
  Rational remainder_exp;
  RCase case_tag = RCase::I;
  Rational final_exp;
  bool nontrivial = false;
};

/// Requires ℓ ≥ 2^{r−1} (HypothesisViolation otherwise).
void validate(const ProblemShape& shape);

ExponentReport evaluate_theorem(const ProblemShape& shape);

/// Minor-arc exponent of the case selected by (r, s), at an arbitrary
/// θ ≤ θ₀ (ThetaTooLarge otherwise).
Rational minor_arc_exponent(const ProblemShape& shape, const Rational& theta);

/// The three exponents (without the Δ factor) of the major-arc bound:
/// ℓ/r+1/s−1−(ℓ/r+1/s−7/2)θ, ℓ/r−1−(ℓ/r−4)θ and ℓ/r+1/s−1.
std::array<Rational, 3> major_arc_exponents(const ProblemShape& shape, const Rational& theta);

/// ℓ/r+1/s−1−(ℓ/r+1/s−7/2)θ ≥ ℓ/r−1−(ℓ/r−4)θ.
bool major_comparison_holds(const ProblemShape& shape, const Rational& theta);

/// max(major exponents + δ, minor exponent) at θ = θ₀, assembled from the
/// two functions above.
Rational assembled_exponent(const ProblemShape& shape);

}  // namespace circlelab::theorem

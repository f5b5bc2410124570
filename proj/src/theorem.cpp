#include "circlelab/theorem.hpp"

#include <algorithm>

#include "circlelab/error.hpp"

namespace circlelab::theorem {

namespace {

using boost::multiprecision::cpp_int;

Rational pow2(int k) { return Rational(cpp_int(1) << k); }

Rational theta0_of(const ProblemShape& shape) {
  return std::min(Rational(1, shape.r), Rational(1, shape.s));
}

Rational trivial_of(const ProblemShape& shape) { return Rational(shape.ell, shape.r) + Rational(1, shape.s); }

// The saving coefficient c in X^{ℓ/r+1/s−cθ}.
Rational saving(const ProblemShape& shape) {
  const int r = shape.r, s = shape.s;
  const Rational ell(shape.ell);
  const Rational weyl_r = ell / pow2(r - 1);
  const Rational weyl_s = Rational(1) / pow2(s - 1);
  const Rational vin_r = (ell - pow2(r - 1)) / Rational(2 * r * (r - 1));
  const Rational vin_s = Rational(1, 2 * s * (s - 1));
  switch (case_of(r, s)) {
    case RCase::I:
      return weyl_r + weyl_s - 1;
    case RCase::II:
      return weyl_r + vin_s - 1;
    case RCase::III:
      return vin_r + weyl_s;
    case RCase::IV:
      return vin_r + vin_s;
  }
  return 0;
}

void check_theta(const ProblemShape& shape, const Rational& theta) {
  if (theta < 0) throw Error(ErrorCode::InvalidArgument, "theta must be non-negative");
  if (theta > theta0_of(shape)) {
    throw Error(ErrorCode::ThetaTooLarge, "theta " + to_string(theta) + " exceeds theta0 " + to_string(theta0_of(shape)));
  }
}

}  // namespace

std::string to_string(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  // Decimal integers only; cpp_int would read a leading 0 as octal.
  auto integer = [&](std::string digits) {
    bool negative = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      negative = digits[0] == '-';
      digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + text + "'");
    }
    const auto first = digits.find_first_not_of('0');
    const cpp_int value(first == std::string::npos ? std::string("0") : digits.substr(first));
    return negative ? cpp_int(-value) : value;
  };
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const cpp_int num = integer(text.substr(0, slash)), den = integer(text.substr(slash + 1));
      if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      if (frac.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + text + "'");
      }
      cpp_int scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      return Rational(integer(text.substr(0, dot) + frac), scale);
    }
    return Rational(integer(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + text + "'");
  }
}

std::string to_string(RCase c) {
  switch (c) {
    case RCase::I:
      return "(i)";
    case RCase::II:
      return "(ii)";
    case RCase::III:
      return "(iii)";
    case RCase::IV:
      return "(iv)";
  }
  return "?";
}

RCase case_of(int r, int s) {
  if (r <= 7) return s <= 7 ? RCase::I : RCase::II;
  return s <= 7 ? RCase::III : RCase::IV;
}

void validate(const ProblemShape& shape) {
  if (shape.r < 2 || shape.s < 2) throw Error(ErrorCode::HypothesisViolation, "need r >= 2 and s >= 2");
  if (shape.r > 62) throw Error(ErrorCode::InvalidArgument, "r too large");
  if (shape.s > 4096) throw Error(ErrorCode::InvalidArgument, "s too large");
  if (Rational(shape.ell) < pow2(shape.r - 1)) {
    throw Error(ErrorCode::HypothesisViolation,
                "ell = " + std::to_string(shape.ell) + " below 2^(r-1) = " + to_string(pow2(shape.r - 1)));
  }
  if (shape.delta < 0) throw Error(ErrorCode::InvalidArgument, "delta must be non-negative");
}

ExponentReport evaluate_theorem(const ProblemShape& shape) {
  validate(shape);
  ExponentReport rep;
  rep.theta0 = theta0_of(shape);
  rep.trivial_exp = trivial_of(shape);
  const Rational T = rep.trivial_exp;
  const Rational seven_halves(7, 2);
  if (T >= seven_halves) {
    rep.main_exp = T - 1;
  } else {
    rep.main_exp = T - (1 - (seven_halves - T) * rep.theta0);
  }
  rep.case_tag = case_of(shape.r, shape.s);
  rep.remainder_exp = T - saving(shape) * rep.theta0;
  rep.final_exp = std::max(rep.main_exp + shape.delta, rep.remainder_exp);
  rep.nontrivial = rep.final_exp < rep.trivial_exp;
  return rep;
}

Rational minor_arc_exponent(const ProblemShape& shape, const Rational& theta) {
  validate(shape);
  check_theta(shape, theta);
  return trivial_of(shape) - saving(shape) * theta;
}

std::array<Rational, 3> major_arc_exponents(const ProblemShape& shape, const Rational& theta) {
  validate(shape);
  check_theta(shape, theta);
  const Rational T = trivial_of(shape);
  const Rational lr(shape.ell, shape.r);
  return {T - 1 - (T - Rational(7, 2)) * theta, lr - 1 - (lr - 4) * theta, T - 1};
}

bool major_comparison_holds(const ProblemShape& shape, const Rational& theta) {
  const auto e = major_arc_exponents(shape, theta);
  return e[0] >= e[1];
}

Rational assembled_exponent(const ProblemShape& shape) {
  const Rational t0 = theta0_of(shape);
  const auto major = major_arc_exponents(shape, t0);
  Rational best = minor_arc_exponent(shape, t0);
  for (const auto& e : major) best = std::max(best, e + shape.delta);
  return best;
}

}  // namespace circlelab::theorem

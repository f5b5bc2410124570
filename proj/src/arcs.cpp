#include "circlelab/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "circlelab/error.hpp"

namespace circlelab::arcs {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

struct Convergent {
  std::int64_t p;
  std::int64_t q;
};

// Convergents p_k/q_k of the exact binary value of α, stopping at the first
// denominator above Q.
std::vector<Convergent> convergents(double alpha, double Q) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  int exp = 0;
  const double mant = std::frexp(alpha, &exp);
  // α = m·2^{e}, m an integer with at most 53 bits.
  cpp_int num = static_cast<std::int64_t>(std::ldexp(mant, 53));
  cpp_int den = 1;
  int shift = exp - 53;
  if (shift >= 0) {
    num <<= shift;
  } else {
    den <<= -shift;
  }
  std::vector<Convergent> out;
  cpp_int p_prev = 1, q_prev = 0, p_cur, q_cur;
  // Floor division for a possibly negative numerator.
  auto floor_div = [](const cpp_int& a, const cpp_int& b) {
    cpp_int quot = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --quot;
    return quot;
  };
  cpp_int a0 = floor_div(num, den);
  p_cur = a0;
  q_cur = 1;
  out.push_back({static_cast<std::int64_t>(p_cur), 1});
  cpp_int rem_num = den, rem_den = num - a0 * den;
  while (rem_den != 0) {
    const cpp_int ak = rem_num / rem_den;
    const cpp_int p_next = ak * p_cur + p_prev;
    const cpp_int q_next = ak * q_cur + q_prev;
    if (q_next > cpp_int(static_cast<std::int64_t>(std::floor(Q)))) break;
    out.push_back({static_cast<std::int64_t>(p_next), static_cast<std::int64_t>(q_next)});
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    const cpp_int next_den = rem_num - ak * rem_den;
    rem_num = rem_den;
    rem_den = next_den;
  }
  return out;
}

// α − a/q computed exactly and rounded once.
double offset(double alpha, std::int64_t a, std::int64_t q) {
  const cpp_rational diff = cpp_rational(alpha) - cpp_rational(a, q);
  return diff.convert_to<double>();
}

}  // namespace

std::vector<std::int64_t> convergent_denominators(double alpha, double Q) {
  std::vector<std::int64_t> out;
  for (const auto& c : convergents(alpha, Q)) out.push_back(c.q);
  return out;
}

RationalApproximation dirichlet_approx(double alpha, double Q) {
  if (!(Q >= 2.0)) throw Error(ErrorCode::InvalidArgument, "Dirichlet approximation needs Q >= 2");
  // Translate into [1/Q, 1 + 1/Q] first, so that 1 ≤ a ≤ q.
  double reduced = alpha - std::floor(alpha - 1.0 / Q);
  if (reduced > 1.0 + 1.0 / Q) reduced -= 1.0;
  const auto cs = convergents(reduced, Q);
  Convergent best = cs.back();
  if (best.p > best.q || best.p < 1) best = {1, 1};
  return {best.p, best.q, offset(reduced, best.p, best.q)};
}

ArcDecomposition::ArcDecomposition(double X, double theta) : X_(X), theta_(theta) {
  if (!(X > 1.0)) throw Error(ErrorCode::InvalidArgument, "arc dissection needs X > 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, 1)");
  P_ = std::pow(X, theta);
  Q_ = std::pow(X, 1.0 - theta);
  if (2.0 * P_ * P_ > Q_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::DisjointnessViolation,
                "2P^2 = " + std::to_string(2.0 * P_ * P_) + " exceeds Q = " + std::to_string(Q_));
  }
  q_max_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(P_ * (1.0 + 1e-12))));
  for (std::int64_t q = 1; q <= q_max_; ++q) {
    const double half = 1.0 / (static_cast<double>(q) * Q_);
    for (std::int64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double centre = static_cast<double>(a) / static_cast<double>(q);
      arcs_.push_back({a, q, centre - half, centre + half});
    }
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const MajorArc& x, const MajorArc& y) { return x.left < y.left; });
  for (std::size_t i = 1; i < arcs_.size(); ++i) {
    if (!(arcs_[i - 1].right < arcs_[i].left)) {
      throw Error(ErrorCode::DisjointnessViolation, "arcs around " + std::to_string(arcs_[i - 1].a) + "/" +
                                                        std::to_string(arcs_[i - 1].q) + " and " +
                                                        std::to_string(arcs_[i].a) + "/" +
                                                        std::to_string(arcs_[i].q) + " overlap");
    }
  }
}

double ArcDecomposition::major_measure() const {
  double total = 0.0;
  for (std::int64_t q = 1; q <= q_max_; ++q) {
    std::int64_t phi = 0;
    for (std::int64_t a = 1; a <= q; ++a) phi += std::gcd(a, q) == 1;
    total += static_cast<double>(phi) * 2.0 / (static_cast<double>(q) * Q_);
  }
  return total;
}

std::vector<std::pair<double, double>> ArcDecomposition::minor_intervals() const {
  std::vector<std::pair<double, double>> out;
  double cursor = window_left();
  for (const auto& arc : arcs_) {
    const double lo = std::max(arc.left, window_left());
    if (lo > cursor) out.emplace_back(cursor, lo);
    cursor = std::max(cursor, std::min(arc.right, window_right()));
  }
  if (cursor < window_right()) out.emplace_back(cursor, window_right());
  return out;
}

double ArcDecomposition::minor_measure() const {
  double total = 0.0;
  for (auto [lo, hi] : minor_intervals()) total += hi - lo;
  return total;
}

Classification ArcDecomposition::classify(double alpha) const {
  if (!(alpha >= window_left() && alpha <= window_right())) {
    throw Error(ErrorCode::OutOfWindow, "alpha=" + std::to_string(alpha) + " outside [1/Q, 1+1/Q]");
  }
  auto it = std::upper_bound(arcs_.begin(), arcs_.end(), alpha,
                             [](double x, const MajorArc& arc) { return x < arc.left; });
  if (it == arcs_.begin()) return Minor{};
  --it;
  if (alpha <= it->right) return Major{it->a, it->q};
  return Minor{};
}

double ArcDecomposition::reduce_to_window(double alpha) const {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  double shifted = alpha - std::floor(alpha - window_left());
  if (shifted > window_right()) shifted -= 1.0;
  return shifted;
}

ArcDecomposition build_arcs(double X, double theta) { return ArcDecomposition(X, theta); }

}  // namespace circlelab::arcs

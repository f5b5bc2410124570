#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace circlelab::arcs {

/// α = a/q + β with 1 ≤ a ≤ q ≤ Q, gcd(a,q) = 1 and |β| ≤ 1/(qQ).
struct RationalApproximation {
  std::int64_t a = 1;
  std::int64_t q = 1;
  double beta = 0.0;
};

/// Last continued-fraction convergent of α with denominator ≤ Q, after α is
/// translated by an integer into [1/Q, 1 + 1/Q]. The expansion is carried
/// out exactly on the binary value of α.
RationalApproximation dirichlet_approx(double alpha, double Q);

/// Denominators of every convergent of α up to the last one ≤ Q.
std::vector<std::int64_t> convergent_denominators(double alpha, double Q);

struct MajorArc {
  std::int64_t a = 0;
  std::int64_t q = 0;
  double left = 0.0;
  double right = 0.0;
  double width() const noexcept { return right - left; }
};

struct Major {
  std::int64_t a;
  std::int64_t q;
};
struct Minor {};
using Classification = std::variant<Major, Minor>;

/// Major arcs 𝔐(a,q) = [a/q − 1/(qQ), a/q + 1/(qQ)] for q ≤ P, (a,q) = 1,
/// inside the window [1/Q, 1 + 1/Q], with P = X^θ and Q = X^{1−θ}.
class ArcDecomposition {
 public:
  ArcDecomposition(double X, double theta);

  double X() const noexcept { return X_; }
  double theta() const noexcept { return theta_; }
  double P() const noexcept { return P_; }
  double Q() const noexcept { return Q_; }
  std::int64_t max_denominator() const noexcept { return q_max_; }
  const std::vector<MajorArc>& arcs() const noexcept { return arcs_; }
  double window_left() const noexcept { return 1.0 / Q_; }
  double window_right() const noexcept { return 1.0 + 1.0 / Q_; }

  /// Σ_{q≤P} φ(q)·2/(qQ).
  double major_measure() const;
  /// Window length minus the union of the arcs, by a left-to-right sweep.
  double minor_measure() const;
  /// Gaps between consecutive arcs (and the window ends), in order.
  std::vector<std::pair<double, double>> minor_intervals() const;

  /// Major(a,q) iff α lies in a stored (closed) arc; OutOfWindow outside
  /// [1/Q, 1 + 1/Q].
  Classification classify(double alpha) const;

  /// α shifted by an integer into the window.
  double reduce_to_window(double alpha) const;

 private:
  double X_, theta_, P_, Q_;
  std::int64_t q_max_ = 1;
  std::vector<MajorArc> arcs_;
};

/// DisjointnessViolation unless 2P² ≤ Q.
ArcDecomposition build_arcs(double X, double theta);

inline Classification classify(double alpha, const ArcDecomposition& arcs) { return arcs.classify(alpha); }

}  // namespace circlelab::arcs

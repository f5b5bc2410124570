#include <cmath>
#include <numeric>
#include <random>
#include <variant>

#include "circlelab/arcs.hpp"
#include "circlelab/error.hpp"
#include "circlelab/numtheory.hpp"
#include "doctest.h"

using namespace circlelab;
using namespace circlelab::arcs;

namespace {

bool valid(const RationalApproximation& r, double alpha, double Q) {
  const double reduced = alpha - std::floor(alpha - 1.0 / Q);
  return r.q >= 1 && r.a >= 1 && r.a <= r.q && r.q <= Q && std::gcd(r.a, r.q) == 1 &&
         std::fabs(r.beta) <= 1.0 / (static_cast<double>(r.q) * Q) * (1 + 1e-12) &&
         std::fabs(static_cast<double>(r.a) / r.q + r.beta - reduced) < 1e-15;
}

// Smallest q ≤ Q admitting some a with |α − a/q| ≤ 1/(qQ).
std::int64_t exhaustive_min_q(double alpha, double Q) {
  for (std::int64_t q = 1; q <= static_cast<std::int64_t>(Q); ++q) {
    const double a = std::round(alpha * q);
    if (std::fabs(alpha - a / q) <= 1.0 / (q * Q)) return q;
  }
  return -1;
}

}  // namespace

TEST_CASE("Dirichlet approximation") {
  auto r = dirichlet_approx(1.0 / 3.0, 10.0);
  CHECK(r.a == 1);
  CHECK(r.q == 3);
  CHECK(std::fabs(r.beta) < 1e-16);
  r = dirichlet_approx(0.3, 5.0);
  CHECK(r.a == 1);
  CHECK(r.q == 3);
  CHECK(r.beta == doctest::Approx(-1.0 / 30.0).epsilon(1e-14));
  CHECK(std::fabs(r.beta) <= 1.0 / 15.0);
  CHECK(exhaustive_min_q(0.3, 5.0) == 3);
  const double s = std::sqrt(2.0) - 1.0;
  r = dirichlet_approx(s, 100.0);
  CHECK(r.q == 70);
  CHECK(valid(r, s, 100.0));
  CHECK(convergent_denominators(s, 100.0) == std::vector<std::int64_t>{1, 2, 5, 12, 29, 70});
  CHECK(exhaustive_min_q(s, 100.0) == 70);
  CHECK_THROWS_AS(dirichlet_approx(0.5, 1.0), Error);
}

TEST_CASE("Dirichlet approximation is total") {
  std::mt19937_64 rng(11);
  for (double Q : {2.0, 10.0, 1000.0, 12345.6}) {
    std::uniform_real_distribution<double> dist(1.0 / Q, 1.0 + 1.0 / Q);
    for (int i = 0; i < 25000; ++i) {
      const double alpha = dist(rng);
      REQUIRE(valid(dirichlet_approx(alpha, Q), alpha, Q));
    }
  }
  CHECK(valid(dirichlet_approx(1.0 + 1.0 / 8.0, 8.0), 1.0 + 1.0 / 8.0, 8.0));
  CHECK(valid(dirichlet_approx(1.0 / 8.0, 8.0), 1.0 / 8.0, 8.0));
  CHECK(valid(dirichlet_approx(-3.7, 50.0), -3.7, 50.0));
}

TEST_CASE("arc dissection") {
  const auto d = build_arcs(1e4, 0.25);
  CHECK(d.P() == doctest::Approx(10.0));
  CHECK(d.Q() == doctest::Approx(1000.0));
  std::uint64_t phi_sum = 0;
  for (std::uint64_t q = 1; q <= 10; ++q) phi_sum += nt::euler_phi(q);
  CHECK(d.arcs().size() == phi_sum);
  CHECK(d.arcs().size() == 32);
  double widths = 0.0;
  for (const auto& arc : d.arcs()) widths += arc.width();
  CHECK(d.major_measure() == doctest::Approx(widths).epsilon(1e-12));
  CHECK(std::fabs(d.major_measure() + d.minor_measure() - 1.0) < 1e-12);
  for (std::size_t i = 1; i < d.arcs().size(); ++i) CHECK(d.arcs()[i - 1].right < d.arcs()[i].left);
  CHECK_THROWS_AS(build_arcs(100.0, 0.49), Error);
  try {
    build_arcs(100.0, 0.49);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisjointnessViolation);
  }
}

TEST_CASE("classification") {
  const auto d = build_arcs(1e4, 0.25);
  auto c = classify(0.5, d);
  REQUIRE(std::holds_alternative<Major>(c));
  CHECK(std::get<Major>(c).a == 1);
  CHECK(std::get<Major>(c).q == 2);
  for (const auto& arc : d.arcs()) {
    CHECK(std::holds_alternative<Major>(classify(arc.left, d)));
    CHECK(std::holds_alternative<Major>(classify(arc.right, d)));
    if (arc.right < d.window_right()) {
      CHECK(std::holds_alternative<Minor>(classify(std::nextafter(arc.right, 2.0), d)));
    }
  }
  const auto small = build_arcs(std::pow(2.0, 1.0 / 0.1), 0.1);  // P = 2
  CHECK(small.max_denominator() == 2);
  CHECK(std::holds_alternative<Minor>(classify(0.5 + 2.0 / small.Q(), small)));
  CHECK_THROWS_AS(classify(0.0, d), Error);
  CHECK_THROWS_AS(classify(1.5, d), Error);
  CHECK(d.reduce_to_window(3.25) == doctest::Approx(0.25));
  CHECK(d.reduce_to_window(-0.5) == doctest::Approx(0.5));
}

TEST_CASE("classification agrees with Dirichlet approximation") {
  for (auto [X, theta] : {std::pair{1e4, 0.25}, std::pair{1e6, 0.2}, std::pair{500.0, 0.25}}) {
    const auto d = build_arcs(X, theta);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(d.window_left(), d.window_right());
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
      const double alpha = dist(rng);
      const auto approx = dirichlet_approx(alpha, d.Q());
      const auto c = classify(alpha, d);
      if (approx.q <= d.max_denominator()) {
        REQUIRE(std::holds_alternative<Major>(c));
        CHECK(std::get<Major>(c).q == approx.q);
        CHECK(std::get<Major>(c).a == approx.a);
      }
      if (const auto* m = std::get_if<Major>(&c)) {
        const double beta = alpha - static_cast<double>(m->a) / m->q;
        if (std::fabs(beta) < 1.0 / (m->q * (d.Q() + m->q))) {
          CHECK(approx.q == m->q);
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
  }
}

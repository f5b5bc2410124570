#include <random>

#include "circlelab/error.hpp"
#include "circlelab/theorem.hpp"
#include "doctest.h"
#include "theorem_fixtures.hpp"

using namespace circlelab;
using namespace circlelab::theorem;

TEST_CASE("rational formatting") {
  CHECK(to_string(Rational(19, 18)) == "19/18");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(parse_rational("5/4") == Rational(5, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-0.05") == Rational(-1, 20));
  CHECK(parse_rational("010/4") == Rational(5, 2));
  CHECK_THROWS_AS(parse_rational("x/2"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("exponent table") {
  for (const auto& row : fixtures::kExponentTable) {
    CAPTURE(row.r);
    CAPTURE(row.s);
    CAPTURE(row.ell);
    const auto rep = evaluate_theorem({row.r, row.s, row.ell, parse_rational(row.delta)});
    CHECK(to_string(rep.theta0) == row.theta0);
    CHECK(to_string(rep.trivial_exp) == row.trivial);
    CHECK(to_string(rep.main_exp) == row.main);
    CHECK(to_string(rep.remainder_exp) == row.remainder);
    CHECK(to_string(rep.case_tag) == row.case_tag);
    CHECK(to_string(rep.final_exp) == row.final_exp);
    CHECK(rep.nontrivial == row.nontrivial);
  }
}

TEST_CASE("hypotheses") {
  CHECK_THROWS_AS(evaluate_theorem({3, 2, 3, 0}), Error);
  try {
    evaluate_theorem({3, 2, 3, 0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolation);
  }
  try {
    minor_arc_exponent({2, 3, 2, 0}, Rational(1, 2));
    FAIL("expected ThetaTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ThetaTooLarge);
  }
  CHECK_THROWS_AS(major_arc_exponents({2, 3, 2, 0}, Rational(2, 5)), Error);
}

TEST_CASE("minor and major arc exponents") {
  const ProblemShape shape{2, 3, 2, 0};
  CHECK(minor_arc_exponent(shape, Rational(1, 3)) == evaluate_theorem(shape).remainder_exp);
  CHECK(minor_arc_exponent(shape, Rational(1, 6)) == Rational(31, 24));
  CHECK(minor_arc_exponent(shape, 0) == Rational(4, 3));
  const auto major = major_arc_exponents(shape, Rational(1, 3));
  CHECK(major[0] == Rational(19, 18));
  CHECK(major[2] == Rational(1, 3));
  const auto zero = major_arc_exponents(shape, 0);
  CHECK(zero[0] == Rational(1, 3));
  CHECK(zero[1] == Rational(0));
  CHECK(zero[2] == Rational(1, 3));
}

TEST_CASE("major-arc comparison over a random grid") {
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const int r = 2 + static_cast<int>(rng() % 9);
    const int s = 2 + static_cast<int>(rng() % 11);
    const int ell = (1 << (r - 1)) + static_cast<int>(rng() % 200);
    const ProblemShape shape{r, s, ell, 0};
    const Rational t0 = std::min(Rational(1, r), Rational(1, s));
    const Rational theta = t0 * Rational(static_cast<long long>(rng() % 1001), 1000);
    CHECK(major_comparison_holds(shape, theta));
    ++tested;
  }
  CHECK(tested == 10000);
}

TEST_CASE("assembled exponent matches the theorem") {
  for (int r = 2; r <= 10; ++r) {
    for (int s = 2; s <= 10; ++s) {
      for (int extra : {0, 1, 5, 40}) {
        for (auto delta : {Rational(0), Rational(1, 7), Rational(1)}) {
          const ProblemShape shape{r, s, (1 << (r - 1)) + extra, delta};
          CHECK(assembled_exponent(shape) == evaluate_theorem(shape).final_exp);
        }
      }
    }
  }
}

TEST_CASE("saving over the trivial exponent grows with ell") {
  for (int r = 2; r <= 4; ++r) {
    for (int s = 2; s <= 9; ++s) {
      for (auto delta : {Rational(0), Rational(1, 4)}) {
        Rational prev_gap = 1000;
        for (int ell = 1 << (r - 1); ell <= (1 << (r - 1)) + 64; ++ell) {
          const auto rep = evaluate_theorem({r, s, ell, delta});
          const Rational gap = rep.final_exp - rep.trivial_exp;
          CHECK(gap <= prev_gap);
          prev_gap = gap;
        }
      }
    }
  }
}

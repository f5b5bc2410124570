#include <cmath>
#include <complex>
#include <numbers>

#include "circlelab/coefficients.hpp"
#include "circlelab/error.hpp"
#include "circlelab/gamma.hpp"
#include "circlelab/voronoi.hpp"
#include "circlelab/weight.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circlelab;
using namespace circlelab::voronoi;

namespace {

const LanglandsParams kTempered = LanglandsParams::tempered(0.4);
const LanglandsParams kSkew({cplx(0.1, 0.3), cplx(-0.2, 0.1), cplx(0.1, -0.4)});

// Returns the combination and, through `scale`, the magnitude of its two summands.
cplx six_gamma(cplx s, const LanglandsParams& p, Sign sign, double* scale = nullptr) {
  cplx first = 1.0, second = 1.0;
  for (const auto& a : p.alpha()) {
    first *= oracle::lanczos_gamma((1.0 + s + a) / 2.0) / oracle::lanczos_gamma((-s - a) / 2.0);
    second *= oracle::lanczos_gamma((2.0 + s + a) / 2.0) / oracle::lanczos_gamma((1.0 - s - a) / 2.0);
  }
  const cplx pref = 1.0 / (2.0 * std::pow(std::numbers::pi, 3.0 * (s + 0.5)));
  const cplx i(0, 1);
  if (scale) *scale = std::abs(pref) * (std::abs(first) + std::abs(second));
  return pref * (sign == Sign::Plus ? first - i * second : first + i * second);
}

}  // namespace

TEST_CASE("log gamma against Lanczos") {
  for (double re : {-7.3, -2.5, -0.2, 0.3, 0.5, 1.0, 2.7, 11.0, 40.0}) {
    for (double im : {0.0, 0.4, -1.5, 5.0, -12.0, 30.0}) {
      const cplx z(re, im);
      const cplx ref = oracle::lanczos_gamma(z);
      const cplx got = std::exp(special::log_gamma(z));
      CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
      const cplx rg = std::exp(special::log_rgamma(z));
      CHECK(std::abs(rg * ref - 1.0) < 1e-12);
    }
  }
  // Γ(1/2) = √π, Γ(n) = (n−1)!.
  CHECK(std::exp(special::log_gamma(0.5)).real() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(std::exp(special::log_gamma(6.0)).real() == doctest::Approx(120.0).epsilon(1e-14));
  CHECK(std::abs(std::exp(special::log_rgamma(-3.0))) < 1e-14);
  // Large imaginary parts: |Γ(1/2+iy)|² = π/cosh(πy).
  for (double y : {50.0, 300.0, 5000.0}) {
    const double lhs = 2.0 * special::log_gamma(cplx(0.5, y)).real();
    const double rhs = std::log(std::numbers::pi) - (std::numbers::pi * y + std::log1p(std::exp(-2 * std::numbers::pi * y)) - std::log(2.0));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    const double lr = special::log_rgamma(cplx(-0.7, y)).real() + special::log_gamma(cplx(-0.7, y)).real();
    CHECK(std::fabs(lr) < 1e-9);
  }
}

TEST_CASE("Langlands parameters") {
  CHECK_THROWS_AS(LanglandsParams({cplx(0.1), cplx(0.1), cplx(0.1)}), Error);
  CHECK_THROWS_AS(LanglandsParams({cplx(0.45), cplx(-0.45), cplx(0)}), Error);
  CHECK_NOTHROW(LanglandsParams({cplx(0.4), cplx(-0.4), cplx(0)}));
  const auto p = LanglandsParams::parse("0.1+0.3i,-0.2+0.1i,0.1-0.4i");
  CHECK(p.alpha()[0] == cplx(0.1, 0.3));
  CHECK(p.alpha()[2] == cplx(0.1, -0.4));
  CHECK(LanglandsParams::parse("2.5").alpha()[0] == cplx(0, 2.5));
  CHECK(LanglandsParams::parse("0.4i,0,-0.4i").alpha()[2] == cplx(0, -0.4));
  CHECK_THROWS_AS(LanglandsParams::parse("1,2"), Error);
  CHECK_THROWS_AS(LanglandsParams::parse("abc"), Error);
  CHECK(kTempered.sigma_floor() == doctest::Approx(-1.0));
  CHECK(kSkew.sigma_floor() == doctest::Approx(-0.8));
  CHECK(kSkew.default_sigma() == doctest::Approx(-0.05));
}

TEST_CASE("gamma factor") {
  const LanglandsParams zero = LanglandsParams::tempered(0.0);
  for (double s : {-0.5, 0.1, 0.7, 2.3}) {
    const auto g = gamma_products(s, zero);
    const cplx diff = gamma_pm(s, zero, Sign::Plus) - gamma_pm(s, zero, Sign::Minus);
    CHECK(std::abs(diff - (-2.0 * cplx(0, 1) * g.second * g.prefactor)) < 1e-14 * (1 + std::abs(diff)));
    CHECK(std::fabs(g.first.imag()) < 1e-12 * std::abs(g.first));
  }
  for (const auto& p : {zero, kTempered, kSkew}) {
    for (cplx s : {cplx(0.1), cplx(-0.3, 2.0), cplx(0.25, -7.5), cplx(1.7, 15.0)}) {
      for (Sign sign : {Sign::Plus, Sign::Minus}) {
        double scale = 0.0;
        const cplx ref = six_gamma(s, p, sign, &scale);
        CHECK(std::abs(gamma_pm(s, p, sign) - ref) < 1e-11 * scale);
      }
    }
  }
  // Conjugation: γ±(s̄) with conjugated α is the conjugate of γ∓(s).
  for (cplx s : {cplx(0.3, 4.0), cplx(-0.2, -9.0)}) {
    CHECK(std::abs(gamma_pm(std::conj(s), kSkew.conjugate(), Sign::Plus) - std::conj(gamma_pm(s, kSkew, Sign::Minus))) <
          1e-12 * std::abs(gamma_pm(s, kSkew, Sign::Minus)));
    const double a = std::abs(gamma_pm(std::conj(s), kTempered, Sign::Plus));
    const double b = std::abs(gamma_pm(s, kTempered, Sign::Minus));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  try {
    gamma_pm(cplx(-1.0), zero, Sign::Plus);
    FAIL("expected PoleProximity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleProximity);
  }
}

TEST_CASE("Mellin samples agree with direct quadrature") {
  const PhiSpec spec{weight::WeightFunction(2.0), 50.0, 0.1 / 50.0};
  const PhiTransform phi(spec, kTempered);
  for (double t : {0.0, 3.0, -10.0, 40.0, -120.0}) {
    const cplx s(phi.sigma(), t);
    const cplx ref = weight::phi_beta_mellin(spec.w, spec.X, spec.beta, -s);
    CHECK(std::abs(phi.mellin_at(t) - ref) < 1e-10 * std::abs(phi.mellin_at(0.0)));
  }
}

TEST_CASE("phi transform: contour invariance and error estimate") {
  int points = 0;
  for (double beta_x : {0.0, 3.0}) {
    const PhiSpec spec{weight::WeightFunction(4.0), 200.0, beta_x / 200.0};
    const PhiTransform a(spec, kTempered), b(spec, kTempered, kTempered.default_sigma() + 0.25);
    for (double xX : {0.3, 2.0, 20.0, 300.0}) {
      for (Sign sign : {Sign::Plus, Sign::Minus}) {
        const auto va = a(xX / spec.X, sign), vb = b(xX / spec.X, sign);
        CHECK(std::abs(va.value - vb.value) <= std::max(1e-6 * std::abs(va.value), 1e-12));
        CHECK(va.error_estimate < 1e-10);
        ++points;
      }
    }
  }
  CHECK(points == 16);
  CHECK_THROWS_AS(PhiTransform({weight::WeightFunction(2.0), 10.0, 0.0}, kTempered, -1.0), Error);
  try {
    PhiTransform({weight::WeightFunction(2.0), 10.0, 0.0}, kTempered, -1.2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllegalContour);
  }
  PhiOptions tight;
  tight.t_max = 1200.0;
  try {
    PhiTransform({weight::WeightFunction(2.0), 10.0, 0.0}, kTempered, {}, tight);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
}

TEST_CASE("phi transform conjugation") {
  const PhiSpec spec{weight::WeightFunction(2.0), 100.0, 0.0};
  for (const auto& p : {kTempered, kSkew}) {
    const PhiTransform phi(spec, p), phic(spec, p.conjugate());
    for (double xX : {0.5, 5.0, 50.0}) {
      for (Sign sign : {Sign::Plus, Sign::Minus}) {
        const Sign other = sign == Sign::Plus ? Sign::Minus : Sign::Plus;
        const cplx v = phi(xX / spec.X, sign).value;
        const cplx w = phic(xX / spec.X, other).value;
        CHECK(std::abs(w - std::conj(v)) < 1e-10 * (1.0 + std::abs(v)));
      }
    }
  }
}

TEST_CASE("regimes") {
  const PhiSpec spec{weight::WeightFunction(2.0), 1000.0, 0.004};
  const auto p = PhiRegimeParams::from_spec(spec);
  CHECK(p.R == doctest::Approx(6.0));
  CHECK(p.Z == doctest::Approx(5.0));
  CHECK(phi_regime(0.5 / 1000.0, p) == 3);
  CHECK(phi_regime(1.0 / 1000.0, p) == 2);
  CHECK(phi_regime(200.0 / 1000.0, p) == 2);
  CHECK(phi_regime(300.0 / 1000.0, p) == 1);
  CHECK(phi_envelope(8.0 / 1000.0, p) == doctest::Approx(10.0));
  // Regime-2 envelope over a sweep.
  const PhiTransform phi(spec, kTempered);
  for (double xX = 10.0; xX <= std::pow(p.R, 3.0); xX *= 1.5) {
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      CHECK(std::abs(phi(xX / spec.X, sign).value) / phi_envelope(xX / spec.X, p) <= 100.0);
    }
  }
}

TEST_CASE("Voronoi right-hand side") {
  const auto table = coeffs::build_table(coeffs::Backend::Sym2Tau, 100, coeffs::TwoDimLimits{8, 400});
  const PhiSpec spec{weight::WeightFunction(2.0), 50.0, 0.0};
  const auto p = PhiRegimeParams::from_spec(spec);

  const auto one = voronoi_rhs(1, 1, spec, table, kTempered, 64.0);
  const PhiTransform phi(spec, kTempered);
  cplx direct = 0.0;
  for (std::uint64_t d2 = 1; d2 <= d2_cutoff(1, 1, p, 64.0); ++d2) {
    for (Sign sign : {Sign::Plus, Sign::Minus}) direct += table.at2(1, d2) / d2 * phi(static_cast<double>(d2), sign).value;
  }
  CHECK(std::abs(one.value - direct) < 1e-13);
  for (const auto& t : one.terms) {
    CHECK(t.d1 == 1);
    CHECK(t.kloosterman == doctest::Approx(1.0));
  }

  for (std::int64_t q : {2, 3, 4, 6}) {
    for (double tr : {1.0, 4.0}) {
      const auto rhs = voronoi_rhs(1, q, spec, table, kTempered, tr);
      // Lattice points {(±, d₁, d₂): d₁ | q, d₁²d₂ ≤ q³·threshold}.
      const double bound = tr * std::pow(p.R, 3.1) / p.X * std::pow(q, 3);
      std::size_t count = 0;
      for (std::int64_t d1 = 1; d1 <= q; ++d1) {
        if (q % d1 != 0) continue;
        for (std::int64_t d2 = 1; d1 * d1 * d2 <= bound; ++d2) count += 2;
      }
      CHECK(rhs.term_count == count);
      for (const auto& t : rhs.terms) CHECK(q % static_cast<std::int64_t>(t.d1) == 0);
    }
  }
  try {
    voronoi_rhs(2, 4, spec, table, kTempered, 1.0);
    FAIL("expected CoprimalityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoprimalityViolation);
  }
  try {
    voronoi_rhs(1, 7, spec, table, kTempered, 64.0);
    FAIL("expected TableTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TableTooSmall);
  }
  CHECK(std::isfinite(std::abs(voronoi_lhs(1, 2, spec, table))));
}

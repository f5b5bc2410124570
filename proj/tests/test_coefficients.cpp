#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "circlelab/coefficients.hpp"
#include "circlelab/error.hpp"
#include "circlelab/ramanujan_tau.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circlelab;
using coeffs::Backend;

TEST_CASE("prime powers") {
  const auto src = coeffs::HeckeSource::ramanujan(200);
  CHECK(coeffs::coeff_prime_power(src, 2, 0, 0) == 1.0);
  CHECK(coeffs::coeff_prime_power(src, 2, 1, 0) == doctest::Approx(-0.71875).epsilon(1e-15));
  const double lam2 = -24.0 / std::pow(2.0, 5.5);
  double prev = 1.0, cur = lam2;
  for (int i = 1; i < 4; ++i) {
    const double next = lam2 * cur - prev;
    prev = cur;
    cur = next;
  }
  CHECK(coeffs::coeff_prime_power(src, 2, 2, 0) == doctest::Approx(cur + 1.0).epsilon(1e-14));
  CHECK(coeffs::coeff_prime_power(src, 2, 2, 0) == doctest::Approx(1.23535156).epsilon(1e-8));
  CHECK_THROWS_AS(coeffs::coeff_prime_power(src, 211, 1, 0), Error);
  CHECK_THROWS_AS(coeffs::coeff_prime_power(src, 2, 10, 5, 12), Error);
  try {
    coeffs::coeff_prime_power(src, 211, 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingPrime);
  }
}

TEST_CASE("self-duality and the Satake triple") {
  const auto src = coeffs::HeckeSource::ramanujan(100);
  for (auto p : nt::primes_up_to(100)) {
    const auto t = coeffs::SatakeTriple::from_lambda(src.lambda(p));
    CHECK(std::abs(t.product() - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(t.a_sq) - 1.0) < 1e-14);
    for (int k = 0; k <= 6; ++k) {
      for (int j = 0; k + j <= 6; ++j) {
        CHECK(std::fabs(coeffs::coeff_prime_power(src, p, k, j) - coeffs::coeff_prime_power(src, p, j, k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("table against the lift identity") {
  const int n = 10000;
  const auto table = coeffs::build_table(Backend::Sym2Tau, n);
  const auto ref = oracle::lift_identity(oracle::tau_by_recursion(n), n);
  double worst = 0.0;
  for (int m = 1; m <= n; ++m) worst = std::max(worst, std::fabs(table.at(m) - ref[m]));
  CHECK(worst < 1e-9);
  CHECK(table.at(1) == 1.0);
  CHECK(table.at(6) == table.at(2) * table.at(3));
  CHECK(table.at(4) == doctest::Approx(1.23535156).epsilon(1e-8));
  CHECK_THROWS_AS(table.at(n + 1), Error);
}

TEST_CASE("two-dimensional block is multiplicative") {
  const auto table = coeffs::build_table(Backend::Sym2Tau, 100, coeffs::TwoDimLimits{30, 30});
  for (std::uint64_t m1 = 1; m1 <= 5; ++m1) {
    for (std::uint64_t m2 = 1; m2 <= 5; ++m2) {
      for (std::uint64_t n1 = 1; n1 <= 6; ++n1) {
        for (std::uint64_t n2 = 1; n2 <= 6; ++n2) {
          if (std::gcd(m1 * m2, n1 * n2) != 1) continue;
          CHECK(table.at2(m1 * n1, m2 * n2) == doctest::Approx(table.at2(m1, m2) * table.at2(n1, n2)).epsilon(1e-12));
        }
      }
    }
  }
  for (std::uint64_t d = 1; d <= 30; ++d) CHECK(table.at2(d, 1) == doctest::Approx(table.at(d)).epsilon(1e-13));
  for (std::uint64_t d = 1; d <= 30; ++d) CHECK(table.at2(1, d) == doctest::Approx(table.at(d)).epsilon(1e-13));
}

TEST_CASE("small tables and determinism") {
  const auto one = coeffs::build_table(Backend::Sym2Tau, 1);
  CHECK(one.limit() == 1);
  CHECK(one.at(1) == 1.0);
  const auto a = coeffs::build_table(Backend::Sym2Tau, 5000);
  const auto b = coeffs::build_table(Backend::Sym2Tau, 5000);
  CHECK(a.values() == b.values());
  const auto unit = coeffs::build_table(Backend::Unit, 10);
  for (std::uint64_t k = 1; k <= 10; ++k) CHECK(unit.at(k) == 1.0);
  const auto absol = coeffs::build_table(Backend::Absolute, 10);
  CHECK(absol.at(2) == doctest::Approx(0.71875).epsilon(1e-15));
}

TEST_CASE("Hecke bound at primes") {
  const auto table = coeffs::build_table(Backend::Sym2Tau, 20000);
  for (auto p : nt::primes_up_to(20000)) CHECK(std::fabs(table.at(p)) <= 3.0 + 1e-12);
}

TEST_CASE("missing prime data") {
  std::map<std::uint64_t, nt::i128> raw{{2, -24}, {3, 252}};
  coeffs::HeckeSource partial(12, raw);
  CHECK(partial.prime_limit() == 4);
  CHECK_NOTHROW(coeffs::build_table(partial, 4));
  try {
    coeffs::build_table(partial, 5);
    FAIL("expected MissingPrime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingPrime);
  }
}

TEST_CASE("second moment") {
  const auto table = coeffs::build_table(Backend::Sym2Tau, 10000);
  const auto one = coeffs::second_moment_scan(table, {1.0, 2.0});
  CHECK(one[0].second == 1.0);
  CHECK(one[1].second == doctest::Approx((1 + 0.71875 * 0.71875) / 2).epsilon(1e-14));
  const auto grid = coeffs::second_moment_scan(table, {100.0, 1000.0, 10000.0});
  double lo = 1e9, hi = 0;
  for (auto [x, v] : grid) {
    double direct = 0;
    for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(x); ++n) direct += table.at(n) * table.at(n);
    CHECK(v == doctest::Approx(direct / x).epsilon(1e-12));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 4.0);
  CHECK_THROWS_AS(coeffs::second_moment_scan(table, {20000.0}), Error);
  const auto ks = coeffs::kim_sarnak_diagnostic(table);
  CHECK(ks.max_ratio > 0.0);
}

TEST_CASE("cache round trip") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "circlelab_cache_test.bin";
  const auto table = coeffs::build_table(Backend::Sym2Tau, 500, coeffs::TwoDimLimits{7, 9});
  coeffs::write_cache(table, path);
  const auto back = coeffs::read_cache(path);
  CHECK(back.values() == table.values());
  CHECK(back.block() == table.block());
  CHECK(back.block_limits().d1 == 7);
  CHECK(back.block_limits().d2 == 9);
  CHECK(back.backend() == Backend::Sym2Tau);

  const auto plain = coeffs::build_table(Backend::Sym2Tau, 50);
  coeffs::write_cache(plain, path);
  CHECK(!coeffs::read_cache(path).has_block());

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "GL3COEF0garbage";
  }
  try {
    coeffs::read_cache(path);
    FAIL("expected CorruptCache");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CorruptCache);
  }
  std::filesystem::remove(path);
}

TEST_CASE("source from file") {
  const auto path = std::filesystem::temp_directory_path() / "circlelab_hecke.txt";
  {
    std::ofstream out(path);
    out << "# weight twelve\nweight 12\n2 -24\n3 252\n5 4830\n7 -16744\n";
  }
  const auto src = coeffs::HeckeSource::from_file(path);
  CHECK(src.weight() == 12);
  CHECK(src.prime_limit() == 10);
  const auto table = coeffs::build_table(src, 10);
  const auto ref = coeffs::build_table(Backend::Sym2Tau, 10);
  CHECK(table.values() == ref.values());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(coeffs::HeckeSource(12, {{2, 1000}}), Error);
}

// Acceptance criteria 1-10. `acceptance` runs all of them; `acceptance 3 7`
// runs a subset. One line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "circlelab/coefficients.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/harness.hpp"
#include "circlelab/theorem.hpp"
#include "circlelab/voronoi.hpp"
#include "circlelab/weight.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "theorem_fixtures.hpp"

using namespace circlelab;

namespace {

// Pinned tolerances and budgets.
constexpr double kC1Seconds = 1.0;
constexpr double kC2LiftTolerance = 1e-9;
constexpr std::uint64_t kC2LiftMax = 10000;
constexpr std::uint32_t kC2PrimeMax = 100000;
constexpr double kC2HeckeBound = 3.0;
constexpr double kC2Seconds = 30.0;
constexpr std::uint64_t kC3CMax = 500;
constexpr double kC3Seconds = 300.0;
constexpr std::uint64_t kC4QMax = 2000;
constexpr double kC4RatioLimit = 10.0;
constexpr double kC4Seconds = 600.0;
constexpr double kC5X = 500.0;
constexpr double kC5Delta = 2.0;
constexpr std::uint64_t kC5NodesPerX = 40;
constexpr double kC5GapTolerance = 1e-6;
constexpr double kC5PartitionTolerance = 1e-12;
constexpr double kC5Seconds = 120.0;
constexpr double kC6Epsilon = 0.05;
constexpr double kC6Bound = 10.0;
constexpr double kC6ExhaustiveMax = 1000.0;
constexpr double kC6Seconds = 60.0;
constexpr double kC7EnvelopeLimit = 10.0;
constexpr double kC7Seconds = 120.0;
constexpr double kC8ShiftTolerance = 1e-6;
constexpr double kC8DecayPerDoubling = 1e3;
constexpr double kC8EnvelopeLimit = 100.0;
constexpr double kC8Seconds = 300.0;
constexpr double kC9Band = 0.15;
constexpr double kC9Seconds = 600.0;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict timed(double budget, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.detail += "; runtime " + fmt("%.2f", secs) + " s (budget " + fmt("%g", budget) + " s)";
  v.passed = v.passed && secs < budget;
  return v;
}

Verdict criterion1() {
  return timed(kC1Seconds, [] {
    int mismatches = 0;
    bool remark = false;
    for (const auto& row : fixtures::kExponentTable) {
      const auto rep = theorem::evaluate_theorem({row.r, row.s, row.ell, theorem::parse_rational(row.delta)});
      const bool ok = theorem::to_string(rep.theta0) == row.theta0 && theorem::to_string(rep.trivial_exp) == row.trivial &&
                      theorem::to_string(rep.main_exp) == row.main &&
                      theorem::to_string(rep.remainder_exp) == row.remainder &&
                      theorem::to_string(rep.case_tag) == row.case_tag &&
                      theorem::to_string(rep.final_exp) == row.final_exp && rep.nontrivial == row.nontrivial;
      mismatches += ok ? 0 : 1;
      if (row.r == 2 && row.s == 2 && row.ell == 2) remark = !rep.nontrivial;
    }
    return Verdict{mismatches == 0 && remark, std::to_string(fixtures::kExponentTable.size()) + " shapes, " +
                                                  std::to_string(mismatches) + " mismatches; (2,2,2) nontrivial=" +
                                                  (remark ? "false" : "true")};
  });
}

Verdict criterion2() {
  return timed(kC2Seconds, [] {
    const auto table = coeffs::build_table(coeffs::Backend::Sym2Tau, kC2PrimeMax);
    const auto tau = oracle::tau_by_recursion(static_cast<int>(kC2LiftMax));
    const auto lift = oracle::lift_identity(tau, static_cast<int>(kC2LiftMax));
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= kC2LiftMax; ++n) worst = std::max(worst, std::fabs(table.at(n) - lift[n]));
    double hecke = 0.0;
    for (auto p : nt::primes_up_to(kC2PrimeMax)) hecke = std::max(hecke, std::fabs(table.at(p)));
    return Verdict{worst < kC2LiftTolerance && hecke <= kC2HeckeBound,
                   "max |A(n,1) - lift| = " + fmt("%.3g", worst) + " (< 1e-9); max |A(p,1)| = " + fmt("%.6f", hecke) +
                       " (<= 3)"};
  });
}

Verdict criterion3() {
  return timed(kC3Seconds, [] {
    const auto scan = expsums::weil_scan(kC3CMax);
    return Verdict{scan.violations == 0, std::to_string(scan.violations) + " violations for c <= 500; max ratio " +
                                             fmt("%.6f", scan.max_ratio)};
  });
}

Verdict criterion4() {
  return timed(kC4Seconds, [] {
    const auto scan = expsums::gauss_envelope_scan({2, 3, 4, 5}, kC4QMax, kC4RatioLimit);
    return Verdict{scan.max_ratio < kC4RatioLimit,
                   "max |G_r(a,0;q)|/q^(1-1/r) = " + fmt("%.6f", scan.max_ratio) + " (< 10), q <= 2000, r = 2..5"};
  });
}

Verdict criterion5() {
  return timed(kC5Seconds, [] {
    const auto table = coeffs::build_table(coeffs::Backend::Sym2Tau, static_cast<std::uint64_t>(2 * kC5X));
    const auto rep = harness::orthogonality_check({2, 2, 2}, kC5X, kC5Delta, table,
                                                  kC5NodesPerX * static_cast<std::uint64_t>(kC5X), 0.25);
    return Verdict{rep.gap < kC5GapTolerance && rep.partition_gap <= kC5PartitionTolerance,
                   "relative gap " + fmt("%.3g", rep.gap) + " (< 1e-6); partition gap " + fmt("%.3g", rep.partition_gap) +
                       " (<= 1e-12); S = " + fmt("%.10g", rep.lhs.real())};
  });
}

Verdict criterion6() {
  return timed(kC6Seconds, [] {
    const auto rows = harness::hua_grid(2, {1e2, 1e3, 1e4, 1e5}, kC6Epsilon);
    bool bounded = true, non_increasing = true, exact = true;
    std::string ratios;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      bounded = bounded && rows[i].ratio < kC6Bound;
      if (i > 0) non_increasing = non_increasing && rows[i].ratio <= rows[i - 1].ratio;
      ratios += (i ? ", " : "") + fmt("%.4f", rows[i].ratio);
      if (rows[i].X <= kC6ExhaustiveMax) {
        const auto n = static_cast<std::uint64_t>(std::floor(std::sqrt(rows[i].X)));
        std::uint64_t direct = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
          for (std::uint64_t b = 1; b <= n; ++b)
            for (std::uint64_t c = 1; c <= n; ++c)
              for (std::uint64_t d = 1; d <= n; ++d) direct += a * a + b * b == c * c + d * d;
        exact = exact && direct == rows[i].count;
      }
    }
    return Verdict{bounded && non_increasing && exact,
                   "ratios " + ratios + "; bounded " + (bounded ? "yes" : "no") + ", non-increasing " +
                       (non_increasing ? "yes" : "no") + ", exhaustive match " + (exact ? "yes" : "no")};
  });
}

Verdict criterion7() {
  return timed(kC7Seconds, [] {
    double worst = 0.0;
    const auto grid = harness::standard_major_grid();
    for (const auto& t : grid) {
      worst = std::max(worst, harness::major_approx_residual(t.r, t.a, t.q, t.beta, t.X).envelope_ratio);
    }
    return Verdict{grid.size() == 50 && worst <= kC7EnvelopeLimit,
                   std::to_string(grid.size()) + " tuples; max envelope ratio " + fmt("%.4f", worst) + " (<= 10)"};
  });
}

Verdict criterion8() {
  return timed(kC8Seconds, [] {
    const auto params = voronoi::LanglandsParams::tempered(0.4);
    const double X = 1000.0;
    double worst_shift = 0.0, min_decay = INFINITY, worst_env = 0.0;
    int points = 0;
    for (double bX : {0.0, 5.0}) {
      const voronoi::PhiSpec spec{weight::WeightFunction(2.0), X, bX / X};
      const voronoi::PhiTransform base(spec, params);
      const voronoi::PhiTransform shifted(spec, params, params.default_sigma() + 0.25);
      const auto rp = voronoi::PhiRegimeParams::from_spec(spec);
      for (double xX : {0.5, 3.0, 20.0, 150.0, 900.0}) {
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          const auto a = base(xX / X, sign).value, b = shifted(xX / X, sign).value;
          worst_shift = std::max(worst_shift, std::abs(a - b) / std::abs(a));
          ++points;
        }
      }
      const double start = 10.0 * std::pow(rp.R, 3.0);
      for (int k = 0; k < 4; ++k) {
        const double xX = start * std::ldexp(1.0, k);
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          min_decay = std::min(min_decay, std::abs(base(xX / X, sign).value) / std::abs(base(2 * xX / X, sign).value));
        }
      }
      const double top = std::pow(rp.R, 3.0 + voronoi::kRegimeEpsilon);
      for (int k = 0; k <= 24; ++k) {
        const double x = std::pow(top, k / 24.0) / X;
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          worst_env = std::max(worst_env, std::abs(base(x, sign).value) / voronoi::phi_envelope(x, rp));
        }
      }
    }
    const bool a = points == 20 && worst_shift <= kC8ShiftTolerance;
    const bool b = min_decay >= kC8DecayPerDoubling;
    const bool c = worst_env <= kC8EnvelopeLimit;
    return Verdict{a && b && c, std::string("(a) contour shift ") + (a ? "PASS" : "FAIL") + " max rel " +
                                    fmt("%.3g", worst_shift) + " on " + std::to_string(points) + " points; (b) decay " +
                                    (b ? "PASS" : "FAIL") + " min factor per doubling " + fmt("%.3g", min_decay) +
                                    " (>= 1e3); (c) envelope " + (c ? "PASS" : "FAIL") + " max ratio " +
                                    fmt("%.3g", worst_env) + " (<= 100)"};
  });
}

Verdict criterion9() {
  return timed(kC9Seconds, [] {
    const auto grid = harness::geometric_grid(100.0, std::pow(10.0, 4.5), std::sqrt(10.0));
    const auto table = coeffs::build_table(coeffs::Backend::Sym2Tau, static_cast<std::uint64_t>(2.0 * grid.back()));
    const harness::SumShape shape{2, 2, 3};
    const auto signed_fit = harness::slope_fit(shape, 0.0, grid, table);
    const auto abs_fit = harness::slope_fit(shape, 0.0, grid, table.absolute());
    const bool ok = signed_fit.slope < abs_fit.slope && signed_fit.slope <= signed_fit.trivial_exp + kC9Band;
    return Verdict{ok, std::to_string(grid.size()) + " grid points; signed slope " + fmt("%.4f", signed_fit.slope) +
                           ", |A| slope " + fmt("%.4f", abs_fit.slope) + ", trivial " +
                           fmt("%.4f", signed_fit.trivial_exp) + " (+0.15)"};
  });
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion10() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "circlelab_acceptance_determinism";
  fs::remove_all(root);
  std::size_t files = 0;
  std::vector<std::string> differing;
  for (const auto& suite : cli::verify_suite_names()) {
    const auto first = root / suite / "first", second = root / suite / "second";
    std::ostringstream sink;
    const int c1 = cli::dispatch({"--out", first.string(), "verify", suite}, sink, sink);
    const int c2 = cli::dispatch({"--out", second.string(), "--config", (first / ("verify_" + suite + ".json")).string()},
                                 sink, sink);
    if (c1 != c2 || (c1 != 0 && c1 != 3)) differing.push_back(suite + " (exit codes)");
    for (const auto& entry : fs::directory_iterator(first)) {
      ++files;
      const auto twin = second / entry.path().filename();
      if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) differing.push_back(entry.path().filename().string());
    }
  }
  std::string detail = std::to_string(cli::verify_suite_names().size()) + " verify suites, " + std::to_string(files) +
                       " artifacts re-run from their echoed config";
  if (!differing.empty()) {
    detail += "; differing:";
    for (const auto& d : differing) detail += " " + d;
  } else {
    detail += "; all bit-identical";
  }
  return {differing.empty() && files > 0, detail};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria = {
    {"exponent table reproduction", criterion1},
    {"coefficient correctness", criterion2},
    {"Weil-bound scan", criterion3},
    {"Gauss-sum envelope", criterion4},
    {"orthogonality identity", criterion5},
    {"Hua count", criterion6},
    {"major-arc approximation", criterion7},
    {"Phi integrator", criterion8},
    {"cancellation ordering", criterion9},
    {"determinism", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) which.push_back(i);
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::printf("criterion %d: unknown\n", k);
      return 2;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(k - 1)];
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-28s %s  %s\n", k, name.c_str(), v.passed ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.passed;
  }
  return all ? 0 : 1;
}

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circlelab/coefficients.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/harness.hpp"
#include "circlelab/numtheory.hpp"
#include "circlelab/theorem.hpp"
#include "circlelab/voronoi.hpp"
#include "circlelab/weight.hpp"
#include "cli_support.hpp"

namespace circlelab::cli {

namespace {

struct Suite {
  std::vector<Check> checks;
  json details = json::object();
  std::vector<Artifact> extra;

  void add(Check c) { checks.push_back(std::move(c)); }

  Outcome finish(const std::string& name) const {
    bool passed = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    json report;
    report["suite"] = name;
    report["passed"] = passed;
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(check_json(c));
    report["checks"] = arr;
    report["details"] = details;
    Outcome o;
    o.artifacts.push_back({"verify_" + name + ".json", report});
    for (const auto& a : extra) o.artifacts.push_back(a);
    o.exit_code = passed ? 0 : 3;
    return o;
  }
};

std::string row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + "\n";
}

template <typename Setup>
void leaf(CLI::App* verify, std::vector<Command>& commands, const std::string& name, const std::string& desc,
          Setup setup) {
  auto* sub = verify->add_subcommand(name, desc);
  auto opts = std::make_shared<OptionSet>(sub);
  auto body = setup(*opts);
  commands.push_back({"verify " + name, sub, opts, [body, name](const Context& ctx) { return body(ctx).finish(name); }});
}

using Body = std::function<Suite(const Context&)>;

Body exponents_suite(OptionSet& o) {
  struct S {
    int r_max = 8, s_max = 8, ell_extra = 6;
  };
  auto st = std::make_shared<S>();
  o.add("r-max", st->r_max, "largest r")->check(CLI::Range(2, 12));
  o.add("s-max", st->s_max, "largest s")->check(CLI::Range(2, 64));
  o.add("ell-extra", st->ell_extra, "l runs over 2^(r-1) .. 2^(r-1)+ell-extra");
  return [st](const Context&) {
    Suite s;
    std::size_t shapes = 0, mismatches = 0;
    std::string csv = "r,s,ell,delta,case,final,nontrivial\n";
    for (int r = 2; r <= st->r_max; ++r)
      for (int sv = 2; sv <= st->s_max; ++sv)
        for (int ell = 1 << (r - 1); ell <= (1 << (r - 1)) + st->ell_extra; ++ell)
          for (const char* d : {"0", "1/10"}) {
            const theorem::ProblemShape shape{r, sv, ell, theorem::parse_rational(d)};
            const auto rep = theorem::evaluate_theorem(shape);
            ++shapes;
            if (theorem::assembled_exponent(shape) != rep.final_exp) ++mismatches;
            csv += row({std::to_string(r), std::to_string(sv), std::to_string(ell), d, theorem::to_string(rep.case_tag),
                        theorem::to_string(rep.final_exp), rep.nontrivial ? "true" : "false"});
          }
    s.add(make_check("assembled_vs_closed_form_mismatches", static_cast<double>(mismatches), "==", 0.0));
    const auto r222 = theorem::evaluate_theorem({2, 2, 2, 0});
    s.add(make_check("shape_2_2_2_nontrivial", r222.nontrivial ? 1.0 : 0.0, "==", 0.0));
    const auto r232 = theorem::evaluate_theorem({2, 3, 2, 0});
    s.add(make_check("shape_2_3_2_final_is_5/4", r232.final_exp == theorem::Rational(5, 4) ? 1.0 : 0.0, "==", 1.0));
    s.details["shapes"] = shapes;
    s.extra.push_back({"verify_exponents.csv", csv});
    return s;
  };
}

Body coeffs_suite(OptionSet& o) {
  struct S {
    std::uint64_t lift_max = 10000, prime_max = 100000;
    double tolerance = 1e-9;
  };
  auto st = std::make_shared<S>();
  o.add("lift-max", st->lift_max, "lift identity checked for n <= lift-max");
  o.add("prime-max", st->prime_max, "Hecke bound checked for p <= prime-max");
  o.add("tolerance", st->tolerance, "lift identity tolerance");
  return [st](const Context& ctx) {
    Suite s;
    const std::uint64_t n_max = std::max(st->lift_max, st->prime_max);
    const auto table = acquire_table(ctx, coeffs::Backend::Sym2Tau, n_max);
    const auto source = coeffs::HeckeSource::ramanujan(static_cast<std::uint32_t>(st->lift_max));
    // λ(m²) by multiplicativity over the factorization of m.
    auto lambda_sq = [&](std::uint64_t m) {
      double v = 1.0;
      for (const auto& [p, e] : nt::factorize(m)) v *= source.lambda_prime_power(p, 2 * e);
      return v;
    };
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= st->lift_max; ++n) {
      double lift = 0.0;
      for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % (d * d) != 0) continue;
        const std::uint64_t m = n / (d * d);
        lift += lambda_sq(m);
      }
      worst = std::max(worst, std::fabs(lift - table.at(n)));
    }
    double hecke = 0.0;
    for (auto p : nt::primes_up_to(static_cast<std::uint32_t>(st->prime_max))) hecke = std::max(hecke, std::fabs(table.at(p)));
    s.add(make_check("lift_identity_max_error", worst, "<", st->tolerance));
    s.add(make_check("max_abs_A_p1", hecke, "<=", 3.0));
    return s;
  };
}

Body weil_suite(OptionSet& o) {
  auto cmax = std::make_shared<std::uint64_t>(500);
  o.add("cmax", *cmax, "largest modulus")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{5000}));
  return [cmax](const Context& ctx) {
    Suite s;
    const auto scan = expsums::weil_scan(*cmax, ctx.workers);
    s.add(make_check("violations", static_cast<double>(scan.violations), "==", 0.0));
    s.add(make_check("max_imag_over_c", scan.max_imag, "<=", 1e-9));
    s.details["max_ratio"] = scan.max_ratio;
    s.extra.push_back({"verify_weil.csv", expsums::scan_csv(scan.worst_per_modulus)});
    return s;
  };
}

Body gauss_suite(OptionSet& o) {
  struct S {
    std::uint64_t qmax = 2000;
    std::vector<int> r_list{2, 3, 4, 5};
    double limit = 10.0;
  };
  auto st = std::make_shared<S>();
  o.add("qmax", st->qmax, "largest modulus")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
  o.add("r-list", st->r_list, "powers");
  o.add("limit", st->limit, "bound on |G_r(a,0;q)|/q^(1-1/r)");
  return [st](const Context& ctx) {
    Suite s;
    const auto scan = expsums::gauss_envelope_scan(st->r_list, st->qmax, st->limit, ctx.workers);
    s.add(make_check("max_ratio", scan.max_ratio, "<", st->limit));
    s.extra.push_back({"verify_gauss.csv", expsums::scan_csv(scan.worst_per_modulus)});
    return s;
  };
}

Body orthogonality_suite(OptionSet& o) {
  struct S {
    int r = 2, s = 2, ell = 2;
    double X = 500.0, Delta = 2.0, theta = 0.25;
    std::uint64_t nodes_per_X = 40;
  };
  auto st = std::make_shared<S>();
  o.add("r", st->r, "power");
  o.add("s", st->s, "last power");
  o.add("ell", st->ell, "number of r-th powers");
  o.add("X", st->X, "scale")->check(CLI::Range(1.0, 2000.0));
  o.add("Delta", st->Delta, "weight sharpness");
  o.add("theta", st->theta, "arc exponent of the major/minor partition");
  o.add("nodes-per-X", st->nodes_per_X, "trapezoid nodes per unit of X")->check(CLI::Range(std::uint64_t{40}, std::uint64_t{10000}));
  return [st](const Context&) {
    Suite s;
    const auto table = coeffs::build_table(coeffs::Backend::Sym2Tau, static_cast<std::uint64_t>(2.0 * st->X) + 1);
    const auto nodes = static_cast<std::uint64_t>(std::ceil(static_cast<double>(st->nodes_per_X) * st->X));
    const auto rep = harness::orthogonality_check({st->r, st->s, st->ell}, st->X, st->Delta, table, nodes, st->theta);
    s.add(make_check("relative_gap", rep.gap, "<", 1e-6));
    s.add(make_check("partition_gap", rep.partition_gap, "<=", 1e-12));
    s.add(make_check("reflection_gap", std::abs(rep.rhs_reflected - std::conj(rep.rhs)) / std::abs(rep.rhs), "<=", 1e-12));
    s.details["lhs"] = rep.lhs.real();
    s.details["rhs_re"] = rep.rhs.real();
    s.details["rhs_im"] = rep.rhs.imag();
    s.details["major_re"] = rep.major.real();
    s.details["minor_re"] = rep.minor.real();
    s.details["nodes"] = nodes;
    return s;
  };
}

Body hua_suite(OptionSet& o) {
  struct S {
    std::vector<double> grid{1e2, 1e3, 1e4, 1e5};
    double epsilon = 0.05, bound = 10.0, exhaustive_max = 1000.0;
  };
  auto st = std::make_shared<S>();
  o.add("grid", st->grid, "X values (r = 2)");
  o.add("epsilon", st->epsilon, "ratio count / X^(1+epsilon)");
  o.add("bound", st->bound, "bound on the ratio");
  o.add("exhaustive-max", st->exhaustive_max, "exhaustive 4-loop comparison for X <= this");
  return [st](const Context&) {
    Suite s;
    const auto rows = harness::hua_grid(2, st->grid, st->epsilon);
    std::string csv = "X,count,ratio\n";
    double worst = 0.0, max_increase = 0.0;
    std::uint64_t mismatches = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv += row({num(rows[i].X), std::to_string(rows[i].count), num(rows[i].ratio)});
      worst = std::max(worst, rows[i].ratio);
      if (i > 0) max_increase = std::max(max_increase, rows[i].ratio - rows[i - 1].ratio);
      if (rows[i].X <= st->exhaustive_max) {
        const std::uint64_t n = expsums::root_floor(rows[i].X, 2);
        std::uint64_t direct = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
          for (std::uint64_t b = 1; b <= n; ++b)
            for (std::uint64_t c = 1; c <= n; ++c)
              for (std::uint64_t d = 1; d <= n; ++d) direct += a * a + b * b == c * c + d * d;
        mismatches += direct != rows[i].count;
      }
    }
    s.add(make_check("max_ratio", worst, "<", st->bound));
    s.add(make_check("max_ratio_increase", max_increase, "<=", 0.0));
    s.add(make_check("exhaustive_mismatches", static_cast<double>(mismatches), "==", 0.0));
    s.extra.push_back({"verify_hua.csv", csv});
    return s;
  };
}

Body major_suite(OptionSet& o) {
  auto limit = std::make_shared<double>(10.0);
  o.add("limit", *limit, "bound on the envelope ratio");
  return [limit](const Context&) {
    Suite s;
    std::string csv = "r,a,q,beta,X,residual,envelope_ratio\n";
    double worst = 0.0;
    for (const auto& t : harness::standard_major_grid()) {
      const auto m = harness::major_approx_residual(t.r, t.a, t.q, t.beta, t.X);
      worst = std::max(worst, m.envelope_ratio);
      csv += row({std::to_string(t.r), std::to_string(t.a), std::to_string(t.q), num(t.beta), num(t.X), num(m.residual),
                  num(m.envelope_ratio)});
    }
    s.add(make_check("max_envelope_ratio", worst, "<=", *limit));
    s.extra.push_back({"verify_major.csv", csv});
    return s;
  };
}

Body minor_suite(OptionSet& o) {
  struct S {
    int r = 2, s = 3, ell = 2;
    double theta = 0.25, limit = 50.0;
    std::vector<double> grid{1e3, 1e4, 1e5};
    std::uint64_t samples = 2000;
  };
  auto st = std::make_shared<S>();
  o.add("r", st->r, "first power");
  o.add("s", st->s, "second power");
  o.add("theta", st->theta, "arc exponent");
  o.add("grid", st->grid, "X values");
  o.add("samples", st->samples, "minor-arc samples per X");
  o.add("limit", st->limit, "bound on sup / envelope");
  return [st](const Context& ctx) {
    Suite s;
    std::string csv = "X,seed,sup_r,envelope_r,ratio_r,sup_s,envelope_s,ratio_s\n";
    double worst = 0.0, over_global = 0.0;
    for (double X : st->grid) {
      const auto m = harness::minor_sup_scan({st->r, st->s, st->ell}, X, st->theta, st->samples, ctx.seed);
      worst = std::max({worst, m.ratio_r, m.ratio_s});
      over_global = std::max(over_global, m.sup_r - static_cast<double>(expsums::root_floor(X, st->r)));
      csv += row({num(X), std::to_string(m.seed), num(m.sup_r), num(m.envelope_r), num(m.ratio_r), num(m.sup_s),
                  num(m.envelope_s), num(m.ratio_s)});
    }
    s.add(make_check("max_ratio", worst, "<=", st->limit));
    s.add(make_check("sup_minus_global_bound", over_global, "<=", 0.0));
    s.details["seed"] = ctx.seed;
    s.extra.push_back({"verify_minor.csv", csv});
    return s;
  };
}

Body phi_suite(OptionSet& o) {
  struct S {
    double X = 1000.0, Delta = 2.0, beta_X = 5.0;
    std::string alpha_spec = "0.4";
    double shift_tolerance = 1e-6, decay_min = 1e3, envelope_max = 100.0;
  };
  auto st = std::make_shared<S>();
  o.add("X", st->X, "scale");
  o.add("Delta", st->Delta, "weight sharpness");
  o.add("beta-X", st->beta_X, "second modulation, as beta*X (the first is 0)");
  o.add("alpha-spec", st->alpha_spec, "Langlands parameters");
  o.add("shift-tolerance", st->shift_tolerance, "relative contour-shift tolerance");
  o.add("decay-min", st->decay_min, "required regime-1 decay per doubling");
  o.add("envelope-max", st->envelope_max, "bound on the regime-2 envelope ratio");
  return [st](const Context&) {
    Suite s;
    const auto params = voronoi::LanglandsParams::parse(st->alpha_spec);
    std::string csv = "part,beta_X,xX,sign,value_abs,metric\n";
    double worst_shift = 0.0, min_decay = INFINITY, worst_envelope = 0.0;
    for (double bX : {0.0, st->beta_X}) {
      const voronoi::PhiSpec spec{weight::WeightFunction(st->Delta), st->X, bX / st->X};
      const voronoi::PhiTransform base(spec, params);
      const voronoi::PhiTransform shifted(spec, params, params.default_sigma() + 0.25);
      const auto rp = voronoi::PhiRegimeParams::from_spec(spec);
      for (double xX : {0.5, 3.0, 20.0, 150.0, 900.0}) {
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          const auto a = base(xX / st->X, sign).value;
          const auto b = shifted(xX / st->X, sign).value;
          const double rel = std::abs(a - b) / std::abs(a);
          worst_shift = std::max(worst_shift, rel);
          csv += row({"shift", num(bX), num(xX), voronoi::to_string(sign), num(std::abs(a)), num(rel)});
        }
      }
      const double start = 10.0 * std::pow(rp.R, 3.0);
      for (int k = 0; k < 4; ++k) {
        const double xX = start * std::ldexp(1.0, k);
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          const double here = std::abs(base(xX / st->X, sign).value);
          const double next = std::abs(base(2.0 * xX / st->X, sign).value);
          min_decay = std::min(min_decay, here / next);
          csv += row({"decay", num(bX), num(xX), voronoi::to_string(sign), num(here), num(here / next)});
        }
      }
      const double top = std::pow(rp.R, 3.0 + voronoi::kRegimeEpsilon);
      for (int k = 0; k <= 24; ++k) {
        const double xX = std::pow(top, k / 24.0);
        for (auto sign : {voronoi::Sign::Plus, voronoi::Sign::Minus}) {
          const double v = std::abs(base(xX / st->X, sign).value);
          const double ratio = v / voronoi::phi_envelope(xX / st->X, rp);
          worst_envelope = std::max(worst_envelope, ratio);
          csv += row({"envelope", num(bX), num(xX), voronoi::to_string(sign), num(v), num(ratio)});
        }
      }
    }
    s.add(make_check("max_relative_contour_shift", worst_shift, "<=", st->shift_tolerance));
    s.add(make_check("min_regime1_decay_per_doubling", min_decay, ">=", st->decay_min));
    s.add(make_check("max_regime2_envelope_ratio", worst_envelope, "<=", st->envelope_max));
    s.extra.push_back({"verify_phi.csv", csv});
    return s;
  };
}

Body cancellation_suite(OptionSet& o) {
  struct S {
    int r = 2, s = 2, ell = 3;
    double X_min = 100.0, X_max = 31622.776601683792, ratio = 3.1622776601683795, band = 0.15, delta = 0.0;
  };
  auto st = std::make_shared<S>();
  o.add("r", st->r, "power");
  o.add("s", st->s, "last power");
  o.add("ell", st->ell, "number of r-th powers");
  o.add("X-min", st->X_min, "first grid point");
  o.add("X-max", st->X_max, "last grid point");
  o.add("ratio", st->ratio, "grid ratio");
  o.add("band", st->band, "allowed excess over the trivial exponent");
  o.add("delta", st->delta, "Delta = 2 X^delta");
  return [st](const Context& ctx) {
    Suite s;
    const auto grid = harness::geometric_grid(st->X_min, st->X_max, st->ratio);
    const auto table = acquire_table(ctx, coeffs::Backend::Sym2Tau, static_cast<std::uint64_t>(std::floor(2.0 * grid.back())));
    const harness::SumShape shape{st->r, st->s, st->ell};
    const auto signed_fit = harness::slope_fit(shape, st->delta, grid, table);
    const auto abs_fit = harness::slope_fit(shape, st->delta, grid, table.absolute());
    s.add(make_check("signed_minus_abs_slope", signed_fit.slope - abs_fit.slope, "<", 0.0));
    s.add(make_check("signed_slope_minus_trivial", signed_fit.slope - signed_fit.trivial_exp, "<=", st->band));
    s.details["signed_slope"] = signed_fit.slope;
    s.details["abs_slope"] = abs_fit.slope;
    s.details["trivial_exp"] = signed_fit.trivial_exp;
    s.details["final_exp"] = signed_fit.final_exp;
    std::string csv = "X,abs_S_signed,abs_S_abs\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv += row({num(grid[i]), num(signed_fit.values[i]), num(abs_fit.values[i])});
    s.extra.push_back({"verify_cancellation.csv", csv});
    return s;
  };
}

}  // namespace

void register_verify(CLI::App* verify, std::vector<Command>& commands) {
  leaf(verify, commands, "exponents", "exact exponent consistency", exponents_suite);
  leaf(verify, commands, "coeffs", "lift identity and Hecke bound", coeffs_suite);
  leaf(verify, commands, "weil", "Weil bound for all S(a,b;c), c <= cmax", weil_suite);
  leaf(verify, commands, "gauss", "Gauss-sum envelope", gauss_suite);
  leaf(verify, commands, "orthogonality", "orthogonality identity and arc partition", orthogonality_suite);
  leaf(verify, commands, "hua", "Hua counts", hua_suite);
  leaf(verify, commands, "major", "major-arc approximation residuals", major_suite);
  leaf(verify, commands, "minor", "minor-arc Weyl sup scans", minor_suite);
  leaf(verify, commands, "phi", "Phi+- integrator properties", phi_suite);
  leaf(verify, commands, "cancellation", "signed vs absolute slope ordering", cancellation_suite);
}

std::vector<std::string> verify_suite_names() {
  return {"exponents", "coeffs", "weil", "gauss", "orthogonality", "hua", "major", "minor", "phi", "cancellation"};
}

}  // namespace circlelab::cli

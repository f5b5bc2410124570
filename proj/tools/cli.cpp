#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "circlelab/arcs.hpp"
#include "circlelab/coefficients.hpp"
#include "circlelab/error.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/harness.hpp"
#include "circlelab/numtheory.hpp"
#include "circlelab/theorem.hpp"
#include "circlelab/voronoi.hpp"
#include "circlelab/weight.hpp"
#include "cli_support.hpp"

namespace circlelab::cli {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json check_json(const Check& c) {
  json j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["relation"] = c.relation;
  j["limit"] = c.limit;
  j["passed"] = c.passed;
  return j;
}

Check make_check(std::string name, double value, std::string relation, double limit) {
  bool ok = false;
  if (relation == "<") ok = value < limit;
  if (relation == "<=") ok = value <= limit;
  if (relation == "==") ok = value == limit;
  if (relation == ">=") ok = value >= limit;
  if (relation == ">") ok = value > limit;
  return {std::move(name), value, limit, std::move(relation), ok};
}

coeffs::CoefficientTable acquire_table(const Context& ctx, coeffs::Backend backend, std::uint64_t n,
                                       std::optional<coeffs::TwoDimLimits> block) {
  const coeffs::Backend stored = backend == coeffs::Backend::Unit ? coeffs::Backend::Unit : coeffs::Backend::Sym2Tau;
  auto finish = [&](coeffs::CoefficientTable t) {
    return backend == coeffs::Backend::Absolute ? t.absolute() : t;
  };
  auto covers = [&](const coeffs::CoefficientTable& t) {
    if (t.backend() != stored || t.limit() < n) return false;
    if (!block) return true;
    return t.has_block() && t.block_limits().d1 >= block->d1 && t.block_limits().d2 >= block->d2;
  };
  if (!ctx.cache.empty() && std::filesystem::exists(ctx.cache)) {
    auto cached = coeffs::read_cache(ctx.cache);
    if (covers(cached)) return finish(std::move(cached));
  }
  auto table = coeffs::build_table(stored, n, block);
  if (!ctx.cache.empty()) {
    coeffs::write_cache(table, ctx.cache);
    coeffs::write_sidecar(table, 12, ctx.cache + ".json");
  }
  return finish(std::move(table));
}

namespace {

const std::vector<std::string> kBackends = {"sym2-tau", "unit", "abs-sym2-tau"};

template <typename... Parts>
std::string csv_row(const Parts&... parts) {
  std::ostringstream os;
  bool first = true;
  auto put = [&](const auto& p) {
    if (!first) os << ',';
    first = false;
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_floating_point_v<T>) {
      os << num(p);
    } else {
      os << p;
    }
  };
  (put(parts), ...);
  os << '\n';
  return os.str();
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

voronoi::Sign parse_sign(const std::string& s) {
  return s == "minus" ? voronoi::Sign::Minus : voronoi::Sign::Plus;
}

std::vector<voronoi::Sign> signs_for(const std::string& s) {
  if (s == "both") return {voronoi::Sign::Plus, voronoi::Sign::Minus};
  return {parse_sign(s)};
}

// ---- coeffs ---------------------------------------------------------------

void add_coeffs(CLI::App& app, std::vector<Command>& commands) {
  struct State {
    std::uint64_t N = 10000;
    std::string backend = "sym2-tau";
    std::uint64_t d1 = 0, d2 = 0;
    std::string hecke;
  };
  auto st = std::make_shared<State>();
  auto* sub = app.add_subcommand("coeffs", "Build a table of A(n,1) (and optionally A(d1,d2))");
  auto opts = std::make_shared<OptionSet>(sub);
  opts->add("N", st->N, "largest n")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  opts->add("backend", st->backend, "sym2-tau | unit | abs-sym2-tau")->check(CLI::IsMember(kBackends));
  opts->add("d1", st->d1, "rows of the A(d1,d2) block (0 = none)");
  opts->add("d2", st->d2, "columns of the A(d1,d2) block");
  opts->add("hecke", st->hecke, "file of 'p tau(p)' lines instead of the built-in tau")->check(CLI::ExistingFile);
  commands.push_back({"coeffs", sub, opts, [st](const Context& ctx) {
                        std::optional<coeffs::TwoDimLimits> block;
                        if (st->d1 > 0 && st->d2 > 0) block = coeffs::TwoDimLimits{st->d1, st->d2};
                        const auto backend = coeffs::backend_from_string(st->backend);
                        coeffs::CoefficientTable table =
                            st->hecke.empty()
                                ? acquire_table(ctx, backend, st->N, block)
                                : coeffs::build_table(coeffs::HeckeSource::from_file(st->hecke), st->N, block);
                        if (!st->hecke.empty() && backend == coeffs::Backend::Absolute) table = table.absolute();
                        std::string csv = "n,A_n1\n";
                        double max_prime = 0.0;
                        std::uint64_t argmax = 0;
                        for (std::uint64_t n = 1; n <= st->N; ++n) {
                          const double v = table.at(n);
                          csv += csv_row(n, v);
                          if (nt::is_prime(n) && std::fabs(v) > max_prime) {
                            max_prime = std::fabs(v);
                            argmax = n;
                          }
                        }
                        const auto ks = coeffs::kim_sarnak_diagnostic(table);
                        const auto moment = coeffs::second_moment_scan(table, {static_cast<double>(st->N)});
                        json summary;
                        summary["N"] = st->N;
                        summary["backend"] = coeffs::to_string(table.backend());
                        summary["max_abs_A_p1"] = max_prime;
                        summary["argmax_p"] = argmax;
                        summary["hecke_bound_holds"] = max_prime <= 3.0 + 1e-12;
                        summary["kim_sarnak_max_ratio"] = ks.max_ratio;
                        summary["kim_sarnak_argmax"] = ks.argmax;
                        summary["second_moment"] = moment.front().second;
                        if (table.has_block()) {
                          summary["block"] = {table.block_limits().d1, table.block_limits().d2};
                          std::string bcsv = "d1,d2,A\n";
                          for (std::uint64_t i = 1; i <= table.block_limits().d1; ++i)
                            for (std::uint64_t j = 1; j <= table.block_limits().d2; ++j)
                              bcsv += csv_row(i, j, table.at2(i, j));
                          return Outcome{{{"coeffs.json", summary}, {"coeffs.csv", csv}, {"coeffs_block.csv", bcsv}}, 0};
                        }
                        return Outcome{{{"coeffs.json", summary}, {"coeffs.csv", csv}}, 0};
                      }});
}

// ---- weyl, gauss, kloosterman, psi -----------------------------------------

void add_expsums(CLI::App& app, std::vector<Command>& commands) {
  {
    struct State {
      int r = 2;
      double X = 1e4;
      std::vector<double> alpha{0.0};
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("weyl", "Weyl sums F_r(alpha, X)");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("r", st->r, "power")->check(CLI::Range(2, 62));
    opts->add("X", st->X, "length parameter (n <= X^(1/r))")->check(CLI::PositiveNumber);
    opts->add("alpha", st->alpha, "one or more frequencies");
    commands.push_back({"weyl", sub, opts, [st](const Context&) {
                          std::string csv = "alpha,re,im,abs,trivial\n";
                          const double trivial = static_cast<double>(expsums::root_floor(st->X, st->r));
                          for (double a : st->alpha) {
                            const auto v = expsums::weyl_sum({st->r, st->X, a});
                            csv += csv_row(a, v.real(), v.imag(), std::abs(v), trivial);
                          }
                          return Outcome{{{"weyl.csv", csv}}, 0};
                        }});
  }
  {
    struct State {
      int r = 2;
      std::int64_t a = 1, b = 0, q = 7;
      bool scan = false;
      std::uint64_t q_max = 200;
      std::vector<int> r_list{2, 3, 4, 5};
      double ratio_limit = 10.0;
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("gauss", "Complete Gauss sums G_r(a,b;q)");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("r", st->r, "power")->check(CLI::Range(1, 62));
    opts->add("a", st->a, "coefficient of x^r");
    opts->add("b", st->b, "linear coefficient");
    opts->add("q", st->q, "modulus")->check(CLI::PositiveNumber);
    opts->flag("scan", st->scan, "scan every q <= q-max with (a,q)=1, b=0");
    opts->add("q-max", st->q_max, "largest modulus in a scan");
    opts->add("r-list", st->r_list, "powers in a scan");
    opts->add("ratio-limit", st->ratio_limit, "scan violation threshold for |G|/q^(1-1/r)");
    commands.push_back({"gauss", sub, opts, [st](const Context& ctx) {
                          if (st->scan) {
                            const auto s = expsums::gauss_envelope_scan(st->r_list, st->q_max, st->ratio_limit,
                                                                        ctx.workers);
                            json j{{"max_ratio", s.max_ratio}, {"violations", s.violations}};
                            return Outcome{{{"gauss_scan.json", j}, {"gauss_scan.csv", expsums::scan_csv(s.worst_per_modulus)}},
                                           0};
                          }
                          const auto g = expsums::gauss_sum(st->r, st->a, st->b, st->q);
                          json j = complex_json(g.value);
                          j["bound"] = g.bound;
                          j["ratio"] = std::abs(g.value) / g.bound;
                          return Outcome{{{"gauss.json", j}}, 0};
                        }});
  }
  {
    struct State {
      std::int64_t a = 1, b = 1, c = 7;
      bool scan = false;
      std::uint64_t c_max = 100;
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("kloosterman", "Kloosterman sums S(a,b;c)");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("a", st->a, "first argument");
    opts->add("b", st->b, "second argument");
    opts->add("c", st->c, "modulus")->check(CLI::PositiveNumber);
    opts->flag("scan", st->scan, "Weil-bound scan over all c <= c-max and all a, b");
    opts->add("c-max", st->c_max, "largest modulus in a scan");
    commands.push_back({"kloosterman", sub, opts, [st](const Context& ctx) {
                          if (st->scan) {
                            const auto s = expsums::weil_scan(st->c_max, ctx.workers);
                            json j{{"max_ratio", s.max_ratio}, {"violations", s.violations}, {"max_imag", s.max_imag}};
                            return Outcome{{{"weil_scan.json", j}, {"weil_scan.csv", expsums::scan_csv(s.worst_per_modulus)}},
                                           0};
                          }
                          const auto k = expsums::kloosterman(st->a, st->b, st->c);
                          json j = complex_json(k.value);
                          j["weil_bound"] = k.bound;
                          j["ratio"] = std::abs(k.value) / k.bound;
                          return Outcome{{{"kloosterman.json", j}}, 0};
                        }});
  }
  {
    struct State {
      int r = 2;
      double beta = 0.0, X = 1e4;
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("psi", "Oscillatory integral Psi_r(beta) over [0, X^(1/r)]");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("r", st->r, "power")->check(CLI::Range(1, 62));
    opts->add("beta", st->beta, "frequency");
    opts->add("X", st->X, "length parameter")->check(CLI::PositiveNumber);
    commands.push_back({"psi", sub, opts, [st](const Context&) {
                          const auto v = expsums::psi_r(st->r, st->beta, st->X);
                          json j = complex_json(v);
                          j["envelope_ratio"] = expsums::psi_envelope_ratio(st->r, st->beta, st->X, v);
                          return Outcome{{{"psi.json", j}}, 0};
                        }});
  }
}

// ---- phi ------------------------------------------------------------------

void add_phi(CLI::App& app, std::vector<Command>& commands) {
  struct State {
    std::vector<double> x{1e-3};
    double X = 1000.0, beta = 0.0, Delta = 2.0;
    std::optional<double> sigma;
    std::string alpha_spec = "0.4";
    std::string sign = "both";
  };
  auto st = std::make_shared<State>();
  auto* sub = app.add_subcommand("phi", "Mellin-Barnes transforms Phi+-(x)");
  auto opts = std::make_shared<OptionSet>(sub);
  opts->add("x", st->x, "evaluation points");
  opts->add("X", st->X, "scale of the test function")->check(CLI::PositiveNumber);
  opts->add("beta", st->beta, "modulation frequency");
  opts->add("Delta", st->Delta, "weight sharpness")->check(CLI::Range(1.0, 1e6));
  // Optional, so it is echoed by the dispatcher only when given.
  sub->add_option("--sigma", st->sigma, "contour abscissa (default: floor + 3/4)");
  opts->add("alpha-spec", st->alpha_spec, "'t' (tempered it,0,-it) or 'a1,a2,a3'");
  opts->add("sign", st->sign, "plus | minus | both")->check(CLI::IsMember({"plus", "minus", "both"}));
  commands.push_back({"phi", sub, opts, [st](const Context&) {
                        const auto params = voronoi::LanglandsParams::parse(st->alpha_spec);
                        const voronoi::PhiSpec spec{weight::WeightFunction(st->Delta), st->X, st->beta};
                        const voronoi::PhiTransform phi(spec, params, st->sigma);
                        const auto rp = voronoi::PhiRegimeParams::from_spec(spec);
                        std::string csv = "x,sign,re,im,error_estimate,regime,envelope_ratio\n";
                        for (double x : st->x) {
                          for (auto s : signs_for(st->sign)) {
                            const auto v = phi(x, s);
                            csv += csv_row(x, voronoi::to_string(s), v.value.real(), v.value.imag(), v.error_estimate,
                                           voronoi::phi_regime(x, rp),
                                           std::abs(v.value) / voronoi::phi_envelope(x, rp));
                          }
                        }
                        json j{{"sigma", phi.sigma()}, {"T", phi.T()}, {"R", rp.R}, {"Z", rp.Z}};
                        return Outcome{{{"phi.json", j}, {"phi.csv", csv}}, 0};
                      }});
}

// ---- arcs -----------------------------------------------------------------

void add_arcs(CLI::App& app, std::vector<Command>& commands) {
  struct State {
    double X = 1e4, theta = 0.25;
  };
  auto st = std::make_shared<State>();
  auto* sub = app.add_subcommand("arcs", "Major-arc list for P = X^theta, Q = X^(1-theta)");
  auto opts = std::make_shared<OptionSet>(sub);
  opts->add("X", st->X, "scale")->check(CLI::PositiveNumber);
  opts->add("theta", st->theta, "arc exponent")->check(CLI::Range(0.0, 0.5));
  commands.push_back({"arcs", sub, opts, [st](const Context&) {
                        const auto d = arcs::build_arcs(st->X, st->theta);
                        std::string csv = "a,q,left,right,width\n";
                        for (const auto& a : d.arcs()) csv += csv_row(a.a, a.q, a.left, a.right, a.width());
                        json j{{"P", d.P()},
                               {"Q", d.Q()},
                               {"max_denominator", d.max_denominator()},
                               {"arc_count", d.arcs().size()},
                               {"major_measure", d.major_measure()},
                               {"minor_measure", d.minor_measure()}};
                        return Outcome{{{"arcs.json", j}, {"arcs.csv", csv}}, 0};
                      }});
}

// ---- exponents --------------------------------------------------------------

void add_exponents(CLI::App& app, std::vector<Command>& commands) {
  struct State {
    int r = 2, s = 2, ell = 2;
    std::string delta = "0";
  };
  auto st = std::make_shared<State>();
  auto* sub = app.add_subcommand("exponents", "Exact exponents of the smoothed-sum bound");
  auto opts = std::make_shared<OptionSet>(sub);
  opts->add("r", st->r, "power of the first l variables");
  opts->add("s", st->s, "power of the last variable");
  opts->add("ell", st->ell, "number of r-th powers");
  opts->add("delta", st->delta, "Delta = X^delta, as p/q or decimal");
  commands.push_back({"exponents", sub, opts, [st](const Context&) {
                        const theorem::ProblemShape shape{st->r, st->s, st->ell, theorem::parse_rational(st->delta)};
                        const auto rep = theorem::evaluate_theorem(shape);
                        json j{{"theta0", theorem::to_string(rep.theta0)},
                               {"trivial", theorem::to_string(rep.trivial_exp)},
                               {"main", theorem::to_string(rep.main_exp)},
                               {"remainder", theorem::to_string(rep.remainder_exp)},
                               {"case", theorem::to_string(rep.case_tag)},
                               {"final", theorem::to_string(rep.final_exp)},
                               {"nontrivial", rep.nontrivial}};
                        return Outcome{{{"exponents.json", j}}, 0};
                      }});
}

// ---- sum, fit ---------------------------------------------------------------

void add_sum_fit(CLI::App& app, std::vector<Command>& commands) {
  {
    struct State {
      int r = 2, s = 2, ell = 2;
      double X = 500.0, Delta = 2.0;
      std::string backend = "sym2-tau";
      std::string route = "enumerate";
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("sum", "Smoothed sum S(X) over n = n1^r+...+nl^r+m^s");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("r", st->r, "power")->check(CLI::Range(2, 62));
    opts->add("s", st->s, "last power")->check(CLI::Range(2, 62));
    opts->add("ell", st->ell, "number of r-th powers")->check(CLI::Range(1, 64));
    opts->add("X", st->X, "scale")->check(CLI::Range(1.0, 1e7));
    opts->add("Delta", st->Delta, "weight sharpness")->check(CLI::Range(1.0, 1e6));
    opts->add("backend", st->backend, "coefficient backend")->check(CLI::IsMember(kBackends));
    opts->add("route", st->route, "enumerate | table")->check(CLI::IsMember({"enumerate", "table"}));
    commands.push_back({"sum", sub, opts, [st](const Context& ctx) {
                          const harness::SumShape shape{st->r, st->s, st->ell};
                          const auto table = acquire_table(ctx, coeffs::backend_from_string(st->backend),
                                                           static_cast<std::uint64_t>(std::floor(2.0 * st->X)));
                          const auto reps = st->route == "enumerate" ? harness::enumerate_reps(shape, st->X, ctx.workers)
                                                                     : harness::RepCountTable(shape, st->X);
                          json j = complex_json(harness::sum_from_reps(reps, st->Delta, table));
                          j["representations"] = reps.total();
                          j["enumeration_cost"] = harness::enumeration_cost(shape, st->X);
                          return Outcome{{{"sum.json", j}}, 0};
                        }});
  }
  {
    struct State {
      int r = 2, s = 2, ell = 2;
      double delta = 0.0;
      double X_min = 100.0, X_max = 1e5, ratio = 3.1622776601683795;
      std::string backend = "sym2-tau";
    };
    auto st = std::make_shared<State>();
    auto* sub = app.add_subcommand("fit", "Least-squares slope of log|S(X)| on a geometric grid");
    auto opts = std::make_shared<OptionSet>(sub);
    opts->add("r", st->r, "power")->check(CLI::Range(2, 62));
    opts->add("s", st->s, "last power")->check(CLI::Range(2, 62));
    opts->add("ell", st->ell, "number of r-th powers")->check(CLI::Range(1, 64));
    opts->add("delta", st->delta, "Delta = 2 X^delta")->check(CLI::Range(0.0, 1.0));
    opts->add("X-min", st->X_min, "first grid point")->check(CLI::Range(1.0, 1e7));
    opts->add("X-max", st->X_max, "last grid point")->check(CLI::Range(1.0, 1e7));
    opts->add("ratio", st->ratio, "grid ratio (>= 2)");
    opts->add("backend", st->backend, "coefficient backend")->check(CLI::IsMember(kBackends));
    commands.push_back({"fit", sub, opts, [st](const Context& ctx) {
                          const auto grid = harness::geometric_grid(st->X_min, st->X_max, st->ratio);
                          const auto table = acquire_table(ctx, coeffs::backend_from_string(st->backend),
                                                           static_cast<std::uint64_t>(std::floor(2.0 * grid.back())));
                          const auto fit = harness::slope_fit({st->r, st->s, st->ell}, st->delta, grid, table);
                          std::string csv = "X,abs_S\n";
                          for (std::size_t i = 0; i < grid.size(); ++i) csv += csv_row(grid[i], fit.values[i]);
                          json j{{"slope", fit.slope},
                                 {"intercept", fit.intercept},
                                 {"residual", fit.residual},
                                 {"trivial_exp", fit.trivial_exp},
                                 {"final_exp", fit.final_exp}};
                          return Outcome{{{"fit.json", j}, {"fit.csv", csv}}, 0};
                        }});
  }
}

// ---- plot -----------------------------------------------------------------

const char* kPlotScript = R"(import csv, sys
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "plot.csv"
with open(path) as f:
    rows = [r for r in csv.reader(line for line in f if not line.startswith("#"))]
header, data = rows[0], rows[1:]
x = [float(r[0]) for r in data]
fig, ax = plt.subplots()
for k in range(1, len(header)):
    ax.plot(x, [float(r[k]) for r in data], label=header[k])
ax.set_xlabel(header[0])
ax.legend()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
)";

void add_plot(CLI::App& app, std::vector<Command>& commands) {
  auto* plot = app.add_subcommand("plot", "Plot data (CSV) for inspection");
  plot->require_subcommand(1);
  auto register_leaf = [&](const std::string& name, const std::string& desc, auto setup) {
    auto* sub = plot->add_subcommand(name, desc);
    auto opts = std::make_shared<OptionSet>(sub);
    auto script = std::make_shared<bool>(false);
    opts->flag("script", *script, "also emit a matplotlib script");
    auto body = setup(*opts);
    commands.push_back({"plot " + name, sub, opts, [body, script, name](const Context& ctx) {
                          Outcome o{{{"plot_" + name + ".csv", body(ctx)}}, 0};
                          if (*script) o.artifacts.push_back({"plot_" + name + ".py", std::string(kPlotScript)});
                          return o;
                        }});
  };
  register_leaf("weight", "omega(x) on [1, 2]", [](OptionSet& o) {
    auto st = std::make_shared<std::pair<double, int>>(2.0, 401);
    o.add("Delta", st->first, "sharpness");
    o.add("points", st->second, "sample count")->check(CLI::Range(2, 1000000));
    return std::function<std::string(const Context&)>([st](const Context&) {
      const weight::WeightFunction w(st->first);
      std::string csv = "x,omega\n";
      for (int i = 0; i < st->second; ++i) {
        const double x = 1.0 + static_cast<double>(i) / (st->second - 1);
        csv += csv_row(x, w(x));
      }
      return csv;
    });
  });
  register_leaf("weyl", "|F_r(alpha, X)| on [0, 1)", [](OptionSet& o) {
    struct S {
      int r = 2;
      double X = 1e4;
      int points = 2000;
    };
    auto st = std::make_shared<S>();
    o.add("r", st->r, "power")->check(CLI::Range(2, 62));
    o.add("X", st->X, "scale")->check(CLI::PositiveNumber);
    o.add("points", st->points, "sample count")->check(CLI::Range(2, 10000000));
    return std::function<std::string(const Context&)>([st](const Context&) {
      std::string csv = "alpha,abs_F\n";
      for (int i = 0; i < st->points; ++i) {
        const double a = static_cast<double>(i) / st->points;
        csv += csv_row(a, std::abs(expsums::weyl_sum({st->r, st->X, a})));
      }
      return csv;
    });
  });
  register_leaf("phi", "|Phi+-(x)| over a log-spaced xX sweep", [](OptionSet& o) {
    struct S {
      double X = 1000.0, beta = 0.0, Delta = 2.0, xX_min = 0.1, xX_max = 1e4;
      int points = 60;
      std::string alpha_spec = "0.4";
    };
    auto st = std::make_shared<S>();
    o.add("X", st->X, "scale")->check(CLI::PositiveNumber);
    o.add("beta", st->beta, "modulation");
    o.add("Delta", st->Delta, "sharpness");
    o.add("xX-min", st->xX_min, "sweep start")->check(CLI::PositiveNumber);
    o.add("xX-max", st->xX_max, "sweep end")->check(CLI::PositiveNumber);
    o.add("points", st->points, "sample count")->check(CLI::Range(2, 100000));
    o.add("alpha-spec", st->alpha_spec, "Langlands parameters");
    return std::function<std::string(const Context&)>([st](const Context&) {
      const voronoi::PhiSpec spec{weight::WeightFunction(st->Delta), st->X, st->beta};
      const voronoi::PhiTransform phi(spec, voronoi::LanglandsParams::parse(st->alpha_spec));
      std::string csv = "xX,abs_phi_plus,abs_phi_minus\n";
      for (int i = 0; i < st->points; ++i) {
        const double xX = st->xX_min * std::pow(st->xX_max / st->xX_min, static_cast<double>(i) / (st->points - 1));
        csv += csv_row(xX, std::abs(phi(xX / st->X, voronoi::Sign::Plus).value),
                       std::abs(phi(xX / st->X, voronoi::Sign::Minus).value));
      }
      return csv;
    });
  });
  register_leaf("moment", "Second moment sum |A(n,1)|^2 / x", [](OptionSet& o) {
    auto st = std::make_shared<std::pair<std::uint64_t, int>>(100000, 50);
    o.add("N", st->first, "largest x")->check(CLI::Range(std::uint64_t{10}, std::uint64_t{100000000}));
    o.add("points", st->second, "grid size")->check(CLI::Range(2, 10000));
    return std::function<std::string(const Context&)>([st](const Context& ctx) {
      const auto table = acquire_table(ctx, coeffs::Backend::Sym2Tau, st->first);
      std::vector<double> grid;
      for (int i = 0; i < st->second; ++i) {
        grid.push_back(std::floor(10.0 * std::pow(static_cast<double>(st->first) / 10.0,
                                                  static_cast<double>(i) / (st->second - 1))));
      }
      std::string csv = "x,moment\n";
      for (const auto& [x, m] : coeffs::second_moment_scan(table, grid)) csv += csv_row(x, m);
      return csv;
    });
  });
  register_leaf("hua", "Hua counts and normalized ratios", [](OptionSet& o) {
    struct S {
      int r = 2;
      std::vector<double> grid{1e2, 1e3, 1e4, 1e5};
    };
    auto st = std::make_shared<S>();
    o.add("r", st->r, "power (2 or 3)");
    o.add("grid", st->grid, "X values");
    return std::function<std::string(const Context&)>([st](const Context&) {
      std::string csv = "X,count,ratio\n";
      for (const auto& row : harness::hua_grid(st->r, st->grid)) csv += csv_row(row.X, row.count, row.ratio);
      return csv;
    });
  });
}

// ---- plumbing -------------------------------------------------------------

std::string render(const Artifact& a, const json& config) {
  if (const auto* j = std::get_if<json>(&a.body)) {
    json doc = json::object();
    doc["config"] = config;
    for (auto it = j->begin(); it != j->end(); ++it) doc[it.key()] = it.value();
    return doc.dump(2) + "\n";
  }
  const auto& text = std::get<std::string>(a.body);
  if (a.name.size() > 4 && a.name.substr(a.name.size() - 4) == ".csv") {
    return "# circlelab csv v" + std::to_string(kCsvVersion) + "\n# config " + config.dump() + "\n" + text;
  }
  return text;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (!text.empty() && text[0] == '#') {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("# config ", 0) == 0) return json::parse(line.substr(9));
    }
    throw Error(ErrorCode::InvalidArgument, "no config line in " + path);
  }
  json doc = json::parse(text);
  return doc.contains("config") ? doc["config"] : doc;
}

std::string arg_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return num(v.get<double>());
  return v.dump();
}

std::vector<std::string> config_to_args(const json& config) {
  std::vector<std::string> args;
  const auto& g = config.at("global");
  args.push_back("--workers");
  args.push_back(arg_text(g.at("workers")));
  args.push_back("--seed");
  args.push_back(arg_text(g.at("seed")));
  if (g.contains("cache") && !g.at("cache").get<std::string>().empty()) {
    args.push_back("--cache");
    args.push_back(g.at("cache").get<std::string>());
  }
  std::istringstream path(config.at("command").get<std::string>());
  for (std::string part; path >> part;) args.push_back(part);
  for (auto it = config.at("options").begin(); it != config.at("options").end(); ++it) {
    const auto& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + it.key());
      continue;
    }
    if (v.is_null()) continue;
    args.push_back("--" + it.key());
    if (v.is_array()) {
      for (const auto& e : v) args.push_back(arg_text(e));
    } else {
      args.push_back(arg_text(v));
    }
  }
  return args;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::string replay;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    if (raw_args[i] == "--config" && i + 1 < raw_args.size()) {
      replay = raw_args[++i];
    } else {
      args.push_back(raw_args[i]);
    }
  }
  if (!replay.empty()) {
    try {
      const auto extra = config_to_args(load_config(replay));
      args.insert(args.end(), extra.begin(), extra.end());
    } catch (const std::exception& e) {
      err << "config error: " << e.what() << "\n";
      return kExitValidation;
    }
  }

  CLI::App app{"circlelab: circle-method exponential-sum laboratory", "circlelab"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  std::string out_dir;
  app.add_option("--out", out_dir, "directory for artifacts (default: print to stdout)");
  app.add_option("--workers", ctx.workers, "worker threads")->check(CLI::Range(1U, 256U));
  app.add_option("--seed", ctx.seed, "RNG seed");
  app.add_option("--cache", ctx.cache, "coefficient cache file (CIRCLELAB_CACHE overrides)");
  app.add_option("--config", replay, "re-run the config echoed in an artifact");

  std::vector<Command> commands;
  add_coeffs(app, commands);
  add_expsums(app, commands);
  add_phi(app, commands);
  add_arcs(app, commands);
  add_exponents(app, commands);
  add_sum_fit(app, commands);
  auto* verify = app.add_subcommand("verify", "Run a verification suite (exit 3 on a failed assertion)");
  verify->require_subcommand(1);
  register_verify(verify, commands);
  add_plot(app, commands);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitValidation;
  }
  if (const char* env = std::getenv("CIRCLELAB_CACHE"); env != nullptr && *env != '\0') ctx.cache = env;

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed() && (chosen == nullptr || c.path.size() > chosen->path.size())) chosen = &c;
  }
  if (chosen == nullptr) {
    err << app.help();
    return kExitValidation;
  }
  json config;
  config["command"] = chosen->path;
  config["global"] = {{"workers", ctx.workers}, {"seed", ctx.seed}, {"cache", ctx.cache}};
  config["options"] = chosen->options->echo();
  if (auto* sigma = chosen->app->get_option_no_throw("--sigma"); sigma != nullptr && sigma->count() > 0) {
    config["options"]["sigma"] = std::stod(sigma->results().front());
  }

  Outcome outcome;
  try {
    outcome = chosen->run(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (out_dir.empty()) {
    for (const auto& a : outcome.artifacts) out << render(a, config);
  } else {
    std::filesystem::create_directories(out_dir);
    for (const auto& a : outcome.artifacts) {
      const auto path = std::filesystem::path(out_dir) / a.name;
      std::ofstream f(path, std::ios::binary);
      f << render(a, config);
      if (!f) {
        err << "error: cannot write " << path.string() << "\n";
        return 1;
      }
      out << path.string() << "\n";
    }
  }
  return outcome.exit_code;
}

}  // namespace circlelab::cli

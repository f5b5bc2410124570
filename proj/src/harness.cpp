#include "circlelab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "circlelab/arcs.hpp"
#include "circlelab/error.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/numtheory.hpp"
#include "circlelab/parallel.hpp"
#include "circlelab/phase.hpp"
#include "circlelab/summation.hpp"
#include "circlelab/theorem.hpp"
#include "circlelab/weight.hpp"

namespace circlelab::harness {

namespace {

void check_shape(const SumShape& shape) {
  if (shape.r < 2 || shape.s < 2 || shape.ell < 1) {
    throw Error(ErrorCode::InvalidArgument, "shape needs r, s >= 2 and ell >= 1");
  }
}

std::uint64_t sum_limit(double X) {
  if (!(X >= 1.0)) throw Error(ErrorCode::InvalidArgument, "X must be >= 1");
  return static_cast<std::uint64_t>(std::floor(2.0 * X));
}

std::vector<std::uint64_t> powers_up_to(int k, std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1;; ++n) {
    std::uint64_t p = 1;
    bool over = false;
    for (int i = 0; i < k && !over; ++i) {
      if (p > limit / n) over = true;
      p *= n;
    }
    if (over || p > limit) break;
    out.push_back(p);
  }
  return out;
}

}  // namespace

RepCountTable::RepCountTable(const SumShape& shape, double X) : shape_(shape), X_(X) {
  check_shape(shape);
  const std::uint64_t limit = sum_limit(X);
  const auto pr = powers_up_to(shape.r, limit);
  const auto ps = powers_up_to(shape.s, limit);
  std::vector<std::uint64_t> cur(limit + 1, 0);
  for (auto p : ps) ++cur[p];
  for (int i = 0; i < shape.ell; ++i) {
    std::vector<std::uint64_t> next(limit + 1, 0);
    for (std::uint64_t n = 0; n <= limit; ++n) {
      if (cur[n] == 0) continue;
      for (auto p : pr) {
        if (n + p > limit) break;
        next[n + p] += cur[n];
      }
    }
    cur.swap(next);
  }
  counts_ = std::move(cur);
}

RepCountTable RepCountTable::from_counts(const SumShape& shape, double X, std::vector<std::uint64_t> counts) {
  check_shape(shape);
  if (counts.size() != sum_limit(X) + 1) throw Error(ErrorCode::InvalidArgument, "count vector has the wrong length");
  RepCountTable t;
  t.shape_ = shape;
  t.X_ = X;
  t.counts_ = std::move(counts);
  return t;
}

std::uint64_t RepCountTable::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

double enumeration_cost(const SumShape& shape, double X) {
  check_shape(shape);
  const double nr = static_cast<double>(expsums::root_floor(2.0 * X, shape.r));
  const double ns = static_cast<double>(expsums::root_floor(2.0 * X, shape.s));
  return std::pow(nr, shape.ell) * ns;
}

RepCountTable enumerate_reps(const SumShape& shape, double X, unsigned workers) {
  const double cost = enumeration_cost(shape, X);
  if (cost > kEnumerationBudget) {
    throw Error(ErrorCode::BudgetExceeded, "enumeration needs ~" + std::to_string(cost) + " steps");
  }
  const std::uint64_t limit = sum_limit(X);
  const auto pr = powers_up_to(shape.r, limit);
  const auto ps = powers_up_to(shape.s, limit);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(pr.size(), 1))));

  auto chunk = [&](std::size_t w) {
    std::vector<std::uint64_t> hist(limit + 1, 0);
    // Depth-first over n₁ (this worker's stride), n₂, …, n_ℓ, then n_{ℓ+1}.
    auto descend = [&](auto&& self, int depth, std::uint64_t acc) -> void {
      if (depth == shape.ell) {
        for (auto p : ps) {
          if (acc + p > limit) break;
          ++hist[acc + p];
        }
        return;
      }
      const std::size_t start = depth == 0 ? w : 0;
      const std::size_t stride = depth == 0 ? workers : 1;
      for (std::size_t i = start; i < pr.size(); i += stride) {
        if (acc + pr[i] > limit) break;
        self(self, depth + 1, acc + pr[i]);
      }
    };
    descend(descend, 0, 0);
    return hist;
  };
  const auto parts = ordered_map(workers, workers, chunk);
  std::vector<std::uint64_t> counts(limit + 1, 0);
  for (const auto& h : parts) {
    for (std::uint64_t n = 0; n <= limit; ++n) counts[n] += h[n];
  }
  return RepCountTable::from_counts(shape, X, std::move(counts));
}

std::complex<double> sum_from_reps(const RepCountTable& reps, double Delta, const coeffs::CoefficientTable& table) {
  const double X = reps.X();
  const std::uint64_t hi = reps.limit();
  if (hi > table.limit()) {
    throw Error(ErrorCode::TableTooSmall,
                "table limit " + std::to_string(table.limit()) + " below 2X = " + std::to_string(hi));
  }
  const weight::WeightFunction w(Delta);
  const auto lo = static_cast<std::uint64_t>(std::ceil(X));
  NeumaierSum sum;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const std::uint64_t c = reps.rep(n);
    if (c == 0) continue;
    const double wn = w(static_cast<double>(n) / X);
    if (wn == 0.0) continue;
    sum.add(static_cast<double>(c) * table.at(n) * wn);
  }
  return {sum.value(), 0.0};
}

std::complex<double> brute_sum_S(const SumShape& shape, double X, double Delta, const coeffs::CoefficientTable& table,
                                 unsigned workers) {
  if (sum_limit(X) > table.limit()) {
    throw Error(ErrorCode::TableTooSmall, "table limit " + std::to_string(table.limit()) + " below 2X");
  }
  return sum_from_reps(enumerate_reps(shape, X, workers), Delta, table);
}

OrthogonalityReport orthogonality_check(const SumShape& shape, double X, double Delta,
                                        const coeffs::CoefficientTable& table, std::uint64_t nodes, double theta) {
  check_shape(shape);
  if (X > 2000.0) throw Error(ErrorCode::BudgetExceeded, "orthogonality check limited to X <= 2000");
  if (nodes < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 nodes");
  const std::uint64_t limit = sum_limit(X);
  if (limit > table.limit()) throw Error(ErrorCode::TableTooSmall, "table limit below 2X");

  OrthogonalityReport rep;
  rep.nodes = nodes;
  rep.theta = theta;
  rep.lhs = brute_sum_S(shape, X, Delta, table);

  const RootsOfUnity roots(nodes);
  const auto pr = powers_up_to(shape.r, limit);
  const auto ps = powers_up_to(shape.s, limit);
  std::vector<std::uint64_t> pr_mod(pr.size()), ps_mod(ps.size());
  for (std::size_t i = 0; i < pr.size(); ++i) pr_mod[i] = pr[i] % nodes;
  for (std::size_t i = 0; i < ps.size(); ++i) ps_mod[i] = ps[i] % nodes;
  const weight::WeightFunction w(Delta);
  std::vector<std::pair<std::uint64_t, double>> g_terms;
  for (auto n = static_cast<std::uint64_t>(std::ceil(X)); n <= limit; ++n) {
    const double c = table.at(n) * w(static_cast<double>(n) / X);
    if (c != 0.0) g_terms.emplace_back(n % nodes, c);
  }

  // Integrand at α = sign·k/N.
  auto integrand = [&](std::uint64_t k, bool reflect) {
    auto idx = [&](std::uint64_t m) {
      const std::uint64_t j = nt::mulmod(k, m, nodes);
      return reflect ? (nodes - j) % nodes : j;
    };
    ComplexNeumaierSum fr, fs, g;
    for (auto m : pr_mod) fr.add(roots[idx(m)]);
    for (auto m : ps_mod) fs.add(roots[idx(m)]);
    for (const auto& [m, c] : g_terms) g.add(c * roots[(nodes - idx(m)) % nodes]);
    return std::pow(fr.value(), shape.ell) * fs.value() * g.value();
  };

  const arcs::ArcDecomposition arcs(X, theta);
  ComplexNeumaierSum full, reflected, major, minor;
  for (std::uint64_t k = 0; k < nodes; ++k) {
    const std::complex<double> v = integrand(k, false);
    full.add(v);
    reflected.add(integrand(k, true));
    const double alpha = arcs.reduce_to_window(static_cast<double>(k) / static_cast<double>(nodes));
    if (std::holds_alternative<arcs::Major>(arcs.classify(alpha))) {
      major.add(v);
    } else {
      minor.add(v);
    }
  }
  const double inv = 1.0 / static_cast<double>(nodes);
  rep.rhs = full.value() * inv;
  rep.rhs_reflected = reflected.value() * inv;
  rep.major = major.value() * inv;
  rep.minor = minor.value() * inv;
  rep.gap = std::abs(rep.lhs - rep.rhs) / std::abs(rep.lhs);
  rep.partition_gap = std::abs(rep.major + rep.minor - rep.rhs) / std::abs(rep.rhs);
  return rep;
}

std::uint64_t hua_count(int r, double X) {
  if (r >= 4) throw Error(ErrorCode::BudgetExceeded, "Hua counts only for r in {2, 3}");
  if (r < 2) throw Error(ErrorCode::InvalidArgument, "Hua counts need r >= 2");
  const std::uint64_t n = expsums::root_floor(X, r);
  const int half = 1 << (r - 1);
  std::vector<std::uint64_t> powers;
  for (std::uint64_t m = 1; m <= n; ++m) {
    std::uint64_t p = 1;
    for (int i = 0; i < r; ++i) p *= m;
    powers.push_back(p);
  }
  std::unordered_map<std::uint64_t, std::uint64_t> sums{{0, 1}};
  for (int i = 0; i < half; ++i) {
    std::unordered_map<std::uint64_t, std::uint64_t> next;
    next.reserve(sums.size() * powers.size());
    for (const auto& [v, c] : sums) {
      for (auto p : powers) next[v + p] += c;
    }
    sums.swap(next);
  }
  std::uint64_t total = 0;
  for (const auto& [v, c] : sums) total += c * c;
  return total;
}

std::vector<HuaRow> hua_grid(int r, const std::vector<double>& X_grid, double epsilon) {
  std::vector<HuaRow> rows;
  const double expo = static_cast<double>(1 << r) / r - 1.0 + epsilon;
  for (double X : X_grid) {
    const std::uint64_t c = hua_count(r, X);
    rows.push_back({X, c, static_cast<double>(c) / std::pow(X, expo)});
  }
  return rows;
}

double weyl_envelope(int k, double X, double theta) {
  const double saving = k <= 7 ? theta / std::ldexp(1.0, k - 1) : theta / (2.0 * k * (k - 1));
  return std::pow(X, 1.0 / k - saving);
}

MinorScanReport minor_sup_scan(const SumShape& shape, double X, double theta, std::uint64_t samples,
                               std::uint64_t seed) {
  check_shape(shape);
  if (samples < 1000) throw Error(ErrorCode::InvalidArgument, "minor-arc scan needs >= 1000 samples");
  const arcs::ArcDecomposition arcs(X, theta);
  const auto& majors = arcs.arcs();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto q_cap = static_cast<std::uint64_t>(std::max(1.0, std::floor(arcs.Q())));

  auto boundary_point = [&] {
    const auto& arc = majors[static_cast<std::size_t>(unit(rng) * static_cast<double>(majors.size())) % majors.size()];
    const double reach = 10.0 / (static_cast<double>(arc.q) * arcs.Q());
    const double offset = unit(rng) * reach;
    return unit(rng) < 0.5 ? arc.left - offset : arc.right + offset;
  };
  auto deep_point = [&] {
    const std::uint64_t lead = 1 + static_cast<std::uint64_t>(unit(rng) * static_cast<double>(q_cap)) % q_cap;
    double tail = 0.0;
    for (int i = 0; i < 30; ++i) tail = 1.0 / (static_cast<double>(1 + (rng() % 4)) + tail);
    return 1.0 / (static_cast<double>(lead) + tail);
  };

  MinorScanReport rep;
  rep.X = X;
  rep.theta = theta;
  rep.seed = seed;
  std::uint64_t attempts = 0;
  while (rep.samples < samples) {
    if (++attempts > 100 * samples) throw Error(ErrorCode::NonConvergence, "minor-arc sampler rejected too many points");
    double alpha = rep.samples % 2 == 0 ? boundary_point() : deep_point();
    if (alpha < arcs.window_left() || alpha > arcs.window_right()) alpha = arcs.reduce_to_window(alpha);
    if (!std::holds_alternative<arcs::Minor>(arcs.classify(alpha))) continue;
    ++rep.samples;
    const double fr = std::abs(expsums::weyl_sum({shape.r, X, alpha}));
    const double fs = std::abs(expsums::weyl_sum({shape.s, X, alpha}));
    if (fr > rep.sup_r) {
      rep.sup_r = fr;
      rep.argmax_r = alpha;
    }
    if (fs > rep.sup_s) {
      rep.sup_s = fs;
      rep.argmax_s = alpha;
    }
  }
  rep.envelope_r = weyl_envelope(shape.r, X, theta);
  rep.envelope_s = weyl_envelope(shape.s, X, theta);
  rep.ratio_r = rep.sup_r / rep.envelope_r;
  rep.ratio_s = rep.sup_s / rep.envelope_s;
  return rep;
}

MajorResidual major_approx_residual(int r, std::int64_t a, std::int64_t q, double beta, double X, double Q) {
  if (q < 1) throw Error(ErrorCode::InvalidModulus, "q must be >= 1");
  if (std::gcd(a, q) != 1) throw Error(ErrorCode::CoprimalityViolation, "gcd(a, q) != 1");
  if (Q <= 0.0) Q = std::pow(X, 1.0 - 1.0 / r);
  if (std::fabs(beta) > (1.0 + 1e-12) / (static_cast<double>(q) * Q)) {
    throw Error(ErrorCode::InvalidArgument, "|beta| exceeds 1/(qQ)");
  }
  const auto uq = static_cast<std::uint64_t>(q);
  const RootsOfUnity roots(uq);
  const FixedPhase phase(beta);
  const std::uint64_t len = expsums::root_floor(X, r);
  const std::uint64_t ua = static_cast<std::uint64_t>(nt::mod(a, q));
  ComplexNeumaierSum exact;
  for (std::uint64_t n = 1; n <= len; ++n) {
    const std::uint64_t k = nt::mulmod(ua, nt::powmod(n % uq, static_cast<std::uint64_t>(r), uq), uq);
    exact.add(roots[k] * phase.times(wrapping_pow(n, r)));
  }
  MajorResidual res;
  res.exact = exact.value();
  res.main = expsums::gauss_sum(r, a, 0, q).value / static_cast<double>(q) * expsums::psi_r(r, beta, X);
  res.residual = std::abs(res.exact - res.main);
  res.envelope_ratio = res.residual / std::sqrt(static_cast<double>(q) * (1.0 + std::fabs(beta) * X));
  return res;
}

std::vector<MajorTuple> standard_major_grid() {
  static constexpr double kX[5] = {1e4, 1e5, 1e6, 3e5, 3e4};
  static constexpr double kBeta[5] = {0.0, 0.5, -1.0, 0.25, -0.75};
  std::vector<MajorTuple> grid;
  for (int i = 0; i < 50; ++i) {
    MajorTuple t;
    t.r = 2 + i % 3;
    t.q = 1 + i % 13;
    t.X = kX[i % 5];
    t.a = 1 + (i / 3) % t.q;
    while (std::gcd(t.a, t.q) != 1) t.a = t.a % t.q + 1;
    const double Q = std::pow(t.X, 1.0 - 1.0 / t.r);
    t.beta = kBeta[(i / 5) % 5] / (static_cast<double>(t.q) * Q);
    grid.push_back(t);
  }
  return grid;
}

SlopeFit slope_fit(const SumShape& shape, double delta_exponent, const std::vector<double>& X_grid,
                   const coeffs::CoefficientTable& table) {
  if (X_grid.size() < 5) throw Error(ErrorCode::InvalidArgument, "slope fit needs >= 5 grid points");
  for (std::size_t i = 1; i < X_grid.size(); ++i) {
    if (X_grid[i] < 2.0 * X_grid[i - 1] * (1.0 - 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "slope-fit grid ratio must be >= 2");
    }
  }
  SlopeFit fit;
  fit.X_grid = X_grid;
  for (double X : X_grid) {
    const double cost = enumeration_cost(shape, X);
    if (cost > kEnumerationBudget) throw Error(ErrorCode::BudgetExceeded, "grid point beyond enumeration budget");
    const RepCountTable reps(shape, X);
    fit.values.push_back(std::abs(sum_from_reps(reps, 2.0 * std::pow(X, delta_exponent), table)));
  }
  const auto m = static_cast<double>(X_grid.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X_grid.size(); ++i) {
    const double lx = std::log(X_grid[i]), ly = std::log(fit.values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  double rss = 0;
  for (std::size_t i = 0; i < X_grid.size(); ++i) {
    const double e = std::log(fit.values[i]) - (fit.intercept + fit.slope * std::log(X_grid[i]));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / m);
  const auto report = theorem::evaluate_theorem({shape.r, shape.s, shape.ell, theorem::Rational(delta_exponent)});
  fit.trivial_exp = static_cast<double>(report.trivial_exp);
  fit.final_exp = static_cast<double>(report.final_exp);
  return fit;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(ratio > 1.0) || hi < lo) throw Error(ErrorCode::InvalidArgument, "bad geometric grid");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double x = lo * std::pow(ratio, k);
    if (x > hi * (1.0 + 1e-9)) break;
    out.push_back(x);
  }
  return out;
}

}  // namespace circlelab::harness

#include "circlelab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "circlelab/error.hpp"
#include "circlelab/numtheory.hpp"
#include "circlelab/parallel.hpp"
#include "circlelab/phase.hpp"
#include "circlelab/quadrature.hpp"
#include "circlelab/summation.hpp"

namespace circlelab::expsums {

std::uint64_t root_floor(double X, int r) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "root order must be >= 1");
  if (!(X >= 1.0)) return 0;
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(X, 1.0 / r)));
  auto pow_le = [&](std::uint64_t n) {
    long double acc = 1;
    for (int i = 0; i < r; ++i) acc *= static_cast<long double>(n);
    return acc <= static_cast<long double>(X);
  };
  while (m > 0 && !pow_le(m)) --m;
  while (pow_le(m + 1)) ++m;
  return m;
}

std::complex<double> weyl_sum(const WeylSumParams& params) {
  if (params.r < 2) throw Error(ErrorCode::InvalidArgument, "Weyl sum needs r >= 2");
  if (!(params.X >= 1.0)) throw Error(ErrorCode::EmptyRange, "Weyl sum needs X >= 1");
  const std::uint64_t len = root_floor(params.X, params.r);
  const FixedPhase phase(params.alpha);
  ComplexNeumaierSum sum;
  for (std::uint64_t n = 1; n <= len; ++n) sum.add(phase.times(wrapping_pow(n, params.r)));
  return sum.value();
}

std::complex<double> coeff_sum_G(const CoeffSumParams& params) {
  if (params.table == nullptr) throw Error(ErrorCode::InvalidArgument, "coefficient sum without a table");
  if (!(params.X > 0.0)) throw Error(ErrorCode::InvalidArgument, "X must be positive");
  const auto lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(params.X)));
  const auto hi = static_cast<std::uint64_t>(std::floor(2.0 * params.X));
  if (hi > params.table->limit()) {
    throw Error(ErrorCode::TableTooSmall, "table limit " + std::to_string(params.table->limit()) +
                                              " below 2X = " + std::to_string(hi));
  }
  const FixedPhase phase(-params.alpha);
  ComplexNeumaierSum sum;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double w = params.weight(static_cast<double>(n) / params.X);
    if (w == 0.0) continue;
    sum.add(params.table->at(n) * w * phase.times(n));
  }
  return sum.value();
}

namespace {

void check_trivial_bound(const CompleteSumResult& res) {
  if (std::abs(res.value) > static_cast<double>(res.modulus) * (1.0 + 1e-9)) {
    throw Error(ErrorCode::InvalidArgument, "complete sum exceeds the trivial bound");
  }
}

std::uint64_t residue(std::int64_t a, std::uint64_t q) {
  return static_cast<std::uint64_t>(nt::mod(a, static_cast<std::int64_t>(q)));
}

std::complex<double> histogram_sum(const std::vector<std::uint64_t>& counts, const RootsOfUnity& roots) {
  ComplexNeumaierSum sum;
  for (std::uint64_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0) sum.add(static_cast<double>(counts[k]) * roots[k]);
  }
  return sum.value();
}

}  // namespace

CompleteSumResult gauss_sum(int r, std::int64_t a, std::int64_t b, std::int64_t q) {
  if (q <= 0) throw Error(ErrorCode::InvalidModulus, "Gauss sum modulus must be >= 1");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "Gauss sum exponent must be >= 1");
  const auto uq = static_cast<std::uint64_t>(q);
  const std::uint64_t ar = residue(a, uq), br = residue(b, uq);
  std::vector<std::uint64_t> counts(uq, 0);
  for (std::uint64_t x = 0; x < uq; ++x) {
    const auto xr = static_cast<nt::u128>(nt::powmod(x, static_cast<std::uint64_t>(r), uq));
    const auto k = static_cast<std::uint64_t>((ar * xr + static_cast<nt::u128>(br) * x) % uq);
    ++counts[k];
  }
  CompleteSumResult res;
  res.value = histogram_sum(counts, RootsOfUnity(uq));
  res.modulus = uq;
  const bool primitive = std::gcd(ar, uq) == 1 && br == 0;
  res.bound = primitive ? std::pow(static_cast<double>(uq), 1.0 - 1.0 / r) : static_cast<double>(uq);
  check_trivial_bound(res);
  return res;
}

double weil_envelope(std::int64_t a, std::int64_t b, std::int64_t c) {
  const auto g = std::gcd(std::gcd(std::llabs(a), std::llabs(b)), c);
  return static_cast<double>(nt::divisor_count(static_cast<std::uint64_t>(c))) *
         std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c));
}

CompleteSumResult kloosterman(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (c <= 0) throw Error(ErrorCode::InvalidModulus, "Kloosterman modulus must be >= 1");
  const auto uc = static_cast<std::uint64_t>(c);
  const std::uint64_t ar = residue(a, uc), br = residue(b, uc);
  std::vector<std::uint64_t> counts(uc, 0);
  for (std::uint64_t x = 0; x < uc; ++x) {
    if (std::gcd(x, uc) != 1) continue;
    const auto xinv = static_cast<std::uint64_t>(nt::modinv(static_cast<std::int64_t>(x), c));
    const auto k = static_cast<std::uint64_t>((static_cast<nt::u128>(ar) * xinv + static_cast<nt::u128>(br) * x) % uc);
    ++counts[k];
  }
  CompleteSumResult res;
  res.value = histogram_sum(counts, RootsOfUnity(uc));
  res.modulus = uc;
  res.bound = weil_envelope(a, b, c);
  if (std::fabs(res.value.imag()) > 1e-9 * static_cast<double>(uc)) {
    throw Error(ErrorCode::InvalidArgument, "Kloosterman sum has a non-negligible imaginary part");
  }
  check_trivial_bound(res);
  return res;
}

std::vector<std::complex<double>> gauss_sums_all_a(int r, std::uint64_t q) {
  if (q == 0) throw Error(ErrorCode::InvalidModulus, "Gauss sum modulus must be >= 1");
  // Distinct values of xʳ mod q with multiplicities.
  std::vector<std::uint32_t> mult(q, 0);
  for (std::uint64_t x = 0; x < q; ++x) ++mult[nt::powmod(x, static_cast<std::uint64_t>(r), q)];
  std::vector<std::uint32_t> res_k, res_c;
  for (std::uint64_t k = 0; k < q; ++k) {
    if (mult[k] != 0) {
      res_k.push_back(static_cast<std::uint32_t>(k));
      res_c.push_back(mult[k]);
    }
  }
  const RootsOfUnity roots(q);
  std::vector<std::complex<double>> out(q);
  // idx[i] = a·res_k[i] mod q, advanced by one step in a at a time.
  std::vector<std::uint32_t> idx(res_k.size(), 0);
  const auto uq = static_cast<std::uint32_t>(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      re += res_c[i] * roots.re(idx[i]);
      im += res_c[i] * roots.im(idx[i]);
      std::uint32_t next = idx[i] + res_k[i];
      if (next >= uq) next -= uq;
      idx[i] = next;
    }
    out[a] = {re, im};
  }
  return out;
}

std::vector<std::complex<double>> kloosterman_all(std::uint64_t c) {
  if (c == 0) throw Error(ErrorCode::InvalidModulus, "Kloosterman modulus must be >= 1");
  std::vector<std::uint32_t> units, inverses;
  for (std::uint64_t x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1 && c != 1) continue;
    units.push_back(static_cast<std::uint32_t>(x));
    inverses.push_back(static_cast<std::uint32_t>(nt::modinv(static_cast<std::int64_t>(x), static_cast<std::int64_t>(c))));
  }
  const RootsOfUnity roots(c);
  const auto uc = static_cast<std::uint32_t>(c);
  std::vector<std::complex<double>> out(c * c);
  std::vector<std::uint32_t> idx(units.size());
  for (std::uint64_t a = 1; a <= c; ++a) {
    // Start at b = 1: idx = a·x̄ + x.
    for (std::size_t i = 0; i < units.size(); ++i) {
      idx[i] = static_cast<std::uint32_t>((a % c * inverses[i] + units[i]) % c);
    }
    for (std::uint64_t b = 1; b <= c; ++b) {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        re += roots.re(idx[i]);
        im += roots.im(idx[i]);
        std::uint32_t next = idx[i] + units[i];
        if (next >= uc) next -= uc;
        idx[i] = next;
      }
      out[(a - 1) * c + (b - 1)] = {re, im};
    }
  }
  return out;
}

ScanSummary weil_scan(std::uint64_t c_max, unsigned workers) {
  auto per_c = ordered_map(c_max, workers, [](std::size_t i) {
    const std::uint64_t c = i + 1;
    const auto table = kloosterman_all(c);
    ScanSummary part;
    ScanRow worst;
    worst.ratio = -1.0;
    for (std::uint64_t a = 1; a <= c; ++a) {
      for (std::uint64_t b = 1; b <= c; ++b) {
        const auto v = table[(a - 1) * c + (b - 1)];
        const double env = weil_envelope(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                         static_cast<std::int64_t>(c));
        const double ratio = std::abs(v) / env;
        // Guard against last-bit noise when |S| equals the envelope exactly.
        if (std::abs(v) > env * (1.0 + 1e-12)) ++part.violations;
        part.max_imag = std::max(part.max_imag, std::fabs(v.imag()) / static_cast<double>(c));
        if (ratio > worst.ratio) {
          worst = ScanRow{0, static_cast<std::int64_t>(a), static_cast<std::int64_t>(b), c, v, env, ratio};
        }
      }
    }
    part.max_ratio = worst.ratio;
    part.worst_per_modulus.push_back(worst);
    return part;
  });
  ScanSummary total;
  for (auto& part : per_c) {
    total.violations += part.violations;
    total.max_ratio = std::max(total.max_ratio, part.max_ratio);
    total.max_imag = std::max(total.max_imag, part.max_imag);
    total.worst_per_modulus.push_back(part.worst_per_modulus.front());
  }
  return total;
}

ScanSummary gauss_envelope_scan(const std::vector<int>& r_values, std::uint64_t q_max, double ratio_limit,
                                unsigned workers) {
  const std::size_t jobs = r_values.size() * q_max;
  auto parts = ordered_map(jobs, workers, [&](std::size_t job) {
    const int r = r_values[job / q_max];
    const std::uint64_t q = job % q_max + 1;
    const auto sums = gauss_sums_all_a(r, q);
    const double env = std::pow(static_cast<double>(q), 1.0 - 1.0 / r);
    ScanRow worst;
    worst.ratio = -1.0;
    std::uint64_t violations = 0;
    for (std::uint64_t a = 1; a <= q; ++a) {
      const std::uint64_t ar = a % q;
      if (std::gcd(ar, q) != 1) continue;
      const auto v = sums[ar];
      const double ratio = std::abs(v) / env;
      if (ratio >= ratio_limit) ++violations;
      if (ratio > worst.ratio) worst = ScanRow{r, static_cast<std::int64_t>(a), 0, q, v, env, ratio};
    }
    return std::make_pair(worst, violations);
  });
  ScanSummary total;
  for (auto& [row, violations] : parts) {
    total.violations += violations;
    total.max_ratio = std::max(total.max_ratio, row.ratio);
    total.worst_per_modulus.push_back(row);
  }
  return total;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "r,a,b,q_or_c,re,im,modulus,envelope,ratio\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.r << ',' << row.a << ',' << row.b << ',' << row.modulus << ',' << row.value.real() << ','
        << row.value.imag() << ',' << std::abs(row.value) << ',' << row.envelope << ',' << row.ratio << '\n';
  }
  return out.str();
}

std::complex<double> psi_r(int r, double beta, double X) {
  if (r < 2) throw Error(ErrorCode::InvalidArgument, "psi_r needs r >= 2");
  if (!(X > 0.0)) throw Error(ErrorCode::InvalidArgument, "psi_r needs X > 0");
  const double upper = std::pow(X, 1.0 / r);
  if (beta == 0.0) return upper;
  const double base_width = upper / 64.0;
  const double rate = 4.0 * std::fabs(beta) * r;  // phase-rate factor: width ≤ 1/(rate·u^{r−1})
  auto width_at = [&](double u) {
    return std::min(base_width, 1.0 / (rate * std::pow(u, r - 1)));
  };
  const auto& gl = gauss_legendre16();
  auto integrand = [&](double u) { return unit_phase(beta * std::pow(u, r)); };
  ComplexNeumaierSum sum;
  double u = 0.0;
  while (u < upper) {
    double w = width_at(std::max(u, 1e-300));
    w = std::min(w, width_at(u + w));  // the rate grows with u; respect it at the right end
    const double next = std::min(upper, u + w);
    sum.add(gl.panel(integrand, u, next));
    u = next;
  }
  return sum.value();
}

double psi_envelope_ratio(int r, double beta, double X, std::complex<double> value) {
  const double env = std::pow(X / (1.0 + std::fabs(beta) * X), 1.0 / r);
  return std::abs(value) / env;
}

}  // namespace circlelab::expsums

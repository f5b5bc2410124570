#include "circlelab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <fftw3.h>

#include "circlelab/error.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/gamma.hpp"
#include "circlelab/numtheory.hpp"
#include "circlelab/parallel.hpp"
#include "circlelab/phase.hpp"
#include "circlelab/summation.hpp"

namespace circlelab::voronoi {

namespace {

constexpr double kPi = std::numbers::pi;

cplx parse_complex(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty Langlands parameter");
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw Error(ErrorCode::InvalidArgument, "bad Langlands parameter '" + text + "'");
    return v;
  };
  if (text.back() != 'i') return {number(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return number(s);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {number(body.substr(0, split)), imag_part(body.substr(split))};
}

}  // namespace

LanglandsParams::LanglandsParams(std::array<cplx, 3> alpha) : alpha_(alpha) {
  const cplx total = alpha[0] + alpha[1] + alpha[2];
  if (std::abs(total) > 1e-12) throw Error(ErrorCode::InvalidArgument, "Langlands parameters must sum to zero");
  for (const auto& a : alpha) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw Error(ErrorCode::InvalidArgument, "Langlands parameters must be finite");
    }
    if (std::fabs(a.real()) > 0.4 + 1e-15) {
      throw Error(ErrorCode::InvalidArgument, "Langlands parameter outside |Re| <= 1/2 - 1/10");
    }
  }
}

LanglandsParams LanglandsParams::tempered(double t) { return LanglandsParams({cplx(0, t), cplx(0, 0), cplx(0, -t)}); }

LanglandsParams LanglandsParams::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(item);
  if (parts.size() == 1) {
    const cplx t = parse_complex(parts[0]);
    if (t.imag() != 0.0) throw Error(ErrorCode::InvalidArgument, "tempered spectrum takes a real t");
    return tempered(t.real());
  }
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "expected 't' or 'a1,a2,a3'");
  return LanglandsParams({parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])});
}

LanglandsParams LanglandsParams::conjugate() const {
  return LanglandsParams({std::conj(alpha_[0]), std::conj(alpha_[1]), std::conj(alpha_[2])});
}

double LanglandsParams::sigma_floor() const noexcept {
  double best = -1e300;
  for (const auto& a : alpha_) best = std::max(best, -1.0 - a.real());
  return best;
}

std::string to_string(Sign s) { return s == Sign::Plus ? "+" : "-"; }

GammaProducts gamma_products(cplx s, const LanglandsParams& params) {
  cplx log_first = 0.0, log_second = 0.0;
  for (const auto& a : params.alpha()) {
    log_first += special::log_gamma((1.0 + s + a) / 2.0) + special::log_rgamma((-s - a) / 2.0);
    log_second += special::log_gamma((2.0 + s + a) / 2.0) + special::log_rgamma((1.0 - s - a) / 2.0);
  }
  const cplx log_pref = -std::log(2.0) - 3.0 * (s + 0.5) * std::log(kPi);
  return {std::exp(log_first), std::exp(log_second), std::exp(log_pref)};
}

cplx gamma_pm(cplx s, const LanglandsParams& params, Sign sign) {
  for (const auto& a : params.alpha()) {
    if (special::pole_distance((1.0 + s + a) / 2.0) < 1e-6 || special::pole_distance((2.0 + s + a) / 2.0) < 1e-6) {
      throw Error(ErrorCode::PoleProximity, "s is within 1e-6 of a gamma pole");
    }
  }
  const auto g = gamma_products(s, params);
  const cplx i(0.0, 1.0);
  return g.prefactor * (sign == Sign::Plus ? g.first - i * g.second : g.first + i * g.second);
}

PhiTransform::PhiTransform(PhiSpec spec, LanglandsParams params, std::optional<double> sigma, PhiOptions options)
    : spec_(spec), params_(params), sigma_(sigma.value_or(params.default_sigma())), options_(options) {
  if (!(spec_.X > 0.0)) throw Error(ErrorCode::InvalidArgument, "phi transform needs X > 0");
  if (!(options_.h > 0.0 && options_.h <= 0.05)) throw Error(ErrorCode::InvalidArgument, "contour step must be in (0, 0.05]");
  if (!(sigma_ > params_.sigma_floor())) {
    throw Error(ErrorCode::IllegalContour, "sigma=" + std::to_string(sigma_) + " not right of " +
                                               std::to_string(params_.sigma_floor()));
  }
  dt_ = options_.h / 2.0;
  const double bx = std::fabs(spec_.beta) * spec_.X;
  // The u-integrand oscillates at up to 4π|β|X; the grid must reach well past it.
  if (8.0 * kPi * bx + 1000.0 > options_.t_max) {
    throw Error(ErrorCode::NonConvergence, "t_max too small for |beta|X = " + std::to_string(bx));
  }
  const auto per_block = static_cast<std::int64_t>(std::llround(options_.block / dt_));
  // FFT length n with n·dt ≥ 2·t_max: the aliased copies of H sit at least t_max away.
  std::size_t n = 1;
  while (static_cast<double>(n) * dt_ < 2.0 * options_.t_max) n <<= 1U;
  const double du = 2.0 * kPi / (static_cast<double>(n) * dt_);
  const auto samples = static_cast<std::size_t>(std::floor(std::log(2.0) / du)) + 1;
  auto* buf = fftw_alloc_complex(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  for (std::size_t k = 0; k < n; ++k) {
    cplx v = 0.0;
    if (k < samples) {
      const double u = static_cast<double>(k) * du;
      const double y = std::exp(u);
      const double w = spec_.w(y);
      if (w != 0.0) v = w * unit_phase(-spec_.beta * spec_.X * y) * std::exp(-sigma_ * u);
    }
    buf[k][0] = v.real();
    buf[k][1] = v.imag();
  }
  fftw_execute(plan);
  const auto half = static_cast<std::int64_t>(std::floor(options_.t_max / dt_));
  auto sample = [&](std::int64_t j) {
    const std::size_t idx = static_cast<std::size_t>(j >= 0 ? j : static_cast<std::int64_t>(n) + j);
    return du * cplx(buf[idx][0], buf[idx][1]);
  };
  // Grow the contour one block at a time from t = 0 outwards.
  std::vector<cplx> h_pos, h_neg, f_pos, f_neg, s_pos, s_neg;
  NeumaierSum mass;
  int quiet = 0;
  std::int64_t j = 0;
  bool converged = false;
  while (j <= half && !converged) {
    NeumaierSum block_mass;
    const std::int64_t end = std::min(half, j + per_block - 1);
    for (; j <= end; ++j) {
      for (int side = 0; side < (j == 0 ? 1 : 2); ++side) {
        const std::int64_t jj = side == 0 ? j : -j;
        const auto g = gamma_products(cplx(sigma_, static_cast<double>(jj) * dt_), params_);
        const cplx hv = sample(jj);
        const cplx fv = g.prefactor * g.first, sv = g.prefactor * g.second;
        block_mass.add(std::abs(hv) * (std::abs(fv) + std::abs(sv)));
        (side == 0 ? h_pos : h_neg).push_back(hv);
        (side == 0 ? f_pos : f_neg).push_back(fv);
        (side == 0 ? s_pos : s_neg).push_back(sv);
      }
    }
    const double bm = block_mass.value() * dt_;
    mass.add(bm);
    quiet = bm < options_.tail_relative * mass.value() ? quiet + 1 : 0;
    converged = quiet >= options_.quiet_blocks;
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  if (!converged || !std::isfinite(mass.value())) {
    throw Error(ErrorCode::NonConvergence, "contour tail not negligible by |Im s| = " + std::to_string(options_.t_max));
  }
  const std::int64_t J = static_cast<std::int64_t>(h_pos.size()) - 1;
  T_ = static_cast<double>(J) * dt_;
  h_.assign(2 * J + 1, 0.0);
  first_.assign(2 * J + 1, 0.0);
  second_.assign(2 * J + 1, 0.0);
  for (std::int64_t k = 0; k <= J; ++k) {
    h_[J + k] = h_pos[k];
    first_[J + k] = f_pos[k];
    second_[J + k] = s_pos[k];
  }
  for (std::int64_t k = 1; k <= J; ++k) {
    h_[J - k] = h_neg[k - 1];
    first_[J - k] = f_neg[k - 1];
    second_[J - k] = s_neg[k - 1];
  }
}

cplx PhiTransform::mellin_at(double t) const {
  const auto J = static_cast<std::int64_t>(h_.size() / 2);
  const auto j = std::clamp<std::int64_t>(std::llround(t / dt_), -J, J);
  const cplx s(sigma_, static_cast<double>(j) * dt_);
  return std::exp(-s * std::log(spec_.X)) * h_[J + j];
}

PhiValue PhiTransform::operator()(double x, Sign sign) const {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "phi transform needs x > 0");
  const double lx = std::log(x * spec_.X);
  const auto J = static_cast<std::int64_t>(h_.size() / 2);
  const cplx i(0.0, 1.0);
  const cplx rot = sign == Sign::Plus ? -i : i;
  ComplexNeumaierSum fine, coarse;
  const double scale = std::exp(-sigma_ * lx);
  // (xX)^{−it} by a running rotation, re-anchored exactly every 256 steps.
  const cplx step = unit_phase(-dt_ * lx / (2.0 * kPi));
  cplx phase = 1.0;
  for (std::int64_t j = -J; j <= J; ++j) {
    if ((j + J) % 256 == 0) phase = unit_phase(-static_cast<double>(j) * dt_ * lx / (2.0 * kPi));
    const cplx term = phase * (first_[J + j] + rot * second_[J + j]) * h_[J + j];
    phase *= step;
    fine.add(term);
    if (j % 2 == 0) coarse.add(term);
  }
  const double norm = scale / (2.0 * kPi);
  const cplx v_fine = fine.value() * (dt_ * norm);
  const cplx v_coarse = coarse.value() * (2.0 * dt_ * norm);
  return {v_fine, std::abs(v_fine - v_coarse), sigma_, T_};
}

PhiValue phi_transform(double x, const PhiSpec& spec, const LanglandsParams& params, Sign sign,
                       std::optional<double> sigma, PhiOptions options) {
  return PhiTransform(spec, params, sigma, options)(x, sign);
}

PhiRegimeParams PhiRegimeParams::from_spec(const PhiSpec& spec) {
  const double bx = std::fabs(spec.beta) * spec.X;
  return {spec.X, spec.w.delta() + bx, 1.0 + bx};
}

int phi_regime(double x, const PhiRegimeParams& p) {
  if (x > std::pow(p.R, 3.0 + kRegimeEpsilon) / p.X) return 1;
  if (x >= 1.0 / p.X) return 2;
  return 3;
}

double phi_envelope(double x, const PhiRegimeParams& p) {
  switch (phi_regime(x, p)) {
    case 1:
      return 1.0;
    case 2:
      return std::cbrt(x * p.X) * p.Z;
    default:
      return std::sqrt(x * p.X) * p.Z * std::pow(p.R, kRegimeEpsilon);
  }
}

std::uint64_t d2_cutoff(std::uint64_t q, std::uint64_t d1, const PhiRegimeParams& p, double truncation) {
  const double q3 = std::pow(static_cast<double>(q), 3.0);
  const double bound = truncation * std::pow(p.R, 3.0 + kRegimeEpsilon) / p.X * q3 / (static_cast<double>(d1) * d1);
  return static_cast<std::uint64_t>(std::floor(bound * (1.0 + 1e-12)));
}

VoronoiRHS voronoi_rhs(std::int64_t a, std::int64_t q, const PhiSpec& spec, const coeffs::CoefficientTable& table,
                       const LanglandsParams& params, double truncation, unsigned workers) {
  if (q < 1) throw Error(ErrorCode::InvalidModulus, "Voronoi modulus must be >= 1");
  if (std::gcd(a, q) != 1) throw Error(ErrorCode::CoprimalityViolation, "Voronoi summation needs gcd(a, q) = 1");
  if (!(truncation > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation must be positive");
  const std::int64_t abar = nt::modinv(a, q);
  const auto p = PhiRegimeParams::from_spec(spec);
  const auto uq = static_cast<std::uint64_t>(q);
  std::vector<VoronoiRHSTerm> terms;
  for (std::uint64_t d1 : nt::divisors(uq)) {
    const std::uint64_t cut = d2_cutoff(uq, d1, p, truncation);
    if (cut == 0) continue;
    if (!table.has_block() || d1 > table.block_limits().d1 || cut > table.block_limits().d2) {
      throw Error(ErrorCode::TableTooSmall, "2D block must cover d1=" + std::to_string(d1) +
                                                ", d2<=" + std::to_string(cut));
    }
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      for (std::uint64_t d2 = 1; d2 <= cut; ++d2) {
        VoronoiRHSTerm term;
        term.sign = sign;
        term.d1 = d1;
        term.d2 = d2;
        term.weight = table.at2(d1, d2) / static_cast<double>(d1 * d2);
        terms.push_back(term);
      }
    }
  }
  const PhiTransform phi(spec, params);
  const double q3 = std::pow(static_cast<double>(q), 3.0);
  auto filled = ordered_map(terms.size(), workers, [&](std::size_t k) {
    VoronoiRHSTerm term = terms[k];
    const auto b = static_cast<std::int64_t>(term.d2) * static_cast<int>(term.sign);
    term.kloosterman = expsums::kloosterman(abar, b, q / static_cast<std::int64_t>(term.d1)).value.real();
    term.phi = phi(static_cast<double>(term.d1 * term.d1 * term.d2) / q3, term.sign).value;
    return term;
  });
  ComplexNeumaierSum sum;
  for (const auto& term : filled) sum.add(term.weight * term.kloosterman * term.phi);
  VoronoiRHS out;
  out.value = static_cast<double>(q) * sum.value();
  out.term_count = filled.size();
  out.terms = std::move(filled);
  return out;
}

cplx voronoi_lhs(std::int64_t a, std::int64_t q, const PhiSpec& spec, const coeffs::CoefficientTable& table) {
  if (q < 1) throw Error(ErrorCode::InvalidModulus, "modulus must be >= 1");
  const auto lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(spec.X)));
  const auto hi = static_cast<std::uint64_t>(std::floor(2.0 * spec.X));
  if (hi > table.limit()) throw Error(ErrorCode::TableTooSmall, "table does not cover [X, 2X]");
  const auto uq = static_cast<std::uint64_t>(q);
  const RootsOfUnity roots(uq);
  const auto ar = static_cast<std::uint64_t>(nt::mod(a, q));
  ComplexNeumaierSum sum;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double w = spec.w(static_cast<double>(n) / spec.X);
    if (w == 0.0) continue;
    const auto k = static_cast<std::uint64_t>(static_cast<nt::u128>(ar) * n % uq);
    sum.add(table.at(n) * w * roots[k] * unit_phase(-spec.beta * static_cast<double>(n)));
  }
  return sum.value();
}

}  // namespace circlelab::voronoi

#include "circlelab/coefficients.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "circlelab/error.hpp"
#include "circlelab/ramanujan_tau.hpp"
#include "circlelab/summation.hpp"

namespace circlelab::coeffs {

HeckeSource::HeckeSource(int weight, std::map<std::uint64_t, nt::i128> raw_coeffs)
    : weight_(weight), raw_(std::move(raw_coeffs)) {
  if (weight < 12 || weight % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "weight must be an even integer >= 12");
  }
  const long double half_weight = (static_cast<long double>(weight) - 1.0L) / 2.0L;
  for (const auto& [p, t] : raw_) {
    if (!nt::is_prime(p)) throw Error(ErrorCode::InvalidArgument, "Hecke data at non-prime " + std::to_string(p));
    const long double lam = static_cast<long double>(t) / std::pow(static_cast<long double>(p), half_weight);
    if (std::fabs(lam) > 2.0L + 1e-12L) {
      throw Error(ErrorCode::InvalidArgument, "Deligne bound fails at p=" + std::to_string(p));
    }
    lambda_[p] = static_cast<double>(lam);
  }
  // The source "covers" primes up to the first gap in its data.
  prime_limit_ = 1;
  for (std::uint64_t p = 2;; ++p) {
    if (!nt::is_prime(p)) continue;
    if (lambda_.count(p) == 0) {
      prime_limit_ = p - 1;
      break;
    }
  }
}

HeckeSource HeckeSource::ramanujan(std::uint32_t limit) {
  const auto tau = ramanujan_tau(limit);
  std::map<std::uint64_t, nt::i128> raw;
  for (std::uint32_t p : nt::primes_up_to(limit)) raw.emplace(p, tau[p]);
  return HeckeSource(12, std::move(raw));
}

namespace {

nt::i128 parse_i128(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  nt::i128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error(ErrorCode::InvalidArgument, "bad integer '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

HeckeSource HeckeSource::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open Hecke data " + path.string());
  std::string line;
  int weight = 0;
  std::map<std::uint64_t, nt::i128> raw;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first, second;
    if (!(ls >> first)) continue;
    ls >> second;
    if (first == "weight") {
      weight = std::stoi(second);
      continue;
    }
    raw.emplace(std::stoull(first), parse_i128(second));
  }
  return HeckeSource(weight, std::move(raw));
}

nt::i128 HeckeSource::raw(std::uint64_t p) const {
  auto it = raw_.find(p);
  if (it == raw_.end()) throw Error(ErrorCode::MissingPrime, "no Hecke data at p=" + std::to_string(p));
  return it->second;
}

double HeckeSource::lambda(std::uint64_t p) const {
  auto it = lambda_.find(p);
  if (it == lambda_.end()) throw Error(ErrorCode::MissingPrime, "no Hecke data at p=" + std::to_string(p));
  return it->second;
}

double HeckeSource::lambda_prime_power(std::uint64_t p, int k) const {
  const double lp = lambda(p);
  double prev = 1.0, cur = lp;
  if (k == 0) return 1.0;
  for (int i = 1; i < k; ++i) {
    const double next = lp * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

SatakeTriple SatakeTriple::from_lambda(double lambda) {
  const double c = std::clamp(lambda / 2.0, -1.0, 1.0);
  return SatakeTriple{std::polar(1.0, 2.0 * std::acos(c))};
}

std::complex<double> complete_homogeneous(const SatakeTriple& t, int m) {
  if (m < 0) return 0.0;
  if (m == 0) return 1.0;
  // h_m(x, 1, 1/x) = Σ_{i+k ≤ m} x^{i−k}; the exponent d = i−k has
  // ⌊(m−|d|)/2⌋+1 preimages.
  const double angle = std::arg(t.a_sq);
  std::complex<double> sum = 0.0;
  for (int d = -m; d <= m; ++d) {
    const int mult = (m - std::abs(d)) / 2 + 1;
    sum += static_cast<double>(mult) * std::polar(1.0, angle * d);
  }
  return sum;
}

std::complex<double> schur_two_row(const SatakeTriple& t, int l1, int l2) {
  // det [[h_{l1}, h_{l1+1}, h_{l1+2}], [h_{l2−1}, h_{l2}, h_{l2+1}], [0, 0, 1]]
  return complete_homogeneous(t, l1) * complete_homogeneous(t, l2) -
         complete_homogeneous(t, l1 + 1) * complete_homogeneous(t, l2 - 1);
}

double coeff_prime_power(const HeckeSource& source, std::uint64_t p, int k, int j, int max_depth) {
  if (k < 0 || j < 0) throw Error(ErrorCode::InvalidArgument, "negative prime-power exponent");
  if (k + j > max_depth) {
    throw Error(ErrorCode::DepthExceeded, "k+j=" + std::to_string(k + j) + " exceeds depth cap " +
                                              std::to_string(max_depth));
  }
  if (k == 0 && j == 0) return 1.0;
  const auto triple = SatakeTriple::from_lambda(source.lambda(p));
  const std::complex<double> v = schur_two_row(triple, k + j, j);
  const double scale = std::pow(static_cast<double>(k + j + 2), 4.0);
  if (std::fabs(v.imag()) > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "Schur value not real at p=" + std::to_string(p));
  }
  return v.real();
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Sym2Tau: return "sym2-tau";
    case Backend::Unit: return "unit";
    case Backend::Absolute: return "abs-sym2-tau";
  }
  return "unknown";
}

Backend backend_from_string(const std::string& name) {
  if (name == "sym2-tau") return Backend::Sym2Tau;
  if (name == "unit") return Backend::Unit;
  if (name == "abs-sym2-tau") return Backend::Absolute;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + name + "'");
}

CoefficientTable::CoefficientTable(Backend backend, std::vector<double> a_n1,
                                   std::optional<TwoDimLimits> block_limits, std::vector<double> block)
    : backend_(backend), a_n1_(std::move(a_n1)), block_limits_(block_limits), block_(std::move(block)) {
  if (a_n1_.empty()) throw Error(ErrorCode::InvalidArgument, "coefficient table needs N >= 1");
  if (block_limits_ && block_.size() != block_limits_->d1 * block_limits_->d2) {
    throw Error(ErrorCode::InvalidArgument, "2D block size does not match its limits");
  }
}

double CoefficientTable::at(std::uint64_t n) const {
  if (n == 0 || n > a_n1_.size()) {
    throw Error(ErrorCode::TableTooSmall, "A(" + std::to_string(n) + ",1) outside table of size " +
                                              std::to_string(a_n1_.size()));
  }
  return a_n1_[n - 1];
}

double CoefficientTable::at2(std::uint64_t d1, std::uint64_t d2) const {
  if (!block_limits_ || d1 == 0 || d2 == 0 || d1 > block_limits_->d1 || d2 > block_limits_->d2) {
    throw Error(ErrorCode::TableTooSmall,
                "A(" + std::to_string(d1) + "," + std::to_string(d2) + ") outside 2D block");
  }
  return block_[(d1 - 1) * block_limits_->d2 + (d2 - 1)];
}

CoefficientTable CoefficientTable::absolute() const {
  std::vector<double> a(a_n1_.size());
  std::transform(a_n1_.begin(), a_n1_.end(), a.begin(), [](double v) { return std::fabs(v); });
  std::vector<double> b(block_.size());
  std::transform(block_.begin(), block_.end(), b.begin(), [](double v) { return std::fabs(v); });
  return CoefficientTable(Backend::Absolute, std::move(a), block_limits_, std::move(b));
}

CoefficientTable build_table(const HeckeSource& source, std::uint64_t n, std::optional<TwoDimLimits> two_dim,
                             int max_depth) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "table limit N must be >= 1");
  std::uint64_t sieve_limit = n;
  if (two_dim) sieve_limit = std::max({sieve_limit, two_dim->d1, two_dim->d2});
  if (sieve_limit > 0xFFFFFFFFULL) throw Error(ErrorCode::InvalidArgument, "table limit too large");
  if (source.prime_limit() < sieve_limit) {
    throw Error(ErrorCode::MissingPrime, "Hecke source covers primes <= " + std::to_string(source.prime_limit()) +
                                             ", table needs " + std::to_string(sieve_limit));
  }
  const nt::FactorSieve sieve(static_cast<std::uint32_t>(sieve_limit));

  // A(p^k, 1) at every prime power ≤ N, then A(n,1) = A(n/p^k,1)·A(p^k,1).
  std::vector<double> a(n + 1, 0.0);
  a[1] = 1.0;
  for (std::uint64_t m = 2; m <= n; ++m) {
    const std::uint32_t p = sieve.smallest_factor(static_cast<std::uint32_t>(m));
    std::uint64_t rest = m;
    std::uint64_t pk = 1;
    int k = 0;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
      ++k;
    }
    if (rest == 1) {
      a[m] = coeff_prime_power(source, p, k, 0, max_depth);
    } else {
      a[m] = a[rest] * a[pk];
    }
  }
  a.erase(a.begin());

  std::vector<double> block;
  if (two_dim) {
    block.assign(two_dim->d1 * two_dim->d2, 0.0);
    for (std::uint64_t d1 = 1; d1 <= two_dim->d1; ++d1) {
      const auto f1 = sieve.factorize(static_cast<std::uint32_t>(d1));
      for (std::uint64_t d2 = 1; d2 <= two_dim->d2; ++d2) {
        const auto f2 = sieve.factorize(static_cast<std::uint32_t>(d2));
        double v = 1.0;
        std::size_t i = 0, j = 0;
        while (i < f1.size() || j < f2.size()) {
          if (j == f2.size() || (i < f1.size() && f1[i].first < f2[j].first)) {
            v *= coeff_prime_power(source, f1[i].first, f1[i].second, 0, max_depth);
            ++i;
          } else if (i == f1.size() || f2[j].first < f1[i].first) {
            v *= coeff_prime_power(source, f2[j].first, 0, f2[j].second, max_depth);
            ++j;
          } else {
            v *= coeff_prime_power(source, f1[i].first, f1[i].second, f2[j].second, max_depth);
            ++i;
            ++j;
          }
        }
        block[(d1 - 1) * two_dim->d2 + (d2 - 1)] = v;
      }
    }
  }
  return CoefficientTable(Backend::Sym2Tau, std::move(a), two_dim, std::move(block));
}

CoefficientTable build_table(Backend backend, std::uint64_t n, std::optional<TwoDimLimits> two_dim) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "table limit N must be >= 1");
  if (backend == Backend::Unit) {
    std::vector<double> block;
    if (two_dim) block.assign(two_dim->d1 * two_dim->d2, 1.0);
    return CoefficientTable(Backend::Unit, std::vector<double>(n, 1.0), two_dim, std::move(block));
  }
  std::uint64_t need = n;
  if (two_dim) need = std::max({need, two_dim->d1, two_dim->d2});
  const auto source = HeckeSource::ramanujan(static_cast<std::uint32_t>(std::max<std::uint64_t>(need, 2)));
  auto table = build_table(source, n, two_dim);
  return backend == Backend::Absolute ? table.absolute() : table;
}

std::vector<std::pair<double, double>> second_moment_scan(const CoefficientTable& table,
                                                          const std::vector<double>& x_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    if (!(x >= 1.0)) throw Error(ErrorCode::InvalidArgument, "second-moment grid points must be >= 1");
    const auto upto = static_cast<std::uint64_t>(std::floor(x));
    if (upto > table.limit()) {
      throw Error(ErrorCode::TableTooSmall, "grid point " + std::to_string(x) + " exceeds table limit");
    }
    NeumaierSum sum;
    for (std::uint64_t n = 1; n <= upto; ++n) {
      const double v = table.at(n);
      sum.add(v * v);
    }
    out.emplace_back(x, sum.value() / x);
  }
  return out;
}

KimSarnakReport kim_sarnak_diagnostic(const CoefficientTable& table) {
  const nt::FactorSieve sieve(static_cast<std::uint32_t>(table.limit()));
  KimSarnakReport report;
  for (std::uint64_t n = 1; n <= table.limit(); ++n) {
    std::uint64_t tau3 = 1;
    for (auto [p, k] : sieve.factorize(static_cast<std::uint32_t>(n))) {
      tau3 *= static_cast<std::uint64_t>((k + 1) * (k + 2) / 2);
    }
    const double ratio =
        std::fabs(table.at(n)) / (std::pow(static_cast<double>(n), 5.0 / 14.0) * static_cast<double>(tau3));
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax = n;
    }
  }
  return report;
}

namespace {

constexpr char kMagic[8] = {'G', 'L', '3', 'C', 'O', 'E', 'F', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>(u & 0xFFU));
    u = static_cast<U>(u >> 8U);
  }
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw Error(ErrorCode::CorruptCache, "truncated coefficient cache");
    u = static_cast<U>(u | (static_cast<U>(static_cast<unsigned char>(c)) << (8U * i)));
  }
  return static_cast<T>(u);
}

void put_double(std::ostream& out, double v) { put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v)); }
double get_double(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_cache(const CoefficientTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write cache " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kCacheVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(table.backend()));
  put_le<std::uint64_t>(out, table.limit());
  for (double v : table.values()) put_double(out, v);
  if (table.has_block()) {
    const auto lim = table.block_limits();
    put_le<std::uint64_t>(out, lim.d1);
    put_le<std::uint64_t>(out, lim.d2);
    for (double v : table.block()) put_double(out, v);
  }
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing cache " + path.string());
}

CoefficientTable read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::CorruptCache, "cannot open cache " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw Error(ErrorCode::CorruptCache, "bad magic in " + path.string());
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCacheVersion) throw Error(ErrorCode::CorruptCache, "unsupported cache version");
  const auto tag = get_le<std::uint8_t>(in);
  if (tag < 1 || tag > 3) throw Error(ErrorCode::CorruptCache, "unknown backend tag");
  const auto n = get_le<std::uint64_t>(in);
  if (n == 0 || n > (1ULL << 32)) throw Error(ErrorCode::CorruptCache, "implausible table size");
  std::vector<double> a(n);
  for (auto& v : a) v = get_double(in);
  std::optional<TwoDimLimits> lim;
  std::vector<double> block;
  if (in.peek() != std::char_traits<char>::eof()) {
    TwoDimLimits l;
    l.d1 = get_le<std::uint64_t>(in);
    l.d2 = get_le<std::uint64_t>(in);
    if (l.d1 * l.d2 > (1ULL << 32)) throw Error(ErrorCode::CorruptCache, "implausible 2D block");
    block.resize(l.d1 * l.d2);
    for (auto& v : block) v = get_double(in);
    lim = l;
    if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::CorruptCache, "trailing bytes in cache");
  }
  return CoefficientTable(static_cast<Backend>(tag), std::move(a), lim, std::move(block));
}

void write_sidecar(const CoefficientTable& table, int weight, const std::filesystem::path& path) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  nlohmann::json j;
  j["format"] = "GL3COEF1";
  j["version"] = kCacheVersion;
  j["backend"] = to_string(table.backend());
  j["weight"] = weight;
  j["normalization"] = "lambda(p) = tau(p)/p^((weight-1)/2); A(1,1) = 1";
  j["N"] = table.limit();
  if (table.has_block()) j["block"] = {table.block_limits().d1, table.block_limits().d2};
  j["build_timestamp"] = stamp.str();
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

}  // namespace circlelab::coeffs

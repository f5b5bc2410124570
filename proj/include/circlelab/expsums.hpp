#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "circlelab/coefficients.hpp"
#include "circlelab/weight.hpp"

namespace circlelab::expsums {

struct WeylSumParams {
  int r = 2;
  double X = 1.0;
  double alpha = 0.0;
};

/// ⌊X^{1/r}⌋, exactly (largest n with n^r ≤ X).
std::uint64_t root_floor(double X, int r);

/// F_r(α, X) = Σ_{1≤n≤⌊X^{1/r}⌋} e(αnʳ). The phase αnʳ is reduced mod 1 in
/// 128-bit fixed point before exponentiation.
std::complex<double> weyl_sum(const WeylSumParams& params);

struct CoeffSumParams {
  const coeffs::CoefficientTable* table = nullptr;
  double X = 1.0;
  double alpha = 0.0;
  weight::WeightFunction weight{2.0};
};

/// G(α, X) = Σ_{X≤n≤2X} A(n,1) e(−αn) ω(n/X), ascending n.
std::complex<double> coeff_sum_G(const CoeffSumParams& params);

struct CompleteSumResult {
  std::complex<double> value;
  std::uint64_t modulus = 1;
  double bound = 0.0;  // applicable theoretical envelope
};

/// G_r(a,b;q) = Σ_{x mod q} e((axʳ+bx)/q), every term an exact e(k/q).
/// `bound` is q^{1−1/r} when (a,q)=1 and b ≡ 0, otherwise the trivial q.
CompleteSumResult gauss_sum(int r, std::int64_t a, std::int64_t b, std::int64_t q);

/// S(a,b;c) = Σ_{x mod c, (x,c)=1} e((ax̄+bx)/c); `bound` is the Weil
/// envelope τ(c)·(a,b,c)^{1/2}·c^{1/2}.
CompleteSumResult kloosterman(std::int64_t a, std::int64_t b, std::int64_t c);

double weil_envelope(std::int64_t a, std::int64_t b, std::int64_t c);

/// G_r(a,0;q) for every a in [0, q), from the histogram of xʳ mod q.
std::vector<std::complex<double>> gauss_sums_all_a(int r, std::uint64_t q);

/// S(a,b;c) for 1 ≤ a,b ≤ c, row-major in (a−1, b−1).
std::vector<std::complex<double>> kloosterman_all(std::uint64_t c);

/// Per-modulus summary of a complete-sum scan.
struct ScanRow {
  int r = 0;  // 0 for Kloosterman rows
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::uint64_t modulus = 0;
  std::complex<double> value;
  double envelope = 0.0;
  double ratio = 0.0;
};

struct ScanSummary {
  std::vector<ScanRow> worst_per_modulus;  // the row with the largest ratio for each modulus
  double max_ratio = 0.0;
  std::uint64_t violations = 0;  // rows with |value| > envelope (Weil) or ratio ≥ limit (Gauss)
  double max_imag = 0.0;         // Kloosterman only: max |Im S|/c
};

ScanSummary weil_scan(std::uint64_t c_max, unsigned workers = 1);
ScanSummary gauss_envelope_scan(const std::vector<int>& r_values, std::uint64_t q_max, double ratio_limit,
                                unsigned workers = 1);

/// CSV with header (r, a, b, q_or_c, re, im, modulus, envelope, ratio).
std::string scan_csv(const std::vector<ScanRow>& rows);

/// Ψ_r(β) = ∫₀^{X^{1/r}} e(βuʳ) du by 16-point Gauss–Legendre panels of
/// width ≤ min(1/(4|β|r u^{r−1}), X^{1/r}/64).
std::complex<double> psi_r(int r, double beta, double X);

/// |Ψ_r(β)| / (X/(1+|β|X))^{1/r}.
double psi_envelope_ratio(int r, double beta, double X, std::complex<double> value);

}  // namespace circlelab::expsums

#pragma once

#include <cstdint>
#include <vector>

#include "circlelab/numtheory.hpp"

namespace circlelab::coeffs {

/// τ(n) for 0 ≤ n ≤ limit (τ(0) = 0), from the q-expansion
/// q·∏(1−qⁿ)²⁴ = q·(Σ (−1)ᵏ(2k+1) q^{k(k+1)/2})⁸.
///
/// The eighth power is taken by three truncated squarings, each an exact
/// convolution carried out by NTT modulo five word-sized primes and lifted
/// back to signed 128-bit integers by Garner's mixed-radix reconstruction.
/// Supported for limit ≤ 10⁶ (where |τ(n)| stays below the CRT range).
std::vector<nt::i128> ramanujan_tau(std::uint32_t limit);

}  // namespace circlelab::coeffs

#pragma once

#include <cstdint>
#include <random>

#include "ietx/composition.hpp"

namespace ietx {

// Sample streams.
//
// Every sample i of a run with seed s draws from its own std::mt19937_64
// seeded with derive_seed(s, i), so results do not depend on which worker
// handles which sample or in what order. derive_seed is the SplitMix64
// finaliser applied to s + (i + 1) * 0x9e3779b97f4a7c15:
//
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   z =  z ^ (z >> 31)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

using Rng = std::mt19937_64;

// Uniform P-bit dyadic in [0, 1): ceil(P/64) engine words, most significant
// first, truncated to P bits. Rational backend gets the same dyadic exactly.
Scalar sample_unit(Rng& rng, const NumericsConfig& config);

// p/q with q uniform in [1, max_den] and p uniform in [0, q).
Scalar sample_rational_unit(Rng& rng, long max_den, const NumericsConfig& config);

// IET with m uniform in [1, max_intervals], lengths w_i / sum(w) for integer
// weights w_i in [1, max_weight] and a uniformly shuffled permutation.
Iet random_rational_iet(Rng& rng, std::size_t max_intervals, long max_weight,
                        const NumericsConfig& config);

struct RandomSpecOptions {
  std::size_t max_k = 4;
  std::size_t max_intervals = 4;
  long max_weight = 12;
  long max_den = 12;         // coefficients a/b with b in [1, max_den]
  long max_numerator_ratio = 3;  // a in [1, max_numerator_ratio * b]
  bool mixed_sign = false;
};

CompositionSpec random_spec(Rng& rng, const RandomSpecOptions& options, const NumericsConfig& config);

}  // namespace ietx

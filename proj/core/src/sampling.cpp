#include "ietx/sampling.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <numeric>

namespace ietx {

namespace {

// Uniform integer in [lo, hi] by rejection on raw engine words; unlike the
// std distributions its output is the same on every standard library.
long uniform_in(Rng& rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<long>(v % span);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scalar sample_unit(Rng& rng, const NumericsConfig& config) {
  const int bits = config.precision_bits;
  const int words = (bits + 63) / 64;
  mpz_class m = 0;
  for (int w = 0; w < words; ++w) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), 64);
    const std::uint64_t v = rng();
    m += mpz_class(static_cast<unsigned long>(v));
  }
  mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(64 * words - bits));
  Scalar dyadic = Scalar::fixed_from_mantissa(std::move(m), bits);
  if (config.backend == Backend::fixed) return dyadic;
  return Scalar::from_rational(dyadic.exact());
}

Scalar sample_rational_unit(Rng& rng, long max_den, const NumericsConfig& config) {
  const long q = uniform_in(rng, 1, max_den);
  const long p = uniform_in(rng, 0, q - 1);
  return Scalar::from_ratio(p, q, config);
}

Iet random_rational_iet(Rng& rng, std::size_t max_intervals, long max_weight,
                        const NumericsConfig& config) {
  const auto m = static_cast<std::size_t>(uniform_in(rng, 1, static_cast<long>(max_intervals)));
  std::vector<long> weights(m);
  for (auto& w : weights) w = uniform_in(rng, 1, max_weight);
  const long total = std::accumulate(weights.begin(), weights.end(), 0L);
  std::vector<Scalar> lengths;
  for (long w : weights) lengths.push_back(Scalar::from_ratio(w, total, config));
  std::vector<int> image(m);
  std::iota(image.begin(), image.end(), 0);
  for (std::size_t i = m; i-- > 1;) {
    std::swap(image[i], image[static_cast<std::size_t>(uniform_in(rng, 0, static_cast<long>(i)))]);
  }
  return Iet::make(std::move(lengths), Permutation::from_zero_based(std::move(image)));
}

CompositionSpec random_spec(Rng& rng, const RandomSpecOptions& options, const NumericsConfig& config) {
  const auto k = static_cast<std::size_t>(uniform_in(rng, 1, static_cast<long>(options.max_k)));
  std::vector<Iet> iets;
  std::vector<Scalar> coefficients;
  for (std::size_t i = 0; i < k; ++i) {
    iets.push_back(random_rational_iet(rng, options.max_intervals, options.max_weight, config));
    const long b = uniform_in(rng, 1, options.max_den);
    long a = uniform_in(rng, 1, options.max_numerator_ratio * b);
    if (options.mixed_sign && (rng() & 1U)) a = -a;
    coefficients.push_back(Scalar::from_ratio(a, b, config));
  }
  return CompositionSpec(std::move(iets), std::move(coefficients));
}

}  // namespace ietx

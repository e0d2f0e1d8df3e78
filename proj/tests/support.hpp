#pragma once

// Shared helpers for the test binaries: shorthand constructors, hand-rolled
// generators and brute-force reference implementations that do not go
// through the library's own algorithms.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "ietx/composition.hpp"
#include "ietx/iet.hpp"
#include "ietx/scalar.hpp"

namespace ietx::testing {

inline NumericsConfig rational_config() { return {Backend::rational, 256}; }
inline NumericsConfig fixed_config(int bits = 256) { return {Backend::fixed, bits}; }

// gmpxx leaves two-argument mpq_class values uncanonicalized.
inline mpq_class ratio(long p, long q) {
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

inline Scalar Q(long p, long q = 1) { return Scalar::rational(p, q); }
inline Scalar F(long p, long q = 1, int bits = 256) { return Scalar::from_ratio(p, q, fixed_config(bits)); }

inline Iet make_iet(std::vector<Scalar> lengths, std::vector<int> one_based) {
  return Iet::make(std::move(lengths), Permutation::from_one_based(std::move(one_based)));
}

// The 3-IET with lengths (1/2, 1/4, 1/4) and permutation (3, 2, 1).
inline Iet reference_iet(const NumericsConfig& config) {
  return make_iet({Scalar::from_ratio(1, 2, config), Scalar::from_ratio(1, 4, config),
                   Scalar::from_ratio(1, 4, config)},
                  {3, 2, 1});
}

// --- generators -------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long range(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng_);
  }

  mpq_class unit_rational(long max_den) {
    const long q = range(1, max_den);
    return ratio(range(0, q - 1), q);
  }

  // A rational IET described by plain data: integer weights and a shuffled
  // zero-based image permutation.
  struct RawIet {
    std::vector<mpq_class> lengths;
    std::vector<int> image;  // zero-based
  };

  RawIet raw_iet(int max_intervals, long max_weight) {
    const int m = static_cast<int>(range(1, max_intervals));
    std::vector<long> w(static_cast<std::size_t>(m));
    long total = 0;
    for (auto& x : w) total += (x = range(1, max_weight));
    RawIet out;
    for (long x : w) out.lengths.emplace_back(x, total);
    for (auto& q : out.lengths) q.canonicalize();
    out.image.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.image[static_cast<std::size_t>(i)] = i;
    std::shuffle(out.image.begin(), out.image.end(), rng_);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Iet to_iet(const Gen::RawIet& raw, const NumericsConfig& config) {
  std::vector<Scalar> lengths;
  for (const auto& q : raw.lengths) lengths.push_back(Scalar::from_ratio(q, config));
  return Iet::make(std::move(lengths), Permutation::from_zero_based(raw.image));
}

// --- reference implementations ----------------------------------------------

// T(x) straight from the definition: x in interval i moves to the total
// length of the intervals whose image lies to the left of i's image, plus
// its distance from the left end of interval i.
inline mpq_class ref_apply(const std::vector<mpq_class>& lengths, const std::vector<int>& image,
                           const mpq_class& x) {
  mpq_class left = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (x >= left && x < left + lengths[i]) {
      mpq_class dest = 0;
      for (std::size_t j = 0; j < lengths.size(); ++j) {
        if (image[j] < image[i]) dest += lengths[j];
      }
      return dest + (x - left);
    }
    left += lengths[i];
  }
  throw std::out_of_range("ref_apply: x outside [0, 1)");
}

inline mpq_class ref_apply(const Iet& t, const mpq_class& x) {
  std::vector<mpq_class> lengths;
  for (const auto& l : t.lengths()) lengths.push_back(l.exact());
  std::vector<int> image;
  for (int v : t.permutation().one_based()) image.push_back(v - 1);
  return ref_apply(lengths, image, x);
}

inline mpq_class ref_mod_one(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - f;
}

// D* from the definition, without sorting: the supremum over t of
// |#{x < t} / N - t| is attained as t approaches a sample point from
// either side.
inline mpq_class ref_star_discrepancy(const std::vector<mpq_class>& pts) {
  const auto n = static_cast<long>(pts.size());
  mpq_class best = 0;
  for (const auto& p : pts) {
    long lt = 0, le = 0;
    for (const auto& q : pts) {
      if (q < p) ++lt;
      if (q <= p) ++le;
    }
    const mpq_class above = ratio(le, n) - p;
    const mpq_class below = p - ratio(lt, n);
    best = std::max(best, std::max(above, below));
  }
  // t = 1 contributes nothing; t just above the largest point is covered.
  return best;
}

}  // namespace ietx::testing

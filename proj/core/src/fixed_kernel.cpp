// Fixed-point orbit engine.
//
// Points of [0, 1) at precision P are held as W = 64 L bit unsigned words
// (value * 2^W). Translating by an IET offset is then a wrapping W-bit
// addition: the result is known to land in [0, 1), so the carry out is
// exactly the integer part being discarded. Results are bit-identical to
// the Scalar path because every value involved has zero low W - P bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "orbit_engine.hpp"

namespace ietx::detail {

namespace {

template <std::size_t L>
using Word = std::array<std::uint64_t, L>;

template <std::size_t L>
int compare(const Word<L>& a, const Word<L>& b) {
  for (std::size_t i = L; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

template <std::size_t L>
bool less(const Word<L>& a, const Word<L>& b) {
  return compare(a, b) < 0;
}

template <std::size_t L>
Word<L> add(const Word<L>& a, const Word<L>& b) {
  Word<L> r;
  unsigned carry = 0;
  for (std::size_t i = 0; i < L; ++i) {
    unsigned __int128 s = static_cast<unsigned __int128>(a[i]) + b[i] + carry;
    r[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<unsigned>(s >> 64);
  }
  return r;
}

template <std::size_t L>
Word<L> sub(const Word<L>& a, const Word<L>& b) {
  Word<L> r;
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < L; ++i) {
    const std::uint64_t d = a[i] - b[i];
    const std::uint64_t b1 = a[i] < b[i];
    r[i] = d - borrow;
    borrow = b1 | (d < borrow);
  }
  return r;
}

template <std::size_t L>
Word<L> add_small(const Word<L>& a, std::uint64_t v) {
  Word<L> b{};
  b[0] = v;
  return add(a, b);
}

// value * 2^W reduced mod 2^W; the Scalar has P <= W fractional bits.
template <std::size_t L>
Word<L> to_word(const Scalar& s, int width) {
  mpz_class v = s.mantissa();
  mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(width - s.precision_bits()));
  mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(width));
  Word<L> w{};
  std::size_t count = 0;
  mpz_export(w.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  return w;
}

template <std::size_t L>
mpz_class to_mpz(const Word<L>& w) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), L, -1, sizeof(std::uint64_t), 0, 0, w.data());
  return v;
}

template <std::size_t L>
Scalar to_scalar(const Word<L>& w, int width, int bits) {
  mpz_class v = to_mpz(w);
  mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(width - bits));
  return Scalar::fixed_from_mantissa(std::move(v), bits);
}

template <std::size_t L>
double to_unit_double(const Word<L>& w) {
  // floor(x * 2^53) / 2^53, matching unit_to_double.
  return std::ldexp(static_cast<double>(w[L - 1] >> 11), -53);
}

template <std::size_t L>
std::size_t bin_of(const Word<L>& w, std::size_t bins) {
  // floor(x * bins): the limb carried out of the W-bit product.
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < L; ++i) {
    unsigned __int128 p = static_cast<unsigned __int128>(w[i]) * bins + carry;
    carry = static_cast<std::uint64_t>(p >> 64);
  }
  return static_cast<std::size_t>(carry);
}

template <std::size_t L>
struct CompiledIet {
  std::vector<Word<L>> interior;  // b_1 .. b_{m-1}
  std::vector<Word<L>> offsets;   // delta_i mod 2^W
  Word<L> tolerance{};

  std::size_t locate(const Word<L>& x) const {
    return static_cast<std::size_t>(
        std::upper_bound(interior.begin(), interior.end(), x, less<L>) - interior.begin());
  }

  bool near_breakpoint(const Word<L>& x, std::size_t i) const {
    if (i >= 1 && compare(sub(x, interior[i - 1]), tolerance) <= 0) return true;
    if (i < interior.size() && compare(sub(interior[i], x), tolerance) <= 0) return true;
    return false;
  }
};

// Exact D*_N over sorted words, with i/N formed as floor(i 2^W / N) on an
// extra integer limb (so 1 = 2^W is representable).
template <std::size_t L>
Scalar sorted_star_discrepancy(std::span<const Word<L>> sorted, int width, int bits) {
  constexpr std::size_t E = L + 1;
  const std::uint64_t n = sorted.size();
  mpz_class one;
  mpz_setbit(one.get_mpz_t(), static_cast<mp_bitcnt_t>(width));
  mpz_class q, r;
  mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), one.get_mpz_t(), n);
  Word<E> step{};
  std::size_t count = 0;
  mpz_export(step.data(), &count, -1, sizeof(std::uint64_t), 0, 0, q.get_mpz_t());
  const std::uint64_t rem_step = r.get_ui();

  Word<E> prev{};
  Word<E> best{};
  std::uint64_t rem = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Word<E> cur = add(prev, step);
    rem += rem_step;
    if (rem >= n) {
      rem -= n;
      cur = add_small(cur, 1);
    }
    Word<E> x{};
    std::copy(sorted[i].begin(), sorted[i].end(), x.begin());
    if (less(x, cur)) {
      const Word<E> d = sub(cur, x);
      if (less(best, d)) best = d;
    }
    if (less(prev, x)) {
      const Word<E> d = sub(x, prev);
      if (less(best, d)) best = d;
    }
    prev = cur;
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), E, -1, sizeof(std::uint64_t), 0, 0, best.data());
  mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(width - bits));
  return Scalar::fixed_from_mantissa(std::move(v), bits);
}

template <std::size_t L>
OrbitDiagnostics trace(const Iet& t, const Scalar& x0, std::span<const std::uint64_t> ladder,
                       std::span<const TestFunction> family, std::size_t bins) {
  const int bits = t.precision_bits();
  const int width = static_cast<int>(64 * L);

  CompiledIet<L> c;
  for (const auto& b : t.interior_breakpoints()) c.interior.push_back(to_word<L>(b, width));
  for (const auto& d : t.offsets()) c.offsets.push_back(to_word<L>(d, width));
  c.tolerance = to_word<L>(t.tolerance(), width);

  OrbitDiagnostics out;
  out.start = x0;
  const std::uint64_t n_max = ladder.back();
  const std::size_t nf = family.size();

  std::vector<Word<L>> points;
  points.reserve(static_cast<std::size_t>(n_max));
  std::vector<double> values(nf), sums(nf, 0.0), running(nf, 0.0);
  std::vector<bool> seen(bins, false);

  Word<L> x = to_word<L>(x0, width);
  std::size_t next = 0;
  std::size_t sorted_upto = 0;
  for (std::uint64_t step = 0; step < n_max; ++step) {
    points.push_back(x);
    const std::size_t bin = bin_of(x, bins);
    if (!seen[bin]) {
      seen[bin] = true;
      ++out.visited_bins;
    }
    evaluate_family(family, to_unit_double(x), values);
    for (std::size_t f = 0; f < nf; ++f) {
      sums[f] += values[f];
      running[f] = std::max(running[f], std::abs(sums[f]));
    }
    if (step + 1 == ladder[next]) {
      auto mid = points.begin() + static_cast<std::ptrdiff_t>(sorted_upto);
      std::sort(mid, points.end(), less<L>);
      std::inplace_merge(points.begin(), mid, points.end(), less<L>);
      sorted_upto = points.size();
      out.ladder.push_back(ladder[next]);
      out.star_discrepancy.push_back(
          sorted_star_discrepancy<L>(std::span<const Word<L>>(points), width, bits));
      out.sums.push_back(sums);
      out.running_max.push_back(running);
      ++next;
    }
    if (step + 1 == n_max) break;
    const std::size_t i = c.locate(x);
    if (c.near_breakpoint(x, i)) {
      out.singular_step = static_cast<std::size_t>(step);
      break;
    }
    x = add(x, c.offsets[i]);
  }
  return out;
}

template <std::size_t... Ls>
std::optional<OrbitDiagnostics> dispatch(std::size_t limbs, std::index_sequence<Ls...>, const Iet& t,
                                         const Scalar& x0, std::span<const std::uint64_t> ladder,
                                         std::span<const TestFunction> family, std::size_t bins) {
  std::optional<OrbitDiagnostics> out;
  ((limbs == Ls + 1 ? (out = trace<Ls + 1>(t, x0, ladder, family, bins), true) : false) || ...);
  return out;
}

}  // namespace

std::optional<OrbitDiagnostics> trace_fixed(const Iet& t, const Scalar& x0,
                                            std::span<const std::uint64_t> ladder,
                                            std::span<const TestFunction> family, std::size_t bins) {
  if (t.backend() != Backend::fixed) return std::nullopt;
  const auto limbs = static_cast<std::size_t>((t.precision_bits() + 63) / 64);
  constexpr std::size_t kMaxLimbs = 8;
  if (limbs > kMaxLimbs) return std::nullopt;
  return dispatch(limbs, std::make_index_sequence<kMaxLimbs>{}, t, x0, ladder, family, bins);
}

}  // namespace ietx::detail

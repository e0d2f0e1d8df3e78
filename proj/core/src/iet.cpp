#include "ietx/iet.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ietx {

Iet::Iet(std::vector<Scalar> lengths, Permutation pi)
    : lengths_(std::move(lengths)), pi_(std::move(pi)) {
  derive();
}

void Iet::derive() {
  const std::size_t m = lengths_.size();
  tolerance_ = tolerance_for(lengths_.front());
  breakpoints_.assign(m + 1, zero());
  for (std::size_t i = 0; i < m; ++i) breakpoints_[i + 1] = breakpoints_[i] + lengths_[i];
  // b_m is 1 by construction; pin it so the last interval ends exactly at 1.
  breakpoints_[m] = one();

  const Permutation order = pi_.inverse();  // order[p] = interval at position p
  std::vector<Scalar> position_start(m, zero());
  Scalar acc = zero();
  for (std::size_t p = 0; p < m; ++p) {
    position_start[p] = acc;
    acc += lengths_[static_cast<std::size_t>(order[p])];
  }
  offsets_.clear();
  offsets_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    offsets_.push_back(position_start[static_cast<std::size_t>(pi_[i])] - breakpoints_[i]);
  }
}

Iet Iet::make(std::vector<Scalar> lengths, Permutation pi) {
  if (lengths.empty()) throw InvalidIet("an IET needs at least one interval");
  if (lengths.size() != pi.size()) {
    throw InvalidIet("length vector has " + std::to_string(lengths.size()) +
                     " entries but the permutation has " + std::to_string(pi.size()));
  }
  const Scalar& proto = lengths.front();
  Scalar sum = Scalar::like(proto, 0);
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!lengths[i].same_backend(proto)) throw BackendMismatch("IET lengths mix backends");
    if (lengths[i].sign() <= 0) {
      throw InvalidIet("length " + std::to_string(i + 1) + " is not positive: " +
                       format_scalar(lengths[i]));
    }
    sum += lengths[i];
  }
  const Scalar one = Scalar::like(proto, 1);
  if (!within(sum, one, tolerance_for(proto))) {
    throw InvalidIet("lengths sum to " + format_scalar(sum) + ", not 1");
  }
  if (sum != one) {
    lengths.back() += one - sum;
    if (lengths.back().sign() <= 0) throw InvalidIet("renormalised last length is not positive");
  }
  return Iet(std::move(lengths), std::move(pi));
}

Iet Iet::identity(const Scalar& proto) {
  return Iet({Scalar::like(proto, 1)}, Permutation::identity(1));
}

Iet Iet::identity(const NumericsConfig& config) {
  return Iet({Scalar::from_ratio(1, 1, config)}, Permutation::identity(1));
}

Iet Iet::from_cells(std::vector<Cell> cells) {
  if (cells.empty()) throw InvalidIet("no cells");
  const Scalar tol = tolerance_for(cells.front().length);

  std::vector<Cell> kept;
  kept.reserve(cells.size());
  Scalar pending = Scalar::like(cells.front().length, 0);  // width owed to the next kept cell
  for (auto& c : cells) {
    if (c.length.sign() < 0) throw InvalidIet("negative cell width");
    if (c.length <= tol) {
      if (kept.empty()) {
        pending += c.length;
      } else {
        kept.back().length += c.length;
      }
      continue;
    }
    c.length += pending;
    pending = Scalar::like(pending, 0);
    kept.push_back(std::move(c));
  }
  if (kept.empty()) throw InvalidIet("all cells are degenerate");

  const std::size_t m = kept.size();
  std::vector<Scalar> image_start;
  image_start.reserve(m);
  Scalar left = Scalar::like(kept.front().length, 0);
  for (const auto& c : kept) {
    image_start.push_back(left + c.offset);
    left += c.length;
  }
  std::vector<int> by_image(m);
  std::iota(by_image.begin(), by_image.end(), 0);
  std::stable_sort(by_image.begin(), by_image.end(), [&](int a, int b) {
    return image_start[static_cast<std::size_t>(a)] < image_start[static_cast<std::size_t>(b)];
  });
  std::vector<int> pi(m);
  for (std::size_t p = 0; p < m; ++p) pi[static_cast<std::size_t>(by_image[p])] = static_cast<int>(p);

  std::vector<Scalar> lengths;
  lengths.reserve(m);
  for (auto& c : kept) lengths.push_back(std::move(c.length));
  return Iet(std::move(lengths), Permutation::from_zero_based(std::move(pi)));
}

std::vector<Cell> Iet::cells() const {
  std::vector<Cell> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({lengths_[i], offsets_[i]});
  return out;
}

std::size_t Iet::locate(const Scalar& x) const {
  auto first = breakpoints_.begin() + 1;
  auto last = breakpoints_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

Scalar Iet::apply(const Scalar& x) const {
  if (x.sign() < 0 || x >= breakpoints_.back()) {
    throw std::out_of_range("IET argument " + format_scalar(x) + " outside [0, 1)");
  }
  return x + offsets_[locate(x)];
}

std::span<const Scalar> Iet::interior_breakpoints() const {
  return std::span<const Scalar>(breakpoints_).subspan(1, size() - 1);
}

bool Iet::near_interior_breakpoint(const Scalar& x) const {
  const std::size_t i = locate(x);
  if (i >= 1 && x - breakpoints_[i] <= tolerance_) return true;
  if (i + 1 < size() && breakpoints_[i + 1] - x <= tolerance_) return true;
  return false;
}

Iet rotation(const Scalar& alpha) {
  Scalar a = mod_one(alpha);
  if (a.is_zero()) return Iet::identity(a);
  Scalar rest = Scalar::like(a, 1) - a;
  return Iet::make({std::move(rest), std::move(a)}, Permutation::from_zero_based({1, 0}));
}

Iet invert(const Iet& t) {
  const Permutation order = t.permutation().inverse();
  std::vector<Cell> cells;
  cells.reserve(t.size());
  for (std::size_t p = 0; p < t.size(); ++p) {
    const auto i = static_cast<std::size_t>(order[p]);
    cells.push_back({t.lengths()[i], -t.offsets()[i]});
  }
  return Iet::from_cells(std::move(cells));
}

Iet compose(const Iet& outer, const Iet& inner) {
  if (outer.backend() != inner.backend() || outer.precision_bits() != inner.precision_bits()) {
    throw BackendMismatch("cannot compose IETs from different backends");
  }
  const Scalar& tol = inner.tolerance();
  const Scalar half = Scalar::like(tol, 1, 2);
  const auto cuts = outer.interior_breakpoints();
  std::vector<Cell> cells;
  cells.reserve(outer.size() + inner.size());

  for (std::size_t j = 0; j < inner.size(); ++j) {
    const Scalar& start = inner.breakpoints()[j];
    const Scalar& delta = inner.offsets()[j];
    const Scalar image_lo = start + delta;
    const Scalar image_hi = image_lo + inner.lengths()[j];

    // Outer breakpoints strictly inside the image of this interval.
    auto it = std::upper_bound(cuts.begin(), cuts.end(), image_lo);
    Scalar piece_lo = image_lo;
    auto emit = [&](const Scalar& piece_hi) {
      const Scalar width = piece_hi - piece_lo;
      const Scalar mid = piece_lo + width * half;
      const std::size_t i = outer.locate(mid);
      cells.push_back({width, delta + outer.offsets()[i]});
    };
    for (; it != cuts.end() && *it < image_hi; ++it) {
      const Scalar& c = *it;
      // Cuts closer than the tolerance to an existing endpoint coincide with it.
      if (c - piece_lo <= tol || image_hi - c <= tol) continue;
      emit(c);
      piece_lo = c;
    }
    emit(image_hi);
  }
  return Iet::from_cells(std::move(cells));
}

Iet canonicalize(const Iet& t) {
  std::vector<Cell> cells = t.cells();
  const Scalar& tol = t.tolerance();
  std::vector<Cell> merged;
  merged.reserve(cells.size());
  for (auto& c : cells) {
    if (!merged.empty() && within(merged.back().offset, c.offset, tol)) {
      merged.back().length += c.length;
    } else {
      merged.push_back(std::move(c));
    }
  }
  return Iet::from_cells(std::move(merged));
}

bool iet_equal(const Iet& a, const Iet& b) {
  if (a.backend() != b.backend() || a.precision_bits() != b.precision_bits()) {
    throw BackendMismatch("cannot compare IETs from different backends");
  }
  const Iet ca = canonicalize(a);
  const Iet cb = canonicalize(b);
  if (ca.size() != cb.size() || !(ca.permutation() == cb.permutation())) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!within(ca.lengths()[i], cb.lengths()[i], ca.tolerance())) return false;
  }
  return true;
}

}  // namespace ietx

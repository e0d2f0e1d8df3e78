#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ietx/scalar.hpp"

namespace ietx {

class InvalidIet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bijection of {1..m}. Stored zero-based; `one_based()` gives the
// conventional presentation where image[i-1] is the position interval i
// occupies after the exchange.
class Permutation {
 public:
  Permutation() = default;
  // Throws InvalidIet unless `images` is a bijection of {1..m}.
  static Permutation from_one_based(const std::vector<int>& images);
  static Permutation from_zero_based(std::vector<int> images);
  static Permutation identity(std::size_t m);
  // (m, m-1, ..., 1)
  static Permutation reversal(std::size_t m);

  std::size_t size() const { return image_.size(); }
  int operator[](std::size_t i) const { return image_[i]; }
  std::vector<int> one_based() const;
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {}
  std::vector<int> image_;
};

// True iff no proper prefix {1..k}, k < m, is mapped onto itself.
bool is_irreducible(const Permutation& pi);

// A piece of a piecewise translation: an input cell of width `length`
// translated by `offset`. Cells are listed in input order starting at 0.
struct Cell {
  Scalar length;
  Scalar offset;
};

// Interval exchange transformation T_{lambda, pi} on [0, 1).
//
// Intervals are left-closed and right-open; a point sitting on a breakpoint
// belongs to the interval on its right. Interval i lands at position pi(i),
// so its offset is the total length of the intervals placed before it
// minus its own left endpoint.
class Iet {
 public:
  // Validating constructor. Lengths must be positive and sum to one: exactly
  // for rationals, within the backend tolerance for fixed point (the last
  // length then absorbs the residue).
  static Iet make(std::vector<Scalar> lengths, Permutation pi);

  // 1-interval identity in the backend of `proto`.
  static Iet identity(const Scalar& proto);
  static Iet identity(const NumericsConfig& config);

  // Assembles an IET from cells in input order whose images tile [0, 1).
  // Cells of zero width (or below the fixed-point tolerance) are absorbed
  // into a neighbour. The permutation is read off the order of the images.
  static Iet from_cells(std::vector<Cell> cells);

  std::size_t size() const { return lengths_.size(); }
  const std::vector<Scalar>& lengths() const { return lengths_; }
  const Permutation& permutation() const { return pi_; }
  // b_0 = 0 < b_1 < ... < b_m = 1.
  const std::vector<Scalar>& breakpoints() const { return breakpoints_; }
  const std::vector<Scalar>& offsets() const { return offsets_; }
  std::vector<Cell> cells() const;

  Backend backend() const { return lengths_.front().backend(); }
  int precision_bits() const { return lengths_.front().precision_bits(); }
  const Scalar& tolerance() const { return tolerance_; }
  Scalar zero() const { return Scalar::like(lengths_.front(), 0); }
  Scalar one() const { return Scalar::like(lengths_.front(), 1); }

  // Index of the interval containing x, for x in [0, 1).
  std::size_t locate(const Scalar& x) const;

  // T(x). Throws std::out_of_range unless 0 <= x < 1.
  Scalar apply(const Scalar& x) const;

  // Interior breakpoints b_1..b_{m-1}.
  std::span<const Scalar> interior_breakpoints() const;

  // Whether x is within tolerance of an interior breakpoint (exactly on
  // one, for rationals).
  bool near_interior_breakpoint(const Scalar& x) const;

 private:
  Iet(std::vector<Scalar> lengths, Permutation pi);
  void derive();

  std::vector<Scalar> lengths_;
  Permutation pi_;
  std::vector<Scalar> breakpoints_;
  std::vector<Scalar> offsets_;
  Scalar tolerance_;
};

// Circle rotation x -> x + alpha mod 1 as an IET: the identity when alpha
// is an integer, otherwise lambda = (1 - alpha, alpha), pi = (2, 1).
Iet rotation(const Scalar& alpha);

Iet invert(const Iet& t);

// The refinement of `outer` after `inner`: its breakpoints are those of
// `inner` together with the inner-preimages of the breakpoints of `outer`.
// Not merged; pass through canonicalize() for the reduced presentation.
Iet compose(const Iet& outer, const Iet& inner);

// Merges neighbouring intervals carrying the same translation. Idempotent.
Iet canonicalize(const Iet& t);

// Equality of canonical forms. Throws BackendMismatch across backends.
bool iet_equal(const Iet& a, const Iet& b);

}  // namespace ietx

#pragma once

#include <vector>

#include "ietx/iet.hpp"

namespace ietx {

// IETs T_1..T_k with nonzero coefficients c_1..c_k describing the family
//   S_alpha = T_k o R_{c_k alpha} o ... o T_1 o R_{c_1 alpha}.
class CompositionSpec {
 public:
  // Throws std::invalid_argument for k = 0, mismatched sizes or a zero
  // coefficient; BackendMismatch if the data mixes backends.
  CompositionSpec(std::vector<Iet> iets, std::vector<Scalar> coefficients);

  std::size_t size() const { return iets_.size(); }
  const std::vector<Iet>& iets() const { return iets_; }
  const std::vector<Scalar>& coefficients() const { return coefficients_; }

  // All c_i > 0: the setting where the stacked-rectangle surface exists.
  bool all_positive() const { return all_positive_; }
  Scalar coefficient_sum() const;

  Backend backend() const { return coefficients_.front().backend(); }
  int precision_bits() const { return coefficients_.front().precision_bits(); }

 private:
  std::vector<Iet> iets_;
  std::vector<Scalar> coefficients_;
  bool all_positive_ = true;
};

// Canonical form of S_alpha. Negative coefficients are accepted.
Iet build_composition(const CompositionSpec& spec, const Scalar& alpha);

// S_alpha(x) evaluated one map at a time, without building the composite.
Scalar apply_sequentially(const CompositionSpec& spec, const Scalar& alpha, const Scalar& x);

}  // namespace ietx

#include "ietx/composition.hpp"

#include <stdexcept>

namespace ietx {

CompositionSpec::CompositionSpec(std::vector<Iet> iets, std::vector<Scalar> coefficients)
    : iets_(std::move(iets)), coefficients_(std::move(coefficients)) {
  if (iets_.empty()) throw std::invalid_argument("a composition needs at least one IET");
  if (iets_.size() != coefficients_.size()) {
    throw std::invalid_argument("composition has " + std::to_string(iets_.size()) + " IETs but " +
                                std::to_string(coefficients_.size()) + " coefficients");
  }
  const Scalar& proto = coefficients_.front();
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    const Scalar& c = coefficients_[i];
    if (!c.same_backend(proto) || iets_[i].backend() != proto.backend() ||
        iets_[i].precision_bits() != proto.precision_bits()) {
      throw BackendMismatch("composition data mixes backends");
    }
    if (c.is_zero()) throw std::invalid_argument("coefficient " + std::to_string(i + 1) + " is zero");
    if (c.sign() < 0) all_positive_ = false;
  }
}

Scalar CompositionSpec::coefficient_sum() const {
  Scalar sum = Scalar::like(coefficients_.front(), 0);
  for (const auto& c : coefficients_) sum += c;
  return sum;
}

Iet build_composition(const CompositionSpec& spec, const Scalar& alpha) {
  Iet acc = Iet::identity(spec.coefficients().front());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    acc = compose(rotation(mod_one(spec.coefficients()[i] * alpha)), acc);
    acc = canonicalize(compose(spec.iets()[i], acc));
  }
  return acc;
}

Scalar apply_sequentially(const CompositionSpec& spec, const Scalar& alpha, const Scalar& x) {
  Scalar y = x;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    y = mod_one(y + spec.coefficients()[i] * alpha);
    y = spec.iets()[i].apply(y);
  }
  return y;
}

}  // namespace ietx

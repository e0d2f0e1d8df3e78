#include <algorithm>
#include <numeric>
#include <string>

#include "ietx/iet.hpp"

namespace ietx {

Permutation Permutation::from_one_based(const std::vector<int>& images) {
  std::vector<int> zero_based(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) zero_based[i] = images[i] - 1;
  return from_zero_based(std::move(zero_based));
}

Permutation Permutation::from_zero_based(std::vector<int> images) {
  const auto m = static_cast<int>(images.size());
  if (m == 0) throw InvalidIet("permutation must be non-empty");
  std::vector<bool> seen(images.size(), false);
  for (int v : images) {
    if (v < 0 || v >= m) {
      throw InvalidIet("permutation entry " + std::to_string(v + 1) + " out of range 1.." +
                       std::to_string(m));
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw InvalidIet("permutation is not bijective: " + std::to_string(v + 1) + " repeats");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  return Permutation(std::move(images));
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<int> image(m);
  std::iota(image.begin(), image.end(), 0);
  return from_zero_based(std::move(image));
}

Permutation Permutation::reversal(std::size_t m) {
  std::vector<int> image(m);
  for (std::size_t i = 0; i < m; ++i) image[i] = static_cast<int>(m - 1 - i);
  return from_zero_based(std::move(image));
}

std::vector<int> Permutation::one_based() const {
  std::vector<int> out(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) out[i] = image_[i] + 1;
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

bool is_irreducible(const Permutation& pi) {
  // pi maps {0..k-1} onto itself iff the largest image among them is k-1.
  int running_max = -1;
  for (std::size_t k = 0; k + 1 < pi.size(); ++k) {
    running_max = std::max(running_max, pi[k]);
    if (running_max == static_cast<int>(k)) return false;
  }
  return true;
}

}  // namespace ietx

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mhs/errors.hpp"

namespace mhs {

// An ordered tuple of positive integer exponents (s_1, ..., s_d).
class Composition {
 public:
  // Empty placeholder so that report types can default-construct; every
  // operation producing one assigns a real composition.
  Composition() = default;

  explicit Composition(std::vector<unsigned> parts);

  // Accepts "2", "2,3", "2^4", and mixes like "1,2^2,3".
  static Composition parse(std::string_view text);

  unsigned depth() const { return static_cast<unsigned>(parts_.size()); }
  unsigned weight() const { return prefix_weight_.back(); }
  unsigned min_part() const { return min_part_; }

  // 1-based: part(1) = s_1, ..., part(depth()) = s_d.
  unsigned part(unsigned i) const { return parts_[i - 1]; }

  // s_1 + ... + s_i for i in [0, depth()].
  unsigned prefix_weight(unsigned i) const { return prefix_weight_[i]; }

  bool homogeneous() const;
  const std::vector<unsigned>& parts() const { return parts_; }

  // Canonical comma-separated form, e.g. "2,2,3".
  std::string str() const;

  bool operator==(const Composition& other) const { return parts_ == other.parts_; }

 private:
  std::vector<unsigned> parts_;
  std::vector<unsigned> prefix_weight_ = {0};
  unsigned min_part_ = 0;
};

}  // namespace mhs

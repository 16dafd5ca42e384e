#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "mhs/arith.hpp"
#include "mhs/composition.hpp"

namespace mhs {

// Incremental exact evaluation of H(s_1..s_i; n) for every prefix i at a common n.
// advance() moves n -> n+1; the prefix values stay aligned because the update
// runs over prefixes in descending order.
class ExactSeries {
 public:
  explicit ExactSeries(Composition c);

  void advance();
  u64 n() const { return n_; }

  // H(s_1..s_i; n) for i in [0, depth]; prefix(0) == 1 by convention.
  const mpq_class& prefix(unsigned i) const { return h_[i]; }
  const mpq_class& value() const { return h_.back(); }

  const Composition& composition() const { return c_; }

 private:
  Composition c_;
  u64 n_ = 0;
  std::vector<mpq_class> h_;
};

// H(s_1..s_d; n) as an exact rational; 0 for n < depth while the empty
// composition sums to 1.
mpq_class exact_mhs(const Composition& c, u64 n);

// v_p of the exact value (infinite when the sum vanishes, e.g. n < depth).
Valuation exact_mhs_valuation(const Composition& c, u64 n, u64 p);

}  // namespace mhs

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <variant>
#include <vector>

#include "mhs/arith.hpp"
#include "mhs/composition.hpp"

namespace mhs {

// Backend selection for modular state: Auto falls back to arbitrary-precision
// integers when p^K (or a later segment's modulus) overflows 64 bits; FastOnly
// throws ModulusTooLarge instead.
enum class WidePolicy { Auto, FastOnly };

// Streams the scaled partial sums
//   psum[i] = p^(t * w_i) * H(s_1..s_i; n - d + i)  mod p^K,  w_i = s_1+..+s_i,
// over n in segment t (indices n < p^(t+1)). The prefixes are staggered: after
// advancing to n, prefix i sits at argument n - d + i, so psum[d] tracks the
// full sum at n itself. Construction leaves the stream at n = d - 1 where
// psum = (1, 0, ..., 0); each advance() moves n forward by one.
class ScaledStream {
 public:
  ScaledStream(Composition c, u64 p, unsigned t, unsigned K,
               WidePolicy wide = WidePolicy::Auto);

  // A stream positioned so that the next advance() yields the first index of
  // segment t, i.e. n = max(p^t, depth) after one advance.
  static ScaledStream at_segment_start(Composition c, u64 p, unsigned t, unsigned K,
                                       WidePolicy wide = WidePolicy::Auto);

  // Move to n + 1; throws SegmentExhausted at the segment boundary p^(t+1).
  void advance();

  // True when the current n is the last index of the segment.
  bool at_segment_end() const;

  // Re-enter at segment t + 1 with modulus p^K_next (K_next >= current K):
  // every prefix is rescaled by p^(w_i), consistent with the extra factor of p
  // in the scaling exponent t * w_i. Precision already lost to reduction
  // mod p^K is not recovered; K_next - K must not exceed the smallest prefix
  // weight for the carried residues to stay exact at the new modulus.
  void enter_next_segment(unsigned K_next);

  u64 p() const { return p_; }
  unsigned t() const { return t_; }
  unsigned K() const { return K_; }
  u64 n() const { return n_; }
  unsigned depth() const { return c_.depth(); }
  const Composition& composition() const { return c_; }
  bool wide() const;

  // p^e divides psum[i]? Requires e <= K.
  bool divisible(unsigned i, unsigned e) const;
  bool is_zero(unsigned i) const { return divisible(i, K_); }

  // min(K, v_p(psum[i])): exact valuation when < K, otherwise only a bound.
  unsigned p_exponent(unsigned i) const;

  // psum[i] as an integer in [0, p^K).
  mpz_class residue(unsigned i) const;
  // Same, restricted to the 64-bit backend; throws ModulusTooLarge when wide.
  u64 residue_u64(unsigned i) const;

 private:
  template <class Core>
  void advance_core(Core& core);

  struct FastCore {
    u64 modulus;  // no default initializer: it would block variant default
                  // construction while the enclosing class is incomplete
    std::vector<u64> psum;
    std::vector<u64> ppow;  // p^0 .. p^K
  };
  struct WideCore {
    mpz_class modulus;
    std::vector<mpz_class> psum;
    std::vector<mpz_class> ppow;
  };

  static FastCore make_fast(u64 p, unsigned K);
  static WideCore make_wide(u64 p, unsigned K);

  Composition c_;
  u64 p_ = 0;
  unsigned t_ = 0;
  unsigned K_ = 0;
  u64 n_ = 0;
  u64 segment_end_ = 0;  // first index beyond the segment (saturated at u64 max)
  WidePolicy policy_ = WidePolicy::Auto;
  std::variant<FastCore, WideCore> core_;
};

// v_p(H(c; n)) measured through the stream: exact when below cap, otherwise
// Valuation{v >= cap} reported as cap with exact == false.
struct StreamValuation {
  bool exact = false;
  long long v = 0;  // exact value, or the cap as a lower bound
};
StreamValuation stream_valuation(const Composition& c, u64 p, u64 n, unsigned cap,
                                 WidePolicy wide = WidePolicy::Auto);

}  // namespace mhs

#pragma once

#include "mhs/composition.hpp"
#include "mhs/stream.hpp"

namespace mhs {

// Guard against runaway segment scans: a segment is only scanned when its
// predicted iteration count p^tau * depth stays within max_scan, unless
// unlimited is set.
struct Budget {
  u64 max_scan = 1'000'000'000ull;
  bool unlimited = false;
};

// Certifies that segment tau is clean: every scaled residue
// p^((tau-1)*wt) * H(c; n) mod p^(m*(tau-1)+m), n in [p^(tau-1), p^tau),
// is nonzero, where m is the smallest part. By the finiteness criterion this
// certifies that the divisible sets of c at p are finite.
struct TauCertificate {
  Composition c;
  u64 p = 0;
  unsigned tau = 0;      // certified segment index (1-based) when verified
  unsigned e_bound = 0;  // exhausted search cap when not verified
  long long rhs = 0;     // (wt - m) * (tau - 1) - m, the criterion threshold
  bool verified = false;
};

// Scans segments in increasing order, starting with the first segment that
// contains no index below the depth (those indices give empty sums, which
// vanish and can never satisfy the criterion). Returns a verified certificate
// for the first clean segment with tau <= e, otherwise an unverified one
// recording e. Requires e >= 2.
TauCertificate find_tau(const Composition& c, u64 p, unsigned e, const Budget& budget = {},
                        WidePolicy wide = WidePolicy::Auto);

// Recomputes the certified segment scan from scratch; true iff the scan again
// finds no vanishing scaled residue. Always false for unverified certificates
// and for tau values whose segment contains indices below the depth.
bool criterion_check(const TauCertificate& cert, const Budget& budget = {},
                     WidePolicy wide = WidePolicy::Auto);

// Highest segment that can still contain nontrivial members once cert is
// verified: tau for depth 1 (members with valuation below the weight may share
// the certified segment), tau - 1 for higher depth (the certified clean level
// m*tau - (tau-1)*wt is <= 0 there, so the certified segment is already empty).
unsigned covered_segments(const TauCertificate& cert);

}  // namespace mhs

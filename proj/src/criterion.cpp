#include "mhs/criterion.hpp"

#include <string>

namespace mhs {

namespace {

// Smallest t >= 0 with p^t >= d: segments below it contain indices n < d.
unsigned first_full_segment(u64 p, unsigned d) {
  unsigned t = 0;
  u64 power = 1;
  while (power < d) {
    power *= p;
    ++t;
  }
  return t;
}

void check_budget(u64 p, unsigned t, unsigned d, const Budget& budget) {
  if (budget.unlimited) return;
  u64 end = 0;
  u128 cost;
  if (!checked_pow(p, t + 1, end)) {
    cost = static_cast<u128>(UINT64_MAX);
  } else {
    cost = static_cast<u128>(end) * d;
  }
  if (cost > budget.max_scan) {
    throw BudgetExceeded("segment " + std::to_string(t + 1) + " scan for p=" + std::to_string(p) +
                         " needs ~" + std::to_string(static_cast<unsigned long long>(
                                          cost > static_cast<u128>(UINT64_MAX)
                                              ? UINT64_MAX
                                              : static_cast<u64>(cost))) +
                         " steps, over the budget of " + std::to_string(budget.max_scan));
  }
}

// Advance the stream through its current segment; true iff no scaled residue
// of the full composition vanished. The stream ends positioned at the final
// index so the caller can carry it into the next segment.
bool segment_clean(ScaledStream& stream) {
  bool clean = true;
  const unsigned d = stream.depth();
  while (!stream.at_segment_end()) {
    stream.advance();
    if (stream.is_zero(d)) clean = false;
  }
  return clean;
}

}  // namespace

TauCertificate find_tau(const Composition& c, u64 p, unsigned e, const Budget& budget,
                        WidePolicy wide) {
  if (e < 2) throw Error("find_tau: search cap e must be at least 2");
  if (!is_prime(p)) throw Error("find_tau: p must be prime");
  const unsigned m = c.min_part();
  const unsigned wt = c.weight();

  TauCertificate cert;
  cert.c = c;
  cert.p = p;
  cert.e_bound = e;

  unsigned t = first_full_segment(p, c.depth());
  if (t >= e) return cert;

  check_budget(p, t, c.depth(), budget);
  ScaledStream stream = ScaledStream::at_segment_start(c, p, t, m * t + m, wide);
  while (true) {
    if (segment_clean(stream)) {
      cert.tau = t + 1;
      cert.rhs = static_cast<long long>(wt - m) * t - m;
      cert.verified = true;
      return cert;
    }
    ++t;
    if (t >= e) return cert;
    check_budget(p, t, c.depth(), budget);
    // Growing the modulus exponent by m per segment keeps the carried
    // residues exact: re-entry rescales prefix i by p^(w_i) and w_i >= m.
    stream.enter_next_segment(m * t + m);
  }
}

bool criterion_check(const TauCertificate& cert, const Budget& budget, WidePolicy wide) {
  if (!cert.verified || cert.tau == 0) return false;
  const unsigned t = cert.tau - 1;
  u64 lower = 0;
  if (!checked_pow(cert.p, t, lower)) return false;
  // Segments holding indices below the depth contain vanishing sums, so the
  // claim is false regardless of any scan.
  if (lower < cert.c.depth()) return false;
  check_budget(cert.p, t, cert.c.depth(), budget);
  const unsigned m = cert.c.min_part();
  ScaledStream stream = ScaledStream::at_segment_start(cert.c, cert.p, t, m * t + m, wide);
  return segment_clean(stream);
}

unsigned covered_segments(const TauCertificate& cert) {
  if (!cert.verified) throw Error("covered_segments: certificate not verified");
  return cert.c.depth() == 1 ? cert.tau : cert.tau - 1;
}

}  // namespace mhs

#include "mhs/jsets.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mhs {

namespace {

void require_prime(u64 p, const char* where) {
  if (!is_prime(p)) throw Error(std::string(where) + ": p must be prime");
}

void check_budget(u64 p, unsigned tau, unsigned d, const Budget& budget) {
  if (budget.unlimited) return;
  u64 end = 0;
  u128 cost = static_cast<u128>(UINT64_MAX);
  if (checked_pow(p, tau, end)) cost = static_cast<u128>(end) * d;
  if (cost > budget.max_scan) {
    throw BudgetExceeded("segment " + std::to_string(tau) + " scan for p=" + std::to_string(p) +
                         " exceeds the scan budget of " + std::to_string(budget.max_scan));
  }
}

// Shared stream pass for depth-1 segment 1 at modulus p^K: reports the exact
// valuation of every n in [1, p) when it is < K, otherwise the bound >= K.
std::vector<StreamValuation> depth1_segment1_valuations(const Composition& c, u64 p, unsigned K,
                                                        WidePolicy wide) {
  std::vector<StreamValuation> vals(p);  // index n; n = 0 untouched
  ScaledStream stream(c, p, 0, K, wide);
  while (!stream.at_segment_end()) {
    stream.advance();
    const unsigned e = stream.p_exponent(1);
    vals[stream.n()] =
        e < K ? StreamValuation{true, static_cast<long long>(e)}
              : StreamValuation{false, static_cast<long long>(K)};
  }
  return vals;
}

}  // namespace

Segment Segment::of(u64 p, unsigned tau) {
  if (tau == 0) throw Error("segment index must be at least 1");
  Segment seg;
  seg.tau = tau;
  if (!checked_pow(p, tau - 1, seg.lower)) seg.lower = UINT64_MAX;
  u64 end = 0;
  seg.upper = checked_pow(p, tau, end) ? end - 1 : UINT64_MAX;
  return seg;
}

std::vector<JMember> scan_segment(const Composition& c, u64 p, unsigned tau, unsigned k,
                                  WidePolicy wide) {
  require_prime(p, "scan_segment");
  if (tau == 0) throw Error("scan_segment: segment index must be at least 1");
  if (k == 0) throw Error("scan_segment: divisibility exponent must be at least 1");
  const Segment seg = Segment::of(p, tau);
  const unsigned d = c.depth();
  const unsigned K = (tau - 1) * c.weight() + k;

  std::vector<JMember> out;
  // Indices below the depth have empty sums: members for every k.
  for (u64 n = seg.lower; n < d && n <= seg.upper; ++n) {
    out.push_back({n, true, {false, static_cast<long long>(k)}});
  }

  ScaledStream stream = ScaledStream::at_segment_start(c, p, tau - 1, K, wide);
  while (!stream.at_segment_end()) {
    stream.advance();
    if (stream.is_zero(d)) {
      out.push_back({stream.n(), false, {false, static_cast<long long>(k)}});
    }
  }
  return out;
}

std::vector<JMember> lift_candidates(const Composition& c, u64 p, unsigned tau, unsigned k,
                                     const std::vector<u64>& parents, WidePolicy wide) {
  if (c.depth() != 1) {
    throw DepthUnsupported("lift_candidates: defined for depth-1 compositions only");
  }
  require_prime(p, "lift_candidates");
  const unsigned s = c.part(1);
  if (p < s + 2) throw Error("lift_candidates: requires p >= s + 2");
  if (tau < 2) throw Error("lift_candidates: target segment must be at least 2");
  if (k == 0) throw Error("lift_candidates: divisibility exponent must be at least 1");

  std::vector<JMember> out;
  if (parents.empty()) return out;

  const Segment parent_seg = Segment::of(p, tau - 1);
  std::vector<u64> sorted_parents(parents);
  std::sort(sorted_parents.begin(), sorted_parents.end());
  for (u64 parent : sorted_parents) {
    if (parent < parent_seg.lower || parent > parent_seg.upper) {
      throw Error("lift_candidates: parent " + std::to_string(parent) + " outside segment " +
                  std::to_string(tau - 1));
    }
  }

  // H(s; r) mod p for r in [0, p).
  std::vector<u64> hmod(p, 0);
  {
    ScaledStream stream(c, p, 0, 1, wide);
    while (!stream.at_segment_end()) {
      stream.advance();
      hmod[stream.n()] = stream.residue_u64(1);
    }
  }

  // One carried pass through segment tau-1 collects each parent's unit digit:
  // with v_p(H(s; ñ)) >= s, pi(ñ) = (H(s; ñ) / p^s) mod p needs the scaled
  // residue mod p^((tau-2)*s + s + 1).
  const unsigned Kpar = (tau - 1) * s + 1;
  const unsigned scaled_floor = (tau - 1) * s;  // (tau-2)*s scaling + s from the parent bound
  std::vector<u64> pi(sorted_parents.size(), 0);
  {
    ScaledStream stream = ScaledStream::at_segment_start(c, p, tau - 2, Kpar, wide);
    std::size_t next = 0;
    while (next < sorted_parents.size() && !stream.at_segment_end()) {
      stream.advance();
      if (stream.n() != sorted_parents[next]) continue;
      if (!stream.divisible(1, scaled_floor)) {
        throw Error("lift_candidates: parent " + std::to_string(sorted_parents[next]) +
                    " lacks valuation >= " + std::to_string(s));
      }
      mpz_class digit = stream.residue(1);
      mpz_class floor_pow;
      mpz_ui_pow_ui(floor_pow.get_mpz_t(), static_cast<unsigned long>(p), scaled_floor);
      digit /= floor_pow;
      digit %= static_cast<unsigned long>(p);
      pi[next] = static_cast<u64>(digit.get_ui());
      ++next;
    }
    if (next < sorted_parents.size()) {
      throw Error("lift_candidates: parent scan ended early");
    }
  }

  // Children n = p*ñ + r are p-divisible iff H(s; r) = -pi(ñ) mod p; each
  // candidate's valuation is then pinned through a direct stream evaluation.
  const unsigned vcap = std::max(k, s + 1);
  for (std::size_t idx = 0; idx < sorted_parents.size(); ++idx) {
    const u64 target = (p - pi[idx]) % p;
    for (u64 r = 0; r < p; ++r) {
      if (hmod[r] != target) continue;
      const u64 n = p * sorted_parents[idx] + r;
      const StreamValuation sv = stream_valuation(c, p, n, vcap, wide);
      if (sv.v >= static_cast<long long>(k)) {  // exact >= k, or bound vcap >= k
        out.push_back({n, false, sv});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const JMember& a, const JMember& b) { return a.n < b.n; });
  return out;
}

std::vector<u64> JReport::nontrivial_with_zero() const {
  std::vector<u64> out{0};
  for (const JMember& m : members) {
    if (!m.trivial) out.push_back(m.n);
  }
  return out;
}

namespace {

// Lifted-mode enumeration for depth 1 with p >= s + 2. Segment 1 is scanned
// in full at modulus p^max(k, s+1) so each index yields both membership and
// parenthood; deeper segments only visit candidate blocks. The certificate is
// the first segment with no parents (no index of valuation >= s), which is
// exactly the clean-scan condition of the criterion at depth 1.
void enumerate_lifted(JReport& rep, const EnumerateOptions& opts, unsigned e_cap) {
  const Composition& c = rep.c;
  const u64 p = rep.p;
  const unsigned s = c.part(1);
  const unsigned k = rep.k;
  const unsigned K1 = std::max(k, s + 1);

  std::vector<u64> parents;
  try {
    check_budget(p, 1, 1, opts.budget);
    {
      const std::vector<StreamValuation> vals =
          depth1_segment1_valuations(c, p, K1, opts.wide);
      for (u64 n = 1; n < p; ++n) {
        if (vals[n].v >= static_cast<long long>(k)) rep.members.push_back({n, false, vals[n]});
        if (vals[n].v >= static_cast<long long>(s)) parents.push_back(n);
      }
    }
    rep.segments_scanned = 1;

    TauCertificate cert;
    cert.c = c;
    cert.p = p;
    cert.e_bound = e_cap;

    unsigned tau = 1;
    while (!parents.empty()) {
      ++tau;
      if (tau > e_cap && tau > opts.max_segment) break;
      // The lifting pass re-walks segment tau - 1 to read off parent residues.
      check_budget(p, tau - 1, 1, opts.budget);
      std::vector<JMember> candidates = lift_candidates(c, p, tau, 1, parents, opts.wide);
      std::vector<u64> next_parents;
      for (JMember cand : candidates) {
        if (cand.val.v >= static_cast<long long>(s)) next_parents.push_back(cand.n);
        if (tau <= opts.max_segment) {
          // lift_candidates caps its evaluation at max(1, s+1); a larger k needs
          // a sharper look before the membership test.
          if (k > s + 1 && !cand.val.exact) {
            cand.val = stream_valuation(c, p, cand.n, k, opts.wide);
          }
          if (cand.val.v >= static_cast<long long>(k)) rep.members.push_back(cand);
        }
      }
      if (tau <= opts.max_segment) rep.segments_scanned = tau;
      parents = std::move(next_parents);
    }

    if (parents.empty() && tau <= e_cap) {
      cert.tau = tau;
      cert.rhs = -static_cast<long long>(s);  // depth 1: wt == m
      cert.verified = true;
    }
    rep.certificate = cert;
    rep.complete = cert.verified && covered_segments(cert) <= opts.max_segment;
  } catch (const BudgetExceeded&) {
    // Whatever was gathered before the budget ran out stands, but no
    // completeness or certificate can be claimed.
    rep.certificate.reset();
    rep.complete = false;
  }
}

void enumerate_exhaustive(JReport& rep, const EnumerateOptions& opts, unsigned e_cap) {
  const Composition& c = rep.c;
  const u64 p = rep.p;

  std::optional<TauCertificate> cert;
  try {
    cert = find_tau(c, p, e_cap, opts.budget, opts.wide);
  } catch (const BudgetExceeded&) {
    cert.reset();
  }

  unsigned scan_to = opts.max_segment;
  if (cert && cert->verified) {
    scan_to = std::min(scan_to, covered_segments(*cert));
  }
  unsigned scanned = 0;
  try {
    for (unsigned tau = 1; tau <= scan_to; ++tau) {
      check_budget(p, tau, c.depth(), opts.budget);
      for (JMember m : scan_segment(c, p, tau, rep.k, opts.wide)) {
        if (m.trivial) continue;  // indices below the depth are added up front
        rep.members.push_back(m);
      }
      scanned = tau;
    }
  } catch (const BudgetExceeded&) {
    // Partial scans are reported honestly as incomplete.
  }
  rep.segments_scanned = scanned;
  rep.certificate = cert;
  rep.complete = cert && cert->verified && covered_segments(*cert) <= scanned;
}

}  // namespace

JReport enumerate_jset(const Composition& c, u64 p, unsigned k, const EnumerateOptions& opts) {
  require_prime(p, "enumerate_jset");
  if (k == 0) throw Error("enumerate_jset: divisibility exponent must be at least 1");
  if (opts.max_segment == 0) throw Error("enumerate_jset: max_segment must be at least 1");

  JReport rep;
  rep.c = c;
  rep.p = p;
  rep.k = k;
  rep.members.push_back({0, true, {false, static_cast<long long>(k)}});
  for (u64 n = 1; n < c.depth(); ++n) {
    rep.members.push_back({n, true, {false, static_cast<long long>(k)}});
  }

  const unsigned e_cap = opts.e != 0 ? opts.e : std::max(opts.max_segment + 1, 2u);
  const bool liftable = c.depth() == 1 && p >= c.part(1) + 2;
  ScanStrategy strategy = opts.strategy;
  if (strategy == ScanStrategy::Auto) {
    strategy = liftable ? ScanStrategy::Lifted : ScanStrategy::Exhaustive;
  } else if (strategy == ScanStrategy::Lifted && !liftable) {
    strategy = ScanStrategy::Exhaustive;  // documented fallback
  }
  rep.strategy = strategy;

  if (strategy == ScanStrategy::Lifted) {
    enumerate_lifted(rep, opts, e_cap);
  } else {
    enumerate_exhaustive(rep, opts, e_cap);
  }

  std::sort(rep.members.begin(), rep.members.end(),
            [](const JMember& a, const JMember& b) { return a.n < b.n; });
  return rep;
}

std::vector<u64> extract_T(const std::vector<u64>& j1_members, u64 p, unsigned s) {
  if (p < 3 || p % 2 == 0) throw Error("extract_T: p must be an odd prime");
  std::set<u64> rest;
  for (u64 n : j1_members) {
    if (n >= p) throw Error("extract_T: member " + std::to_string(n) + " outside segment 1");
    if (n != 0) rest.insert(n);
  }
  rest.erase(p - 1);
  if (s % 2 == 0) rest.erase((p - 1) / 2);
  for (u64 r : rest) {
    if (rest.count(p - 1 - r) == 0) {
      throw AsymmetricSet("extract_T: member " + std::to_string(r) + " has no partner " +
                          std::to_string(p - 1 - r));
    }
  }
  std::vector<u64> out;
  for (u64 r : rest) {
    if (2 * r <= p - 1) out.push_back(r);
  }
  return out;
}

ReservedSetRule ReservedSetRule::automatic(const Composition& c) {
  if (!c.homogeneous()) {
    throw RuleUnavailable("no reserved-set rule for mixed compositions; supply a custom one");
  }
  if (c.depth() == 1) {
    return c.part(1) % 2 == 1 ? depth1_odd() : depth1_even();
  }
  return homogeneous();
}

std::vector<u64> reserved_set(const ReservedSetRule& rule, const Composition& c, u64 p) {
  require_prime(p, "reserved_set");
  using Kind = ReservedSetRule::Kind;
  if (rule.kind == Kind::Custom) {
    if (!rule.provider) throw RuleUnavailable("custom reserved-set rule missing its provider");
    std::vector<u64> out = rule.provider(c, p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  if (!c.homogeneous()) {
    throw RuleUnavailable("reserved sets are only known for homogeneous compositions");
  }
  const unsigned s = c.part(1);
  const unsigned d = c.depth();
  if (rule.kind == Kind::Depth1Odd && (d != 1 || s % 2 == 0)) {
    throw RuleUnavailable("depth1-odd rule needs a single odd part");
  }
  if (rule.kind == Kind::Depth1Even && (d != 1 || s % 2 == 1)) {
    throw RuleUnavailable("depth1-even rule needs a single even part");
  }
  if (p == 2) throw RuleUnavailable("reserved sets need an odd prime");

  std::set<u64> out{0, p - 1};
  if (s % 2 == 0) {
    for (unsigned i = 0; i < d; ++i) out.insert((p - 1) / 2 + i);
  }
  return std::vector<u64>(out.begin(), out.end());
}

}  // namespace mhs

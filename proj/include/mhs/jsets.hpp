#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mhs/composition.hpp"
#include "mhs/criterion.hpp"
#include "mhs/stream.hpp"

namespace mhs {

// G_tau = [p^(tau-1), p^tau), the tau-th block of indices (tau >= 1).
struct Segment {
  unsigned tau = 0;
  u64 lower = 0;
  u64 upper = 0;  // inclusive

  static Segment of(u64 p, unsigned tau);
};

// One index n with v_p(H(c; n)) established to be >= the queried k.
// Trivial members are the n < depth where the sum is empty (and hence 0).
struct JMember {
  u64 n = 0;
  bool trivial = false;
  StreamValuation val{};  // exact valuation when known, otherwise a lower bound
};

// All n in G_tau with v_p(H(c; n)) >= k, ascending. Indices below the depth
// are included with trivial=true when the segment contains them.
std::vector<JMember> scan_segment(const Composition& c, u64 p, unsigned tau, unsigned k,
                                  WidePolicy wide = WidePolicy::Auto);

// Depth-1 only: the members of G_tau (tau >= 2) reachable from the given
// parent indices of G_(tau-1). A child n = p*ñ + r is p-divisible only if its
// parent satisfies v_p(H(s; ñ)) >= s, so passing all such parents makes the
// result complete; requires p >= s + 2 so that the block decomposition
// H(s; p*ñ + r) = p^(-s) H(s; ñ) + H(s; r) holds mod p.
std::vector<JMember> lift_candidates(const Composition& c, u64 p, unsigned tau, unsigned k,
                                     const std::vector<u64>& parents,
                                     WidePolicy wide = WidePolicy::Auto);

enum class ScanStrategy { Auto, Exhaustive, Lifted };

struct EnumerateOptions {
  unsigned max_segment = 2;
  ScanStrategy strategy = ScanStrategy::Auto;
  unsigned e = 0;  // certificate search cap; 0 means max(max_segment + 1, 2)
  Budget budget{};
  WidePolicy wide = WidePolicy::Auto;
};

struct JReport {
  Composition c;
  u64 p = 0;
  unsigned k = 1;
  std::vector<JMember> members;  // ascending by n; starts with trivial 0
  unsigned segments_scanned = 0;
  std::optional<TauCertificate> certificate;
  ScanStrategy strategy = ScanStrategy::Exhaustive;  // strategy actually used
  bool complete = false;  // certificate bounds all members within the scan

  // {0} plus the nontrivial member indices, ascending.
  std::vector<u64> nontrivial_with_zero() const;
};

// Joins trivial members, segment scans for tau = 1..max_segment, and a
// finiteness certificate. Lifted strategy (depth 1) prunes segments tau >= 2
// to candidate blocks above parents and synthesizes the certificate from the
// first parent-free segment; Auto picks it whenever applicable. Segments
// beyond what a verified certificate allows are skipped as provably empty.
JReport enumerate_jset(const Composition& c, u64 p, unsigned k,
                       const EnumerateOptions& opts = {});

// T(s|p): the below-midpoint representatives of the segment-1 members after
// removing the reserved elements 0, p-1, and (even s only) (p-1)/2. The
// remainder must be closed under r -> p-1-r; pairs contribute their smaller
// element and (odd s) a self-paired midpoint contributes itself.
std::vector<u64> extract_T(const std::vector<u64>& j1_members, u64 p, unsigned s);

// Reserved sets RJ: the members every prime is expected to have.
struct ReservedSetRule {
  enum class Kind { Depth1Odd, Depth1Even, Homogeneous, Custom };
  Kind kind = Kind::Homogeneous;
  std::function<std::vector<u64>(const Composition&, u64)> provider;  // Custom only

  static ReservedSetRule depth1_odd() { return {Kind::Depth1Odd, nullptr}; }
  static ReservedSetRule depth1_even() { return {Kind::Depth1Even, nullptr}; }
  static ReservedSetRule homogeneous() { return {Kind::Homogeneous, nullptr}; }
  static ReservedSetRule custom(std::function<std::vector<u64>(const Composition&, u64)> fn) {
    return {Kind::Custom, std::move(fn)};
  }
  // Picks the rule matching the composition shape; RuleUnavailable otherwise.
  static ReservedSetRule automatic(const Composition& c);
};

// RJ(c; p) ascending. Homogeneous c = {s}^d with odd s: {0, p-1}; even s:
// {0} ∪ {(p-1)/2 + i : 0 <= i <= d-1} ∪ {p-1}. Depth-1 rules are the d=1
// case. RuleUnavailable when the rule does not fit the composition.
std::vector<u64> reserved_set(const ReservedSetRule& rule, const Composition& c, u64 p);

}  // namespace mhs

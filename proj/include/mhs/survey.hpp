#pragma once

#include <string>
#include <vector>

#include "mhs/jsets.hpp"

namespace mhs {

enum class Verdict { Equal, NotEqual, Inconclusive };

std::string verdict_name(Verdict v);                // "equal" | "not-equal" | "inconclusive"
Verdict verdict_from_name(const std::string& name);

// Outcome of comparing J(c|p) against the reserved set RJ(c; p).
struct PrimeResult {
  u64 p = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<u64> members;  // {0} plus nontrivial members found
  unsigned tau = 0;          // verified certificate segment; 0 when none
  long long elapsed_ms = 0;
};

struct SurveyOptions {
  unsigned max_segment = 2;
  unsigned e = 3;          // certificate search cap per prime
  unsigned workers = 1;
  std::string checkpoint_path;  // empty disables persistence
  Budget budget{};
  WidePolicy wide = WidePolicy::Auto;
  // 0 compares the full enumerated set against the reserved set. m >= 1
  // compares only members below p^m (the union of the trivial layer and the
  // first m segments) against the same rule's reserved set; the verdict is
  // then already definitive once those m segments are scanned, with no
  // finiteness certificate needed. A checkpoint store written under one mode
  // must not be resumed under another.
  unsigned union_m = 0;
};

// Decides J(c|p) == RJ(c; p). Any member outside RJ, or any RJ element the
// segment-1 scan rules out, settles NotEqual; set equality needs a complete
// enumeration to settle Equal, otherwise the verdict stays Inconclusive.
// With opts.union_m = m >= 1 the comparison is restricted to members below
// p^m as described on SurveyOptions.
PrimeResult decide_rj_equal(const Composition& c, u64 p, const ReservedSetRule& rule,
                            const SurveyOptions& opts = {});

// The primes a density survey runs over: wt + 2 <= p <= X + 1.
std::vector<u64> survey_primes(const Composition& c, u64 X);

struct DensityRecord {
  Composition c;
  u64 X = 0;
  u64 primes_total = 0;
  u64 primes_matching = 0;
  u64 primes_not_matching = 0;
  u64 primes_inconclusive = 0;
  std::vector<PrimeResult> verdicts;  // ascending by p

  // Percentage matching/total with two decimals, half-up: "63.40".
  std::string percent() const;
};

// Runs decide_rj_equal over every survey prime, optionally resuming from and
// appending to a line-delimited checkpoint store. Worker count affects wall
// time only, never the result.
DensityRecord density(const Composition& c, u64 X, const ReservedSetRule& rule,
                      const SurveyOptions& opts = {});

// Checkpoint records: one line per decided prime, self-describing fields.
struct CheckpointRecord {
  int schema_version = 1;
  std::string composition;
  u64 p = 0;
  std::string verdict;
  std::vector<u64> members;
  unsigned tau = 0;
  long long elapsed_ms = 0;
};

struct CheckpointLoad {
  std::vector<CheckpointRecord> records;
  bool dropped_partial = false;  // an unparseable final line was discarded
};

// Append one record (creates the file as needed).
void append_checkpoint(const std::string& path, const CheckpointRecord& record);

// Replace the store with exactly these records.
void save_checkpoint(const std::string& path, const std::vector<CheckpointRecord>& records);

// Load all records; a malformed final line is dropped with a flag, while a
// malformed earlier line raises StoreCorrupt with its index. A missing file
// loads as empty.
CheckpointLoad load_checkpoint(const std::string& path);

}  // namespace mhs

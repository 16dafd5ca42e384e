#include "mhs/survey.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace mhs {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal:
      return "equal";
    case Verdict::NotEqual:
      return "not-equal";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_name(const std::string& name) {
  if (name == "equal") return Verdict::Equal;
  if (name == "not-equal") return Verdict::NotEqual;
  if (name == "inconclusive") return Verdict::Inconclusive;
  throw Error("unknown verdict '" + name + "'");
}

PrimeResult decide_rj_equal(const Composition& c, u64 p, const ReservedSetRule& rule,
                            const SurveyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<u64> rj = reserved_set(rule, c, p);

  EnumerateOptions eopts;
  eopts.max_segment = opts.max_segment;
  eopts.e = opts.e;
  eopts.budget = opts.budget;
  eopts.wide = opts.wide;
  const JReport rep = enumerate_jset(c, p, 1, eopts);

  PrimeResult result;
  result.p = p;
  result.members = rep.nontrivial_with_zero();
  if (rep.certificate && rep.certificate->verified) result.tau = rep.certificate->tau;

  // Full-set mode compares everything we enumerated; union mode only the
  // members below p^m, which are final once m segments have been scanned.
  u64 bound = ~u64{0};
  bool equality_settled = rep.complete;
  if (opts.union_m >= 1) {
    if (!checked_pow(p, opts.union_m, bound)) bound = ~u64{0};
    equality_settled = rep.complete || rep.segments_scanned >= opts.union_m;
  }

  std::set<u64> have;
  for (u64 n : result.members) {
    if (n < bound) have.insert(n);
  }
  const std::set<u64> want(rj.begin(), rj.end());
  if (have == want) {
    result.verdict = equality_settled ? Verdict::Equal : Verdict::Inconclusive;
  } else {
    const bool extra_member =
        std::any_of(have.begin(), have.end(), [&](u64 n) { return want.count(n) == 0; });
    if (extra_member) {
      // A member outside the reserved set is certain whatever else remains
      // unscanned.
      result.verdict = Verdict::NotEqual;
    } else {
      // A reserved element is missing. All reserved elements are below p, so
      // a completed segment-1 scan has definitively excluded it.
      result.verdict =
          rep.segments_scanned >= 1 ? Verdict::NotEqual : Verdict::Inconclusive;
    }
  }

  const auto end = std::chrono::steady_clock::now();
  result.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
  return result;
}

std::vector<u64> survey_primes(const Composition& c, u64 X) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(X + 1)) {
    if (p >= c.weight() + 2) out.push_back(p);
  }
  return out;
}

std::string DensityRecord::percent() const {
  if (primes_total == 0) return "0.00";
  // Integer half-up rounding of 100 * matching / total to two decimals.
  const u64 scaled = (primes_matching * 10000 + primes_total / 2) / primes_total;
  std::string whole = std::to_string(scaled / 100);
  std::string frac = std::to_string(scaled % 100);
  if (frac.size() < 2) frac = "0" + frac;
  return whole + "." + frac;
}

namespace {

CheckpointRecord to_checkpoint(const Composition& c, const PrimeResult& r) {
  CheckpointRecord rec;
  rec.composition = c.str();
  rec.p = r.p;
  rec.verdict = verdict_name(r.verdict);
  rec.members = r.members;
  rec.tau = r.tau;
  rec.elapsed_ms = r.elapsed_ms;
  return rec;
}

PrimeResult from_checkpoint(const CheckpointRecord& rec) {
  PrimeResult r;
  r.p = rec.p;
  r.verdict = verdict_from_name(rec.verdict);
  r.members = rec.members;
  r.tau = rec.tau;
  r.elapsed_ms = rec.elapsed_ms;
  return r;
}

nlohmann::ordered_json record_to_json(const CheckpointRecord& rec) {
  nlohmann::ordered_json j;
  j["schema_version"] = rec.schema_version;
  j["composition"] = rec.composition;
  j["p"] = rec.p;
  j["verdict"] = rec.verdict;
  j["members"] = rec.members;
  j["tau"] = rec.tau;
  j["elapsed_ms"] = rec.elapsed_ms;
  return j;
}

CheckpointRecord record_from_json(const nlohmann::json& j) {
  CheckpointRecord rec;
  rec.schema_version = j.at("schema_version").get<int>();
  if (rec.schema_version != 1) {
    throw Error("unsupported checkpoint schema version " + std::to_string(rec.schema_version));
  }
  rec.composition = j.at("composition").get<std::string>();
  rec.p = j.at("p").get<u64>();
  rec.verdict = j.at("verdict").get<std::string>();
  verdict_from_name(rec.verdict);  // validate
  rec.members = j.at("members").get<std::vector<u64>>();
  rec.tau = j.at("tau").get<unsigned>();
  rec.elapsed_ms = j.at("elapsed_ms").get<long long>();
  return rec;
}

}  // namespace

void append_checkpoint(const std::string& path, const CheckpointRecord& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("checkpoint store '" + path + "' is not writable");
  out << record_to_json(record).dump() << "\n";
}

void save_checkpoint(const std::string& path, const std::vector<CheckpointRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("checkpoint store '" + path + "' is not writable");
  for (const CheckpointRecord& rec : records) {
    out << record_to_json(rec).dump() << "\n";
  }
}

CheckpointLoad load_checkpoint(const std::string& path) {
  CheckpointLoad result;
  std::ifstream in(path);
  if (!in) return result;  // absent store = nothing done yet

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      result.records.push_back(record_from_json(j));
    } catch (const std::exception& e) {
      if (i + 1 == lines.size()) {
        // A torn final line means the writer died mid-append; recompute it.
        result.dropped_partial = true;
        return result;
      }
      throw StoreCorrupt(std::string("checkpoint store '") + path + "': " + e.what(), i);
    }
  }
  return result;
}

DensityRecord density(const Composition& c, u64 X, const ReservedSetRule& rule,
                      const SurveyOptions& opts) {
  if (X < c.weight() + 3) throw Error("density: X must be at least weight + 3");

  std::map<u64, PrimeResult> done;
  if (!opts.checkpoint_path.empty()) {
    const CheckpointLoad load = load_checkpoint(opts.checkpoint_path);
    if (load.dropped_partial) {
      std::cerr << "warning: dropped a partially written final record in '"
                << opts.checkpoint_path << "'\n";
    }
    for (const CheckpointRecord& rec : load.records) {
      if (rec.composition == c.str()) done[rec.p] = from_checkpoint(rec);
    }
  }

  const std::vector<u64> pool = survey_primes(c, X);
  std::vector<u64> todo;
  for (u64 p : pool) {
    if (done.find(p) == done.end()) todo.push_back(p);
  }

  std::vector<PrimeResult> fresh(todo.size());
  if (!todo.empty()) {
    const unsigned workers = std::max(1u, std::min<unsigned>(
        opts.workers, static_cast<unsigned>(todo.size())));
    std::atomic<std::size_t> next{0};
    std::mutex append_mutex;
    std::vector<std::exception_ptr> failures(workers);

    auto run = [&](unsigned worker_id) {
      try {
        while (true) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= todo.size()) return;
          fresh[idx] = decide_rj_equal(c, todo[idx], rule, opts);
          if (!opts.checkpoint_path.empty()) {
            std::lock_guard<std::mutex> lock(append_mutex);
            append_checkpoint(opts.checkpoint_path, to_checkpoint(c, fresh[idx]));
          }
        }
      } catch (...) {
        failures[worker_id] = std::current_exception();
      }
    };

    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
      for (std::thread& th : threads) th.join();
    }
    for (const std::exception_ptr& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  for (const PrimeResult& r : fresh) done[r.p] = r;

  DensityRecord record;
  record.c = c;
  record.X = X;
  for (u64 p : pool) {
    const PrimeResult& r = done.at(p);
    record.verdicts.push_back(r);
    ++record.primes_total;
    switch (r.verdict) {
      case Verdict::Equal:
        ++record.primes_matching;
        break;
      case Verdict::NotEqual:
        ++record.primes_not_matching;
        break;
      case Verdict::Inconclusive:
        ++record.primes_inconclusive;
        break;
    }
  }
  return record;
}

}  // namespace mhs

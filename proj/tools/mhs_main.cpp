#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "mhs/composition.hpp"
#include "mhs/criterion.hpp"
#include "mhs/jsets.hpp"
#include "mhs/oracle.hpp"
#include "mhs/survey.hpp"

namespace {

using mhs::u64;
using nlohmann::ordered_json;

enum class Format { Text, Csv, Json };

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw mhs::Error("unknown format '" + name + "' (expected text, csv, or json)");
}

std::string join(const std::vector<u64>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string braced(const std::vector<u64>& xs) { return "{" + join(xs, ", ") + "}"; }

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// J(s|p^k) in display form.
std::string set_label(const mhs::Composition& c, u64 p, unsigned k) {
  std::string out = "J(" + c.str() + "|" + std::to_string(p);
  if (k > 1) out += "^" + std::to_string(k);
  out += ")";
  return out;
}

struct CommonFlags {
  std::string format = "text";
  u64 max_scan = 1'000'000'000ull;
  bool force = false;
  bool fast_only = false;

  mhs::Budget budget() const { return mhs::Budget{max_scan, force}; }
  mhs::WidePolicy wide() const {
    return fast_only ? mhs::WidePolicy::FastOnly : mhs::WidePolicy::Auto;
  }
};

int cmd_eval(const std::string& s_text, u64 n, u64 p, bool has_p, const CommonFlags& flags) {
  const mhs::Composition c = mhs::Composition::parse(s_text);
  const mpq_class value = mhs::exact_mhs(c, n);
  mhs::Valuation val;
  if (has_p) {
    if (!mhs::is_prime(p)) throw mhs::Error("p must be prime");
    val = mhs::rational_val(value, p);
  }
  const std::string value_text = value.get_str();
  const std::string val_text = !has_p ? "" : (val.finite ? std::to_string(val.v) : "+inf");

  switch (parse_format(flags.format)) {
    case Format::Text:
      std::cout << "H(" << c.str() << ";" << n << ") = " << value_text << "\n";
      if (has_p) {
        std::cout << "v_" << p << "(H(" << c.str() << ";" << n << ")) = " << val_text << "\n";
      }
      break;
    case Format::Csv:
      std::cout << "composition,n,value,p,valuation\n";
      std::cout << csv_field(c.str()) << "," << n << "," << csv_field(value_text) << ","
                << (has_p ? std::to_string(p) : "") << "," << val_text << "\n";
      break;
    case Format::Json: {
      ordered_json j;
      j["composition"] = c.str();
      j["n"] = n;
      j["value"] = value_text;
      if (has_p) {
        j["p"] = p;
        if (val.finite) {
          j["valuation"] = val.v;
        } else {
          j["valuation"] = nullptr;
        }
      }
      std::cout << j.dump() << "\n";
      break;
    }
  }
  return 0;
}

ordered_json certificate_json(const std::optional<mhs::TauCertificate>& cert) {
  if (!cert) return nullptr;
  ordered_json j;
  j["verified"] = cert->verified;
  if (cert->verified) {
    j["tau"] = cert->tau;
    j["rhs"] = cert->rhs;
  }
  j["e"] = cert->e_bound;
  return j;
}

int cmd_jset(const std::string& s_text, u64 p, unsigned k, unsigned max_segment,
             const std::string& strategy_name, unsigned e, bool include_trivial,
             const CommonFlags& flags) {
  const mhs::Composition c = mhs::Composition::parse(s_text);
  mhs::EnumerateOptions opts;
  opts.max_segment = max_segment;
  opts.e = e;
  opts.budget = flags.budget();
  opts.wide = flags.wide();
  if (strategy_name == "auto") {
    opts.strategy = mhs::ScanStrategy::Auto;
  } else if (strategy_name == "exhaustive") {
    opts.strategy = mhs::ScanStrategy::Exhaustive;
  } else if (strategy_name == "lifted") {
    opts.strategy = mhs::ScanStrategy::Lifted;
  } else {
    throw mhs::Error("unknown strategy '" + strategy_name + "'");
  }

  const mhs::JReport rep = mhs::enumerate_jset(c, p, k, opts);
  std::vector<u64> shown;
  if (include_trivial) {
    for (const mhs::JMember& m : rep.members) shown.push_back(m.n);
  } else {
    shown = rep.nontrivial_with_zero();
  }
  const std::string status = rep.complete ? "complete" : "inconclusive";
  const std::string strat =
      rep.strategy == mhs::ScanStrategy::Lifted ? "lifted" : "exhaustive";

  switch (parse_format(flags.format)) {
    case Format::Text:
      std::cout << set_label(c, p, k) << " = " << braced(shown) << "\n";
      if (rep.certificate && rep.certificate->verified) {
        std::cout << "certificate: tau=" << rep.certificate->tau
                  << ", rhs=" << rep.certificate->rhs << ", verified\n";
      } else {
        std::cout << "certificate: none (search cap e="
                  << (rep.certificate ? rep.certificate->e_bound : e) << ")\n";
      }
      std::cout << "status: " << status << " (" << rep.segments_scanned
                << " segments scanned, " << strat << " strategy)\n";
      break;
    case Format::Csv:
      std::cout << "composition,p,k,members,tau,status,strategy\n";
      std::cout << csv_field(c.str()) << "," << p << "," << k << "," << join(shown, ";") << ","
                << (rep.certificate && rep.certificate->verified
                        ? std::to_string(rep.certificate->tau)
                        : "")
                << "," << status << "," << strat << "\n";
      break;
    case Format::Json: {
      ordered_json j;
      j["composition"] = c.str();
      j["p"] = p;
      j["k"] = k;
      j["members"] = shown;
      j["certificate"] = certificate_json(rep.certificate);
      j["segments_scanned"] = rep.segments_scanned;
      j["status"] = status;
      j["strategy"] = strat;
      std::cout << j.dump() << "\n";
      break;
    }
  }
  return rep.complete ? 0 : 2;
}

int cmd_tau(const std::string& s_text, u64 p, unsigned e, const CommonFlags& flags) {
  const mhs::Composition c = mhs::Composition::parse(s_text);
  const mhs::TauCertificate cert = mhs::find_tau(c, p, e, flags.budget(), flags.wide());

  switch (parse_format(flags.format)) {
    case Format::Text:
      if (cert.verified) {
        std::cout << "tau(" << c.str() << "|" << p << ") = " << cert.tau
                  << " (rhs=" << cert.rhs << ")\n";
      } else {
        std::cout << "tau(" << c.str() << "|" << p << "): inconclusive, no clean segment up to e="
                  << cert.e_bound << "\n";
      }
      break;
    case Format::Csv:
      std::cout << "composition,p,tau,rhs,verified,e\n";
      std::cout << csv_field(c.str()) << "," << p << ","
                << (cert.verified ? std::to_string(cert.tau) : "") << ","
                << (cert.verified ? std::to_string(cert.rhs) : "") << ","
                << (cert.verified ? "true" : "false") << "," << cert.e_bound << "\n";
      break;
    case Format::Json: {
      ordered_json j;
      j["composition"] = c.str();
      j["p"] = p;
      j["certificate"] = certificate_json(cert);
      std::cout << j.dump() << "\n";
      break;
    }
  }
  return cert.verified ? 0 : 2;
}

int cmd_table(const std::string& s_text, u64 pmax, const CommonFlags& flags) {
  const mhs::Composition c = mhs::Composition::parse(s_text);
  if (c.depth() != 1) throw mhs::Error("table requires a depth-1 composition");
  const unsigned s = c.part(1);

  struct Row {
    u64 p;
    std::vector<u64> T;
  };
  std::vector<Row> rows;
  for (u64 p : mhs::primes_up_to(pmax)) {
    std::vector<u64> members;
    for (const mhs::JMember& m : mhs::scan_segment(c, p, 1, 1, flags.wide())) {
      members.push_back(m.n);
    }
    if (members.empty()) continue;
    const std::vector<u64> T = mhs::extract_T(members, p, s);
    if (T.empty()) continue;
    rows.push_back({p, T});
  }

  switch (parse_format(flags.format)) {
    case Format::Text:
      std::cout << "p T(" << s << "|p)\n";
      for (const Row& row : rows) std::cout << row.p << " " << braced(row.T) << "\n";
      break;
    case Format::Csv:
      std::cout << "p,T\n";
      for (const Row& row : rows) std::cout << row.p << "," << join(row.T, ";") << "\n";
      break;
    case Format::Json: {
      ordered_json j;
      j["s"] = s;
      j["pmax"] = pmax;
      j["rows"] = ordered_json::array();
      for (const Row& row : rows) {
        ordered_json r;
        r["p"] = row.p;
        r["T"] = row.T;
        j["rows"].push_back(r);
      }
      std::cout << j.dump() << "\n";
      break;
    }
  }
  return 0;
}

int cmd_density(const std::string& s_text, u64 X, unsigned max_segment, unsigned e,
                unsigned workers, unsigned union_m, const std::string& cache,
                const CommonFlags& flags) {
  const mhs::Composition c = mhs::Composition::parse(s_text);
  const mhs::ReservedSetRule rule = mhs::ReservedSetRule::automatic(c);

  mhs::SurveyOptions opts;
  opts.max_segment = max_segment;
  opts.e = e;
  opts.workers = workers;
  opts.union_m = union_m;
  opts.checkpoint_path = cache;
  opts.budget = flags.budget();
  opts.wide = flags.wide();

  const mhs::DensityRecord record = mhs::density(c, X, rule, opts);

  switch (parse_format(flags.format)) {
    case Format::Text:
      std::cout << "density(" << c.str() << " | X=" << X << "): " << record.primes_matching << "/"
                << record.primes_total << " = " << record.percent() << "% matching\n";
      std::cout << "not matching: " << record.primes_not_matching
                << ", inconclusive: " << record.primes_inconclusive << "\n";
      break;
    case Format::Csv:
      std::cout << "composition,X,total,matching,not_matching,inconclusive,percent\n";
      std::cout << csv_field(c.str()) << "," << X << "," << record.primes_total << ","
                << record.primes_matching << "," << record.primes_not_matching << ","
                << record.primes_inconclusive << "," << record.percent() << "\n";
      break;
    case Format::Json: {
      ordered_json j;
      j["composition"] = c.str();
      j["X"] = X;
      j["primes_total"] = record.primes_total;
      j["matching"] = record.primes_matching;
      j["not_matching"] = record.primes_not_matching;
      j["inconclusive"] = record.primes_inconclusive;
      j["percent"] = record.percent();
      j["verdicts"] = ordered_json::array();
      for (const mhs::PrimeResult& r : record.verdicts) {
        ordered_json v;
        v["p"] = r.p;
        v["verdict"] = mhs::verdict_name(r.verdict);
        v["members"] = r.members;
        v["tau"] = r.tau;
        j["verdicts"].push_back(v);
      }
      std::cout << j.dump() << "\n";
      break;
    }
  }
  return record.primes_inconclusive > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiple harmonic sum congruence calculator"};
  app.require_subcommand(1);
  std::function<int()> action;

  CommonFlags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", flags.format, "Output format: text, csv, or json")
        ->default_str("text");
    cmd->add_option("--max-scan", flags.max_scan,
                    "Largest predicted per-segment scan size accepted without --force");
    cmd->add_flag("--force", flags.force, "Ignore the scan budget");
    cmd->add_flag("--fast-only", flags.fast_only,
                  "Fail instead of switching to arbitrary-precision moduli");
  };

  // eval
  {
    auto* cmd = app.add_subcommand("eval", "Evaluate H(s;n) exactly, optionally with v_p");
    auto s_text = std::make_shared<std::string>();
    auto n = std::make_shared<u64>(0);
    auto p = std::make_shared<u64>(0);
    cmd->add_option("--s", *s_text, "Composition, e.g. 2,3 or 2^4")->required();
    cmd->add_option("--n", *n, "Upper summation index")->required();
    auto* p_opt = cmd->add_option("--p", *p, "Prime for the valuation");
    add_common(cmd);
    cmd->final_callback([&action, &flags, s_text, n, p, p_opt]() {
      action = [&flags, s_text, n, p, p_opt]() {
        return cmd_eval(*s_text, *n, *p, p_opt->count() > 0, flags);
      };
    });
  }

  // jset
  {
    auto* cmd = app.add_subcommand("jset", "Enumerate the p-divisible set J(s|p^k)");
    auto s_text = std::make_shared<std::string>();
    auto p = std::make_shared<u64>(0);
    auto k = std::make_shared<unsigned>(1);
    auto max_segment = std::make_shared<unsigned>(2);
    auto strategy = std::make_shared<std::string>("auto");
    auto e = std::make_shared<unsigned>(0);
    auto include_trivial = std::make_shared<bool>(false);
    cmd->add_option("--s", *s_text, "Composition")->required();
    cmd->add_option("--p", *p, "Prime")->required();
    cmd->add_option("--k", *k, "Divisibility exponent (default 1)");
    cmd->add_option("--max-segment", *max_segment, "Deepest segment to scan (default 2)");
    cmd->add_option("--strategy", *strategy, "auto, exhaustive, or lifted");
    cmd->add_option("--e", *e, "Certificate search cap (default max-segment+1)");
    cmd->add_flag("--include-trivial", *include_trivial,
                  "List the trivial members 1..d-1 as well");
    add_common(cmd);
    cmd->final_callback([&action, &flags, s_text, p, k, max_segment, strategy, e,
                         include_trivial]() {
      action = [&flags, s_text, p, k, max_segment, strategy, e, include_trivial]() {
        return cmd_jset(*s_text, *p, *k, *max_segment, *strategy, *e, *include_trivial, flags);
      };
    });
  }

  // tau
  {
    auto* cmd = app.add_subcommand("tau", "Find the first clean segment certificate");
    auto s_text = std::make_shared<std::string>();
    auto p = std::make_shared<u64>(0);
    auto e = std::make_shared<unsigned>(8);
    cmd->add_option("--s", *s_text, "Composition")->required();
    cmd->add_option("--p", *p, "Prime")->required();
    cmd->add_option("--e", *e, "Search cap (default 8)");
    add_common(cmd);
    cmd->final_callback([&action, &flags, s_text, p, e]() {
      action = [&flags, s_text, p, e]() { return cmd_tau(*s_text, *p, *e, flags); };
    });
  }

  // table
  {
    auto* cmd = app.add_subcommand("table", "List primes with non-empty T(s|p)");
    auto s_text = std::make_shared<std::string>();
    auto pmax = std::make_shared<u64>(0);
    cmd->add_option("--s", *s_text, "Depth-1 composition")->required();
    cmd->add_option("--pmax", *pmax, "Largest prime to include")->required();
    add_common(cmd);
    cmd->final_callback([&action, &flags, s_text, pmax]() {
      action = [&flags, s_text, pmax]() { return cmd_table(*s_text, *pmax, flags); };
    });
  }

  // density
  {
    auto* cmd = app.add_subcommand("density", "Survey J(s|p) == RJ(s;p) over primes up to X");
    auto s_text = std::make_shared<std::string>();
    auto X = std::make_shared<u64>(0);
    auto max_segment = std::make_shared<unsigned>(2);
    auto e = std::make_shared<unsigned>(3);
    auto workers = std::make_shared<unsigned>(1);
    auto union_m = std::make_shared<unsigned>(0);
    auto cache = std::make_shared<std::string>();
    if (const char* env = std::getenv("MHS_CACHE")) *cache = env;
    cmd->add_option("--s", *s_text, "Composition")->required();
    cmd->add_option("--X", *X, "Prime cutoff")->required();
    cmd->add_option("--max-segment", *max_segment, "Deepest segment per prime (default 2)");
    cmd->add_option("--e", *e, "Certificate search cap per prime (default 3)");
    cmd->add_option("--workers", *workers, "Worker threads (default 1)");
    cmd->add_option("--union-m", *union_m,
                    "Compare only members below p^M against the reserved set "
                    "(0 = compare the full enumerated set; default 0)");
    cmd->add_option("--cache", *cache,
                    "Checkpoint store path (default from MHS_CACHE; empty disables)");
    add_common(cmd);
    cmd->final_callback([&action, &flags, s_text, X, max_segment, e, workers, union_m, cache]() {
      action = [&flags, s_text, X, max_segment, e, workers, union_m, cache]() {
        return cmd_density(*s_text, *X, *max_segment, *e, *workers, *union_m, *cache, flags);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    return action ? action() : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

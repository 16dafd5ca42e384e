#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "mhs/composition.hpp"
#include "mhs/criterion.hpp"
#include "mhs/jsets.hpp"
#include "mhs/oracle.hpp"
#include "mhs/survey.hpp"

namespace py = pybind11;
using namespace mhs;

namespace {

Composition to_composition(const std::string& text) { return Composition::parse(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multiple harmonic sum congruences: exact values, divisible sets, certificates";

  py::register_exception<Error>(m, "MhsError");

  m.def(
      "exact_mhs",
      [](const std::string& s, u64 n) { return exact_mhs(to_composition(s), n).get_str(); },
      py::arg("s"), py::arg("n"),
      "Exact value of H(s; n) as a rational string, e.g. '49/36'.");

  m.def(
      "exact_valuation",
      [](const std::string& s, u64 n, u64 p) -> std::optional<long long> {
        const Valuation v = exact_mhs_valuation(to_composition(s), n, p);
        if (!v.finite) return std::nullopt;
        return v.v;
      },
      py::arg("s"), py::arg("n"), py::arg("p"),
      "v_p of H(s; n); None when the sum vanishes.");

  m.def(
      "jset",
      [](const std::string& s, u64 p, unsigned k, unsigned max_segment) {
        EnumerateOptions opts;
        opts.max_segment = max_segment;
        const JReport rep = enumerate_jset(to_composition(s), p, k, opts);
        py::dict out;
        out["members"] = rep.nontrivial_with_zero();
        out["complete"] = rep.complete;
        out["segments_scanned"] = rep.segments_scanned;
        if (rep.certificate && rep.certificate->verified) {
          out["tau"] = rep.certificate->tau;
        } else {
          out["tau"] = py::none();
        }
        return out;
      },
      py::arg("s"), py::arg("p"), py::arg("k") = 1, py::arg("max_segment") = 2,
      "Members of J(s|p^k): {0} plus nontrivial indices, with completeness info.");

  m.def(
      "find_tau",
      [](const std::string& s, u64 p, unsigned e) -> std::optional<unsigned> {
        const TauCertificate cert = find_tau(to_composition(s), p, e);
        if (!cert.verified) return std::nullopt;
        return cert.tau;
      },
      py::arg("s"), py::arg("p"), py::arg("e") = 8,
      "First clean segment index, or None when the search cap is reached.");

  m.def(
      "reserved_set",
      [](const std::string& s, u64 p) {
        const Composition c = to_composition(s);
        return reserved_set(ReservedSetRule::automatic(c), c, p);
      },
      py::arg("s"), py::arg("p"), "RJ(s; p) for homogeneous compositions.");

  m.def(
      "extract_T",
      [](const std::string& s, u64 p) {
        const Composition c = to_composition(s);
        if (c.depth() != 1) throw Error("extract_T needs a depth-1 composition");
        std::vector<u64> members;
        for (const JMember& mem : scan_segment(c, p, 1, 1)) members.push_back(mem.n);
        return extract_T(members, p, c.part(1));
      },
      py::arg("s"), py::arg("p"), "T(s|p), the below-midpoint non-reserved representatives.");

  m.def(
      "density",
      [](const std::string& s, u64 X, unsigned workers, unsigned union_m) {
        const Composition c = to_composition(s);
        SurveyOptions opts;
        opts.workers = workers;
        opts.union_m = union_m;
        const DensityRecord rec = density(c, X, ReservedSetRule::automatic(c), opts);
        py::dict out;
        out["total"] = rec.primes_total;
        out["matching"] = rec.primes_matching;
        out["not_matching"] = rec.primes_not_matching;
        out["inconclusive"] = rec.primes_inconclusive;
        out["percent"] = rec.percent();
        return out;
      },
      py::arg("s"), py::arg("X"), py::arg("workers") = 1, py::arg("union_m") = 0,
      "Share of primes wt+2 <= p <= X+1 with J(s|p) equal to the reserved set; "
      "union_m = m >= 1 restricts the comparison to members below p^m.");
}

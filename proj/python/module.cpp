// Python bindings for the main operations: whole-request analysis plus the
// exact checkers that are useful interactively.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hypertoric/asymptotics.hpp"
#include "hypertoric/errors.hpp"
#include "hypertoric/lattice.hpp"
#include "hypertoric/quadratic.hpp"
#include "hypertoric/report.hpp"

namespace py = pybind11;
using namespace hypertoric;

namespace {

SubtorusSpec spec_from_columns(const std::vector<std::vector<long>>& columns) {
  if (columns.empty())
    throw Error(ErrorCode::ShapeMismatch, "at least one column is required");
  long n = static_cast<long>(columns.front().size());
  long d = static_cast<long>(columns.size());
  return make_spec(n, d, columns);
}

py::dict verdict_dict(const UnimodularVerdict& v) {
  py::dict out;
  out["holds"] = v.holds;
  if (v.witness) {
    py::list members;
    for (long p : v.witness->members) members.append(p);
    out["witness"] = members;
    out["witness_det"] = to_string(*v.witness_det);
  } else {
    out["witness"] = py::none();
    out["witness_det"] = py::none();
  }
  return out;
}

} // namespace

PYBIND11_MODULE(hypertoric, m) {
  m.doc() = "Invariants of toric hyperkaehler quotients";

  py::register_exception<Error>(m, "AnalysisError");

  m.def(
      "analyze",
      [](const std::string& request_json, int jobs) {
        AnalysisRequest request = parse_request_text(request_json);
        return run_analysis(request, jobs).dump(2);
      },
      py::arg("request_json"), py::arg("jobs") = 1,
      "Run a full analysis request (JSON text in, JSON report text out).");

  m.def(
      "check_unimodular",
      [](const std::vector<std::vector<long>>& columns) {
        return verdict_dict(check_hypothesis_unimodular(
            spec_from_columns(columns)));
      },
      py::arg("columns"),
      "Every maximal-rank column subset has determinant +-1; on failure the "
      "witness subset (1-based) and its determinant are reported.");

  m.def(
      "check_ac",
      [](const std::vector<std::vector<long>>& columns) {
        return verdict_dict(check_ac_condition(spec_from_columns(columns)));
      },
      py::arg("columns"),
      "Every column subset of size n is invertible (the asymptotically "
      "conical case); the witness is a singular subset.");

  m.def(
      "scan_sigma",
      [](const std::vector<std::vector<long>>& columns) {
        py::list rows;
        for (const ScanRow& row :
             run_sigma_scan(spec_from_columns(columns))) {
          py::dict e;
          e["family"] = row.family;
          e["zero_set"] = row.zero_set;
          e["dim_T_sigma"] = row.dim_T_sigma;
          e["transversal"] = row.transversal;
          e["cone_dim"] = row.cone_dim;
          e["decay_class"] = row.decay_class;
          e["slopes"] = row.slopes;
          e["error"] = row.error;
          rows.append(e);
        }
        return rows;
      },
      py::arg("columns"),
      "Cone dimensions realized by the standard deformation directions.");

  m.def(
      "serret_equivalent",
      [](const std::string& a, const std::string& b) {
        return serret_equivalent(parse_slope(a), parse_slope(b));
      },
      py::arg("a"), py::arg("b"),
      "Whether two quadratic slopes share a continued-fraction tail up to "
      "an integer Moebius change of chart.");

  m.def(
      "slope_canonical",
      [](const std::string& text) { return format_slope(parse_slope(text)); },
      py::arg("text"), "Canonical printed form of a quadratic slope.");

  m.def(
      "continued_fraction",
      [](const std::string& text) {
        auto cf = cf_expansion(parse_slope(text));
        auto strings = [](const std::vector<Int>& terms) {
          std::vector<std::string> out;
          out.reserve(terms.size());
          for (const Int& t : terms) out.push_back(to_string(t));
          return out;
        };
        return py::make_tuple(strings(cf.preperiod), strings(cf.period));
      },
      py::arg("text"),
      "Continued-fraction expansion as (preperiod, period) term lists; "
      "terms are decimal strings.");

  m.attr("__version__") = kToolVersion;
}

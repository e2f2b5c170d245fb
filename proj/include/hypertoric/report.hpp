#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypertoric/arrangement.hpp"
#include "hypertoric/fdcurv.hpp"
#include "hypertoric/lattice.hpp"

namespace hypertoric {

// Ordered maps keep key insertion order, which makes serialized reports
// byte-stable for a fixed request and seed.
using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

// One numeric probe of the quotient metric, in ambient flat coordinates
// (four per quaternionic coordinate: Re z, Im z, Re w, Im w).
struct ProbeRequest {
  std::string kind;              // "metric" | "curvature" | "decay"
  bool deformed = false;         // use the flow deformation of the metric
  bool project = true;           // move the point onto the level set first
  std::vector<double> point;     // base point, length 4d
  std::vector<double> direction; // decay only: ray direction, length 4d
  std::vector<double> radii;     // decay only: strictly increasing, >= 4
  std::string quantity = "MAX_SECTIONAL"; // decay only: or "V1"
};

// A parsed analysis request. The level is either an explicit lift or drawn
// from the seeded sampler; every random draw in a run flows from `seed`.
struct AnalysisRequest {
  SubtorusSpec subtorus;
  bool sample_zeta = false;
  std::uint64_t seed = 1;
  long sample_bound = 5;
  ZetaLift tau; // used when sample_zeta is false
  std::optional<SigmaSpec> sigma;
  std::vector<ProbeRequest> probes;
};

// Strict parse of the request document. Violations raise ParseError whose
// message carries the JSON pointer of the offending element.
AnalysisRequest parse_request(const Json& doc);
AnalysisRequest parse_request_text(const std::string& text);

// Full analysis: level resolution, regularity and basis certificates,
// strata, boundary descriptors, closed-form invariants, slope list, and
// the requested numeric probes (fanned out over `jobs` workers; results
// are aggregated in request order, so output does not depend on jobs).
// Individual probe failures are recorded in place; request-level problems
// throw. Deterministic for a fixed request and seed.
Json run_analysis(const AnalysisRequest& request, int jobs = 1);

// True when the analyzed level fails the regularity test (the front end
// maps this to its distinguished exit status).
bool report_is_singular(const Json& report);

// One row of a direction-family sweep.
struct ScanRow {
  std::string family;    // readable description of the direction
  std::string zero_set;  // I_sigma as "{...}"
  long dim_T_sigma = -1;
  bool transversal = false;
  long cone_dim = -1;          // deformed tangent-cone dimension
  std::string decay_class;     // FULL_DECAY / PARTIAL_DECAY
  std::string slopes;          // "a2/a1=sqrt(2); ..." (pairwise, canonical)
  std::string error;           // nonempty when this row failed; scan continues
};

// Sweeps the standard direction families, or an explicit labeled family.
std::vector<ScanRow> run_sigma_scan(const SubtorusSpec& spec);
std::vector<ScanRow> run_sigma_scan(
    const SubtorusSpec& spec,
    const std::vector<std::pair<std::string, SigmaSpec>>& family);

std::string scan_csv(const std::vector<ScanRow>& rows);

// Partition of slope texts into equivalence classes of the integral
// Moebius action; each class lists canonical forms, first entry is the
// representative. Input order decides class order and members keep it.
struct SlopeClasses {
  std::vector<std::vector<std::string>> classes;
};
SlopeClasses classify_slopes(const std::vector<std::string>& slopes);
Json classes_json(const SlopeClasses& classes);

// Decay samples as plot-ready CSV ("rho,value" rows).
std::string decay_csv(const DecayFit& fit);

// RFC-4180 field quoting.
std::string csv_field(const std::string& raw);

// Writes through a temporary name in the target directory and renames into
// place, so a failed run never leaves a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace hypertoric

#pragma once
#include <string>
#include <utility>
#include <vector>

#include "hypertoric/arrangement.hpp"
#include "hypertoric/lattice.hpp"
#include "hypertoric/quadratic.hpp"

namespace hypertoric {

// Coarse classification of the quotient metric at a level lift.
enum class MetricClass { SINGULAR, QAC, AC };

// Whether the sectional curvature of the deformed metric decays to zero in
// every direction at infinity, or only away from a bad boundary region.
enum class DecayClass { FULL_DECAY, PARTIAL_DECAY };

std::string to_string(MetricClass c);
std::string to_string(DecayClass c);

// Closed-form invariants of the quotient metric at the level lift tau,
// together with those of its order-one deformation in direction sigma.
struct InvariantReport {
  long dim_M = 0; // real dimension of the quotient
  MetricClass metric_class = MetricClass::SINGULAR;
  long volume_growth_undeformed = 0; // = dim_M
  long volume_growth_deformed = 0;   // = dim_M - 1
  long cone_dim_undeformed = 0;      // = dim_M
  long cone_dim_deformed = 0;        // dim_M - dim T_sigma + dim(T_sigma cap N)
  std::string cone_descriptor;       // shape of the deformed tangent cone
  DecayClass decay_class = DecayClass::PARTIAL_DECAY;

  // Diagnostics backing the classification above.
  SmoothnessVerdict smoothness; // witness data when metric_class is SINGULAR
  SigmaAnalysis sigma;          // closure analysis behind the cone dimension
};

// Curvature-decay classification with the printable bound.
struct DecayDetail {
  DecayClass decay_class = DecayClass::PARTIAL_DECAY;
  std::string bound; // decay rate in boundary coordinates
  std::string flag;  // nonempty warning in the partial case
};

// One pairwise slope of the boundary foliation directions.
struct SlopeEntry {
  std::pair<long, long> pair; // 1-based (i, j) with i < j and a_i != 0
  QuadraticSlope slope;       // a_j / a_i in canonical form
};

// One probe direction from the standard scan families, with the cone
// dimension of the corresponding deformation when it exists.
struct SigmaScanEntry {
  std::string family; // readable description of the direction vector
  SigmaSpec sigma;
  bool transversal = false;
  long cone_dim_deformed = -1; // filled only when transversal
};

// Computes every invariant in closed form. Requires a valid spec and a
// transversal sigma (throws NotTransversal otherwise); a level lift that
// fails the regularity test yields metric_class = SINGULAR with the
// witness retained in `smoothness`, never an exception.
InvariantReport invariant_report(const SubtorusSpec& spec, const ZetaLift& tau,
                                 const SigmaSpec& sigma);

// Decay class plus the bound string; throws NotTransversal.
DecayDetail decay_class_detail(const SubtorusSpec& spec, const SigmaSpec& sigma);

// For every ordered pair i < j with a_i != 0, the exact slope a_j / a_i.
// Every symbol name must parse as an element of a single real quadratic
// field Q(sqrt(D)); otherwise throws UnsupportedNumberField.
std::vector<SlopeEntry> kronecker_slopes(const SubtorusSpec& spec,
                                         const SigmaSpec& sigma);

// Sweeps the standard direction families (a prefix of Q-linearly
// independent irrational entries padded with zeros, single coordinate
// directions, and the diagonal direction) and records the cone dimension
// realized by each transversal member.
std::vector<SigmaScanEntry> scan_sigma_cone_dims(const SubtorusSpec& spec);

} // namespace hypertoric

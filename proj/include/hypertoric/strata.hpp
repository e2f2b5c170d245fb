#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypertoric/lattice.hpp"

namespace hypertoric {

// A coordinate subset I on which some positive-dimensional part of the
// subtorus acts trivially, maximal among subsets with the same stabilizer:
// enlarging I by any index strictly drops the stabilizer dimension.
struct StratumRecord {
  IndexSubset I;
  long dim_stabilizer = 0; // dimension of the stabilizer subtorus N_I
  long dim_V = 0;          // real dimension 4|I| of the coordinate subspace
};

// One boundary hypersurface of a manifold-with-fibered-corners descriptor.
// The record is purely combinatorial: model labels, dimensions, weight,
// and the level-set equations that cut the analyzed subset, as display text.
struct HypersurfaceRecord {
  std::string id;    // stable ASCII identifier, e.g. "H_1"
  std::string label; // human-readable name
  std::string base_desc;
  long base_dim = 0;
  std::string fiber_model;
  long fiber_dim = 0;
  Rat weight;            // 0 or 1/2
  bool foliated = false; // fibration replaced by a foliation on this face
  std::vector<std::string> equations;
  std::optional<IndexSubset> stratum; // originating coordinate subset
};

// Boundary combinatorics of a compactification: hypersurfaces, the strict
// precedence order between them, and the symbolic rule assembling the
// weighted total boundary function from the face-defining functions x_H.
struct CompactificationDescriptor {
  std::string kind; // "QAC" or "TN"
  long ambient_dim = 0;
  std::vector<HypersurfaceRecord> hypersurfaces;
  std::vector<std::pair<std::string, std::string>> order; // (lower, higher)
  std::string bdf_rule;
};

struct DescriptorCheck {
  bool ok = false;
  std::vector<std::string> problems;
};

// All stabilizer strata, sorted by size then lexicographically (compatible
// with inclusion); the full set {1..d} is always the last entry. Supports
// d <= 16 (exhaustive over subsets); throws PreconditionViolated beyond.
std::vector<StratumRecord> enumerate_strata(const SubtorusSpec& spec);

// Weight-0 descriptor with one hypersurface per stratum whose sphere at
// infinity meets the zero level of the subtorus moment map (equivalently
// dim N_I + |I| > d - n), plus the maximal radial hypersurface. A single
// hypersurface means the compactification is a manifold with boundary.
CompactificationDescriptor qac_compactification(const SubtorusSpec& spec);

// Four-hypersurface descriptor for the deformation direction sigma over
// the ambient product with Im H: faces 1 and 3 exist exactly when sigma
// has zero entries (I_sigma nonempty), face 2 carries the 2-sphere of Im H
// directions, and the maximal face 4 carries a foliation and square-root
// expansions. Throws NotTransversal when the direction lies in the
// subtorus algebra.
CompactificationDescriptor tn_compactification(const SubtorusSpec& spec,
                                               const SigmaSpec& sigma);

// Structural sanity: unique ids, a genuine strict partial order, weights
// in {0, 1/2} monotone along the order, and base/fiber dimensions summing
// to ambient_dim - 1 on every face.
DescriptorCheck validate_descriptor(const CompactificationDescriptor& desc);

// Graphviz export: one node per hypersurface labeled
// "name [nu=...] base=..., fiber=...", one edge per covering relation.
std::string to_dot(const CompactificationDescriptor& desc);

} // namespace hypertoric

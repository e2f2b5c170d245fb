#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypertoric/lattice.hpp"

namespace hypertoric {

// Rational lift of the reduction level: one triple tau_k for each column of
// U. Column k imposes the affine constraint <s, u_k> = tau_k on points
// s = (s^1, s^2, s^3) with s^i in Q^n; the three components never mix, so
// every constraint block cuts out a codimension-3 affine subspace.
struct ZetaLift {
  std::vector<std::array<Rat, 3>> tau;

  long d() const { return static_cast<long>(tau.size()); }
  static ZetaLift zero(long d) {
    ZetaLift z;
    z.tau.assign(static_cast<size_t>(d), {Rat(0), Rat(0), Rat(0)});
    return z;
  }
  bool operator==(const ZetaLift& o) const { return tau == o.tau; }
};

// Common solution set of the constraint blocks indexed by a column subset.
struct FlatSolve {
  bool empty = true;
  long dim = -1;          // 3 * (n - rank of the selected columns)
  std::vector<Rat> point; // 3n entries, component-major: (s^1 | s^2 | s^3)
};

// Result of the exact regularity test on the constraint configuration:
// pairwise-distinct blocks, no n+1 of them with a common point, and every
// n of them that do meet must select a Z^n-basis from the columns of U.
struct SmoothnessVerdict {
  bool distinct = false;
  std::optional<IndexSubset> duplicate_pair; // lex-least {k,l} cutting the same set
  std::optional<IndexSubset> excess_flat;    // n+1 distinct blocks with a common point
  std::optional<IndexSubset> bad_flat;       // n blocks meeting without a Z^n-basis
  bool smooth = false;                       // distinct && !excess_flat && !bad_flat
};

struct SampledLevel {
  ZetaLift tau;
  SmoothnessVerdict verdict; // always smooth on return
  long attempts = 0;         // number of draws consumed, including the hit
};

// Solves the 3|S| rational equations <s, u_k> = tau_k, k in S. Component i
// solves rows u_k . s^i = tau_k^i; the three systems share the coefficient
// matrix. Throws PreconditionViolated when S is empty or out of range.
FlatSolve hyperplane_solve(const SubtorusSpec& spec, const ZetaLift& tau,
                           const IndexSubset& S);

// Exhaustive exact test (intended for d up to ~12). All witnesses are the
// lexicographically least subsets of their kind.
SmoothnessVerdict smoothness_check(const SubtorusSpec& spec, const ZetaLift& tau);

// Draws integer tau entries uniformly from [-bound, bound] (denominator 1)
// until smoothness_check accepts, deterministically in the seed. Requires
// the subtorus to pass check_hypothesis_unimodular; throws
// PreconditionViolated otherwise and ExhaustedAttempts when the budget runs
// out (e.g. bound 0 forces tau = 0, which is never accepted once d > n).
SampledLevel sample_generic_zeta(const SubtorusSpec& spec, std::uint64_t seed,
                                 long bound, long max_attempts = 1000);

// The level class of tau: pairings with the canonical kernel basis columns,
// one triple per basis vector (length d - n). Lifts differing by a
// translation tau_k -> tau_k + <s, u_k> have equal coordinates because the
// kernel annihilates the rows of U.
std::vector<std::array<Rat, 3>> level_coordinates(const SubtorusSpec& spec,
                                                  const ZetaLift& tau);

// tau_k -> tau_k + <s, u_k> for s given component-major (3n entries). The
// constraint configuration moves by the global translation s, so every
// incidence invariant — and the level class — is unchanged.
ZetaLift translate_level(const SubtorusSpec& spec, const ZetaLift& tau,
                         const std::vector<Rat>& s);

} // namespace hypertoric

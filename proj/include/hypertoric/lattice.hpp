#pragma once
#include <optional>
#include <string>
#include <vector>

#include "hypertoric/exact.hpp"

namespace hypertoric {

// Integer matrix U (n x d) whose columns u_k are primitive and span Q^n.
// The columns define a subtorus of rank d - n via the kernel of U.
struct SubtorusSpec {
  long d = 0; // number of quaternionic coordinates (columns)
  long n = 0; // target rank (rows)
  IMat U;     // n x d
};

// Saturated sublattice of Z^ambient in canonical column-echelon form.
struct Sublattice {
  long ambient = 0;
  IMat basis; // ambient x rank, canonical (see canonical_column_basis)

  long rank() const { return basis.cols(); }
  bool is_canonical() const { return canonical_column_basis(basis) == basis; }
  bool is_saturated() const {
    return basis.cols() == 0 || maximal_minor_gcd(basis) == 1;
  }
};

// Subset I of the coordinate indices {1, ..., d} (1-based, sorted).
struct IndexSubset {
  std::vector<long> members;

  static IndexSubset of(std::vector<long> m);
  bool contains(long p) const;
  long size() const { return static_cast<long>(members.size()); }
  bool subset_of(const IndexSubset& other) const;
  std::vector<long> complement(long d) const; // 1-based complement
  std::string to_string() const;              // "{1,3}" or "{}"
  bool operator==(const IndexSubset& o) const { return members == o.members; }
  bool operator<(const IndexSubset& o) const { return members < o.members; }
};

// Direction vector a in R^d written over a declared basis of real constants
// beta_1 = 1, beta_2, ..., beta_J that are Q-linearly independent:
//   a_p = sum_j coeffs[p][j] * beta_j.
// Irrational entries must be declared through the symbol list; this is what
// makes closure dimensions computable exactly.
struct SigmaSymbol {
  std::string name; // "1", "sqrt(2)", or any label for an opaque constant
  double value = 0; // high-precision numeric value used by the metric lab
};

struct SigmaSpec {
  std::vector<SigmaSymbol> symbols; // symbols[0] must be the constant 1
  QMat coeffs;                      // d x J
};

struct SpecDiagnostics {
  bool valid = false;
  std::vector<long> nonprimitive_columns; // 1-based indices of bad columns
  bool full_rank = false;
  long rank = 0;
  std::string summary() const;
};

struct SigmaDiagnostics {
  bool valid = false;
  std::vector<std::string> problems;
};

struct UnimodularVerdict {
  bool holds = false;
  std::optional<IndexSubset> witness; // offending column subset (1-based)
  std::optional<Int> witness_det;     // 0 marks a linearly dependent subset
};

struct SigmaAnalysis {
  IndexSubset I_sigma;        // indices p with a_p = 0 (exact)
  long dim_T_sigma = 0;       // dimension of the closure torus of the flow
  long dim_T_sigma_cap_N = 0; // dimension of its intersection with N
  bool transversal = false;   // flow direction not inside the algebra of N
  Sublattice annihilator;     // {m in Z^d : m . a = 0}
};

// Confirms column primitivity and full rank, or lists every violation.
// Throws ShapeMismatch when the matrix dimensions disagree with (n, d).
SpecDiagnostics validate_subtorus_spec(const SubtorusSpec& spec);

SigmaDiagnostics validate_sigma_spec(const SubtorusSpec& spec, const SigmaSpec& sigma);

// Saturated integer kernel of U : Z^d -> Z^n; rank d - n; U * basis = 0.
// This canonical basis is the reference frame for all level coordinates.
Sublattice kernel_sublattice(const SubtorusSpec& spec);

// Holds iff every Q-linearly-independent n-subset of columns has
// determinant +-1; on failure returns one offending subset (lex-least).
UnimodularVerdict check_hypothesis_unimodular(const SubtorusSpec& spec);

// Holds iff EVERY n-subset of columns is a Z^n basis (independence
// included). Implies check_hypothesis_unimodular.
UnimodularVerdict check_ac_condition(const SubtorusSpec& spec);

// Saturated lattice ker(U) intersected with {t_p = 0 for p in I} and its
// rank: the Lie-algebra lattice of the stabilizer of points supported on I.
std::pair<long, Sublattice> stabilizer_dimension(const SubtorusSpec& spec,
                                                 const IndexSubset& I);

// Exact closure analysis of the direction a: zero set, closure-torus
// dimension d - rank{m : m.a = 0}, intersection with the subtorus algebra,
// and transversality. Throws SigmaZero when a = 0.
SigmaAnalysis sigma_analysis(const SubtorusSpec& spec, const SigmaSpec& sigma);

// Numeric value vector a (doubles) from the declared symbol values.
std::vector<double> sigma_numeric(const SigmaSpec& sigma);

// Convenience constructors used across the library and tests.
SubtorusSpec make_spec(long n, long d, const std::vector<std::vector<long>>& columns);
SigmaSpec sigma_from_rationals(const std::vector<Rat>& a);

void require_valid(const SubtorusSpec& spec); // throws PreconditionViolated

} // namespace hypertoric

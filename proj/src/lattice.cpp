#include "hypertoric/lattice.hpp"
#include "hypertoric/detail/subsets.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace hypertoric {

IndexSubset IndexSubset::of(std::vector<long> m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return IndexSubset{std::move(m)};
}

bool IndexSubset::contains(long p) const {
  return std::binary_search(members.begin(), members.end(), p);
}

bool IndexSubset::subset_of(const IndexSubset& other) const {
  return std::includes(other.members.begin(), other.members.end(),
                       members.begin(), members.end());
}

std::vector<long> IndexSubset::complement(long d) const {
  std::vector<long> out;
  for (long p = 1; p <= d; ++p)
    if (!contains(p)) out.push_back(p);
  return out;
}

std::string IndexSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) os << ',';
    os << members[i];
  }
  os << '}';
  return os.str();
}

std::string SpecDiagnostics::summary() const {
  if (valid) return "valid";
  std::ostringstream os;
  os << "invalid:";
  for (long c : nonprimitive_columns) os << " column " << c << " not primitive;";
  if (!full_rank) os << " rank " << rank << " below row count;";
  return os.str();
}

SpecDiagnostics validate_subtorus_spec(const SubtorusSpec& spec) {
  if (spec.U.rows() != spec.n || spec.U.cols() != spec.d)
    throw Error(ErrorCode::ShapeMismatch,
                "matrix is " + std::to_string(spec.U.rows()) + "x" +
                    std::to_string(spec.U.cols()) + ", declared " +
                    std::to_string(spec.n) + "x" + std::to_string(spec.d));
  if (spec.n < 1 || spec.n > spec.d)
    throw Error(ErrorCode::ShapeMismatch,
                "require 1 <= n <= d, got n=" + std::to_string(spec.n) +
                    ", d=" + std::to_string(spec.d));
  SpecDiagnostics diag;
  for (long k = 0; k < spec.d; ++k) {
    Int g = 0;
    for (long i = 0; i < spec.n; ++i)
      g = boost::multiprecision::gcd(g, spec.U.at(i, k));
    if (g != 1) diag.nonprimitive_columns.push_back(k + 1);
  }
  diag.rank = rank_of(spec.U);
  diag.full_rank = (diag.rank == spec.n);
  diag.valid = diag.nonprimitive_columns.empty() && diag.full_rank;
  return diag;
}

void require_valid(const SubtorusSpec& spec) {
  SpecDiagnostics diag = validate_subtorus_spec(spec);
  if (!diag.valid)
    throw Error(ErrorCode::PreconditionViolated, "spec " + diag.summary());
}

Sublattice kernel_sublattice(const SubtorusSpec& spec) {
  require_valid(spec);
  return Sublattice{spec.d, integer_kernel(spec.U)};
}

namespace {

// Visits n-subsets of {0,...,d-1} in lexicographic order; stops early when
// the visitor returns false.

} // namespace

UnimodularVerdict check_hypothesis_unimodular(const SubtorusSpec& spec) {
  require_valid(spec);
  UnimodularVerdict verdict;
  verdict.holds = true;
  detail::for_each_subset(spec.d, spec.n, [&](const std::vector<long>& idx) {
    IMat sub = spec.U.select_columns(idx);
    Int det = determinant(sub);
    if (det != 0 && det != 1 && det != -1) {
      verdict.holds = false;
      verdict.witness = detail::to_one_based(idx);
      verdict.witness_det = det;
      return false;
    }
    return true;
  });
  return verdict;
}

UnimodularVerdict check_ac_condition(const SubtorusSpec& spec) {
  require_valid(spec);
  UnimodularVerdict verdict;
  verdict.holds = true;
  detail::for_each_subset(spec.d, spec.n, [&](const std::vector<long>& idx) {
    IMat sub = spec.U.select_columns(idx);
    Int det = determinant(sub);
    if (det != 1 && det != -1) {
      verdict.holds = false;
      verdict.witness = detail::to_one_based(idx);
      verdict.witness_det = det;
      return false;
    }
    return true;
  });
  return verdict;
}

std::pair<long, Sublattice> stabilizer_dimension(const SubtorusSpec& spec,
                                                 const IndexSubset& I) {
  require_valid(spec);
  for (long p : I.members)
    if (p < 1 || p > spec.d)
      throw Error(ErrorCode::PreconditionViolated,
                  "index " + std::to_string(p) + " outside 1.." + std::to_string(spec.d));
  IMat B = integer_kernel(spec.U); // d x (d-n), saturated
  if (I.members.empty()) return {B.cols(), Sublattice{spec.d, B}};
  std::vector<long> rows;
  for (long p : I.members) rows.push_back(p - 1);
  // Solve rows_I(B) * x = 0 over Z; the image B * K is the intersection of
  // the kernel lattice with {t_p = 0 : p in I}. Both factors are saturated,
  // so the image is saturated as well.
  IMat K = integer_kernel(B.select_rows(rows));
  IMat basis = canonical_column_basis(B * K);
  return {basis.cols(), Sublattice{spec.d, basis}};
}

std::vector<double> sigma_numeric(const SigmaSpec& sigma) {
  std::vector<double> a(static_cast<size_t>(sigma.coeffs.rows()), 0.0);
  for (long p = 0; p < sigma.coeffs.rows(); ++p) {
    double v = 0;
    for (long j = 0; j < sigma.coeffs.cols(); ++j)
      v += static_cast<double>(sigma.coeffs.at(p, j)) *
           sigma.symbols[static_cast<size_t>(j)].value;
    a[static_cast<size_t>(p)] = v;
  }
  return a;
}

SigmaDiagnostics validate_sigma_spec(const SubtorusSpec& spec, const SigmaSpec& sigma) {
  SigmaDiagnostics diag;
  if (sigma.symbols.empty()) {
    diag.problems.push_back("symbol list is empty");
    return diag;
  }
  if (sigma.symbols[0].value != 1.0)
    diag.problems.push_back("first symbol must be the constant 1");
  if (sigma.coeffs.rows() != spec.d)
    diag.problems.push_back("coefficient rows (" + std::to_string(sigma.coeffs.rows()) +
                            ") disagree with d=" + std::to_string(spec.d));
  if (sigma.coeffs.cols() != static_cast<long>(sigma.symbols.size()))
    diag.problems.push_back("coefficient columns disagree with symbol count");
  std::set<double> values;
  for (const auto& s : sigma.symbols) {
    if (!std::isfinite(s.value))
      diag.problems.push_back("symbol '" + s.name + "' has non-finite value");
    if (!values.insert(s.value).second)
      diag.problems.push_back("symbol values are not distinct ('" + s.name + "')");
  }
  diag.valid = diag.problems.empty();
  return diag;
}

namespace {

void require_valid_sigma(const SubtorusSpec& spec, const SigmaSpec& sigma) {
  SigmaDiagnostics diag = validate_sigma_spec(spec, sigma);
  if (!diag.valid) {
    std::string msg = "sigma spec invalid:";
    for (const auto& p : diag.problems) msg += " " + p + ";";
    throw Error(ErrorCode::PreconditionViolated, msg);
  }
}

} // namespace

SigmaAnalysis sigma_analysis(const SubtorusSpec& spec, const SigmaSpec& sigma) {
  require_valid(spec);
  require_valid_sigma(spec, sigma);
  const QMat& C = sigma.coeffs;
  long d = spec.d;

  SigmaAnalysis out;
  std::vector<long> zero_rows;
  bool all_zero = true;
  for (long p = 0; p < d; ++p) {
    bool row_zero = true;
    for (long j = 0; j < C.cols(); ++j)
      if (C.at(p, j) != 0) { row_zero = false; break; }
    if (row_zero) zero_rows.push_back(p + 1);
    else all_zero = false;
  }
  if (all_zero) throw Error(ErrorCode::SigmaZero, "direction vector a is zero");
  out.I_sigma = IndexSubset::of(zero_rows);

  // Annihilator lattice {m in Z^d : m . a = 0}. Because the symbols are
  // Q-independent, m . a = 0 means C^T m = 0 componentwise.
  IMat ann = integer_kernel(C.transpose());
  out.annihilator = Sublattice{d, ann};
  out.dim_T_sigma = d - ann.cols();

  // Rational span of a is the column span of C; intersect with ker_Q(U)
  // via the rank formula dim(V cap W) = dim V + dim W - dim(V + W).
  IMat B = integer_kernel(spec.U);
  long dimN = B.cols();
  QMat CB(d, C.cols() + dimN);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < C.cols(); ++j) CB.at(i, j) = C.at(i, j);
    for (long j = 0; j < dimN; ++j) CB.at(i, C.cols() + j) = Rat(B.at(i, j));
  }
  long rank_C = rank_of(C);
  long rank_sum = rank_of(CB);
  out.dim_T_sigma_cap_N = rank_C + dimN - rank_sum;
  assert(rank_C == out.dim_T_sigma); // two routes to the closure dimension

  // The direction lies inside the subtorus algebra exactly when U * C = 0.
  bool inside = true;
  for (long i = 0; i < spec.n && inside; ++i)
    for (long j = 0; j < C.cols(); ++j) {
      Rat v = 0;
      for (long k = 0; k < d; ++k) v += Rat(spec.U.at(i, k)) * C.at(k, j);
      if (v != 0) { inside = false; break; }
    }
  out.transversal = !inside;
  return out;
}

SubtorusSpec make_spec(long n, long d, const std::vector<std::vector<long>>& columns) {
  SubtorusSpec spec;
  spec.n = n;
  spec.d = d;
  spec.U = IMat(n, d);
  for (long k = 0; k < d; ++k)
    for (long i = 0; i < n; ++i)
      spec.U.at(i, k) = columns[static_cast<size_t>(k)][static_cast<size_t>(i)];
  return spec;
}

SigmaSpec sigma_from_rationals(const std::vector<Rat>& a) {
  SigmaSpec sigma;
  sigma.symbols = {{"1", 1.0}};
  sigma.coeffs = QMat(static_cast<long>(a.size()), 1);
  for (size_t p = 0; p < a.size(); ++p)
    sigma.coeffs.at(static_cast<long>(p), 0) = a[p];
  return sigma;
}

} // namespace hypertoric

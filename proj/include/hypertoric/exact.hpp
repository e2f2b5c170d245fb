#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "hypertoric/errors.hpp"

namespace hypertoric {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Dense matrix over an exact scalar (Int or Rat), row-major.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(long rows, long cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols)) {}

  static Matrix identity(long n) {
    Matrix m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& at(long i, long j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  const T& at(long i, long j) const {
    return data_[static_cast<size_t>(i * cols_ + j)];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (long i = 0; i < rows_; ++i)
      for (long j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Matrix select_columns(const std::vector<long>& js) const {
    Matrix s(rows_, static_cast<long>(js.size()));
    for (long i = 0; i < rows_; ++i)
      for (size_t k = 0; k < js.size(); ++k) s.at(i, static_cast<long>(k)) = at(i, js[k]);
    return s;
  }

  Matrix select_rows(const std::vector<long>& is) const {
    Matrix s(static_cast<long>(is.size()), cols_);
    for (size_t k = 0; k < is.size(); ++k)
      for (long j = 0; j < cols_; ++j) s.at(static_cast<long>(k), j) = at(is[k], j);
    return s;
  }

  std::vector<T> column(long j) const {
    std::vector<T> c(static_cast<size_t>(rows_));
    for (long i = 0; i < rows_; ++i) c[static_cast<size_t>(i)] = at(i, j);
    return c;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (long i = 0; i < a.rows_; ++i)
      for (long k = 0; k < a.cols_; ++k) {
        if (a.at(i, k) == 0) continue;
        for (long j = 0; j < b.cols_; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return c;
  }

private:
  long rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IMat = Matrix<Int>;
using QMat = Matrix<Rat>;

std::string to_string(const Int& v);
std::string to_string(const Rat& v); // "p/q", or "p" when the denominator is 1
Int parse_int(const std::string& s);
Rat parse_rat(const std::string& s);

Int floor_div(const Int& a, const Int& b); // b != 0; floor semantics
Int isqrt_floor(const Int& n);             // n >= 0

// Row-style Hermite echelon form: H = U * M with U unimodular. Pivots are
// positive, entries above each pivot are reduced into [0, pivot), zero rows
// sink to the bottom. The result is the unique canonical form of the row
// lattice of M.
struct RowHermite {
  IMat H;
  IMat U;
  long rank = 0;
};
RowHermite row_hermite(const IMat& M);

// Canonical basis of an integer lattice given by generator columns: columns
// ordered by pivot row, pivots positive, other entries in each pivot row
// reduced into [0, pivot). Zero generators are dropped. Idempotent.
IMat canonical_column_basis(const IMat& generators);

// Saturated integer kernel of A : Z^cols -> Z^rows, as canonical basis
// columns. The returned lattice is ker_Q(A) intersected with Z^cols.
IMat integer_kernel(const IMat& A);

long rank_of(const IMat& A); // rank over the rationals
long rank_of(const QMat& A);

Int determinant(const IMat& A); // square; fraction-free (Bareiss)

// gcd of all maximal (cols x cols) minors of a tall matrix; 0 if all vanish.
// A column basis generates a saturated lattice exactly when this gcd is 1.
Int maximal_minor_gcd(const IMat& B);

struct RationalSolve {
  bool consistent = false;
  long rank = 0;
  std::vector<Rat> particular; // one solution with free variables set to 0
};
RationalSolve solve_linear(const QMat& A, const std::vector<Rat>& b);

QMat rational_nullspace(const QMat& A); // columns span ker_Q(A)

// Integer kernel of a rational matrix (rows are cleared of denominators
// first; the kernel is unchanged by row scaling).
IMat integer_kernel(const QMat& A);

IMat to_integer_row_scaled(const QMat& A); // scale each row to integers
QMat to_rational(const IMat& A);

} // namespace hypertoric

#include "hypertoric/exact.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hypertoric {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SigmaZero: return "SigmaZero";
    case ErrorCode::ExhaustedAttempts: return "ExhaustedAttempts";
    case ErrorCode::NotTransversal: return "NotTransversal";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedNumberField: return "UnsupportedNumberField";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

std::string to_string(const Int& v) { return v.str(); }

std::string to_string(const Rat& v) {
  Int num = boost::multiprecision::numerator(v);
  Int den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Int parse_int(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty integer literal");
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw Error(ErrorCode::ParseError, "sign without digits: '" + s + "'");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw Error(ErrorCode::ParseError, "not an integer literal: '" + s + "'");
  return Int(s);
}

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + s + "'");
  return Rat(num, den);
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

Int isqrt_floor(const Int& n) {
  if (n < 0) throw Error(ErrorCode::PreconditionViolated, "isqrt of negative value");
  return boost::multiprecision::sqrt(n);
}

namespace {

void add_row_multiple(IMat& M, long dst, long src, const Int& c) {
  if (c == 0) return;
  for (long j = 0; j < M.cols(); ++j) M.at(dst, j) += c * M.at(src, j);
}

void swap_rows(IMat& M, long a, long b) {
  if (a == b) return;
  for (long j = 0; j < M.cols(); ++j) std::swap(M.at(a, j), M.at(b, j));
}

void negate_row(IMat& M, long r) {
  for (long j = 0; j < M.cols(); ++j) M.at(r, j) = -M.at(r, j);
}

// Extended gcd: returns g = gcd(a, b) with s*a + t*b = g, g >= 0.
struct Xgcd {
  Int g, s, t;
};
Xgcd xgcd(Int a, Int b) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b; b = r;
    Int s2 = s0 - q * s1; s0 = s1; s1 = s2;
    Int t2 = t0 - q * t1; t0 = t1; t1 = t2;
  }
  if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
  return {a, s0, t0};
}

} // namespace

RowHermite row_hermite(const IMat& M) {
  RowHermite out;
  out.H = M;
  out.U = IMat::identity(M.rows());
  IMat& H = out.H;
  IMat& U = out.U;
  long r = 0;
  for (long col = 0; col < M.cols() && r < M.rows(); ++col) {
    long pivot = -1;
    for (long i = r; i < M.rows(); ++i)
      if (H.at(i, col) != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    swap_rows(H, r, pivot);
    swap_rows(U, r, pivot);
    for (long i = r + 1; i < M.rows(); ++i) {
      if (H.at(i, col) == 0) continue;
      Xgcd e = xgcd(H.at(r, col), H.at(i, col));
      Int a = H.at(r, col) / e.g;
      Int b = H.at(i, col) / e.g;
      // Replace rows (r, i) by (s*r + t*i, -b*r + a*i); the 2x2 transform has
      // determinant s*a + t*b = 1, so U stays unimodular.
      for (long j = 0; j < H.cols(); ++j) {
        Int hr = H.at(r, j), hi = H.at(i, j);
        H.at(r, j) = e.s * hr + e.t * hi;
        H.at(i, j) = -b * hr + a * hi;
      }
      for (long j = 0; j < U.cols(); ++j) {
        Int ur = U.at(r, j), ui = U.at(i, j);
        U.at(r, j) = e.s * ur + e.t * ui;
        U.at(i, j) = -b * ur + a * ui;
      }
    }
    if (H.at(r, col) < 0) { negate_row(H, r); negate_row(U, r); }
    for (long i = 0; i < r; ++i) {
      Int q = floor_div(H.at(i, col), H.at(r, col));
      if (q != 0) {
        add_row_multiple(H, i, r, -q);
        add_row_multiple(U, i, r, -q);
      }
    }
    ++r;
  }
  out.rank = r;
  return out;
}

IMat canonical_column_basis(const IMat& generators) {
  RowHermite rh = row_hermite(generators.transpose());
  std::vector<long> keep;
  for (long i = 0; i < rh.rank; ++i) keep.push_back(i);
  return rh.H.select_rows(keep).transpose();
}

IMat integer_kernel(const IMat& A) {
  // Column operations on A are row operations on A^T: with U*A^T in echelon
  // form, the rows of U mapped to zero rows form a basis of the left kernel
  // of A^T, i.e. of ker(A). The basis is saturated because U is unimodular:
  // any integer kernel vector has integer coordinates in the rows of U, and
  // its image under A forces the coordinates on the non-kernel rows to 0.
  RowHermite rh = row_hermite(A.transpose());
  std::vector<long> zero_rows;
  for (long i = rh.rank; i < rh.H.rows(); ++i) zero_rows.push_back(i);
  IMat basis = rh.U.select_rows(zero_rows).transpose();
  return canonical_column_basis(basis);
}

long rank_of(const IMat& A) { return row_hermite(A).rank; }

long rank_of(const QMat& A) {
  QMat M = A;
  long rank = 0;
  for (long col = 0; col < M.cols() && rank < M.rows(); ++col) {
    long pivot = -1;
    for (long i = rank; i < M.rows(); ++i)
      if (M.at(i, col) != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    for (long j = 0; j < M.cols(); ++j) std::swap(M.at(rank, j), M.at(pivot, j));
    Rat inv = M.at(rank, col);
    for (long i = rank + 1; i < M.rows(); ++i) {
      if (M.at(i, col) == 0) continue;
      Rat f = M.at(i, col) / inv;
      for (long j = col; j < M.cols(); ++j) M.at(i, j) -= f * M.at(rank, j);
    }
    ++rank;
  }
  return rank;
}

Int determinant(const IMat& A) {
  if (A.rows() != A.cols())
    throw Error(ErrorCode::ShapeMismatch, "determinant of non-square matrix");
  long n = A.rows();
  if (n == 0) return 1;
  IMat M = A;
  Int prev = 1;
  int sign = 1;
  for (long k = 0; k < n - 1; ++k) {
    if (M.at(k, k) == 0) {
      long pivot = -1;
      for (long i = k + 1; i < n; ++i)
        if (M.at(i, k) != 0) { pivot = i; break; }
      if (pivot < 0) return 0;
      swap_rows(M, k, pivot);
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j)
        M.at(i, j) = (M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j)) / prev;
    prev = M.at(k, k);
  }
  return sign > 0 ? M.at(n - 1, n - 1) : -M.at(n - 1, n - 1);
}

Int maximal_minor_gcd(const IMat& B) {
  long r = B.cols();
  if (B.rows() < r)
    throw Error(ErrorCode::ShapeMismatch, "matrix has fewer rows than columns");
  std::vector<long> idx(static_cast<size_t>(r));
  std::function<Int(long, long)> scan = [&](long pos, long start) -> Int {
    if (pos == r) return boost::multiprecision::abs(determinant(B.select_rows(idx)));
    Int g = 0;
    for (long i = start; i <= B.rows() - (r - pos); ++i) {
      idx[static_cast<size_t>(pos)] = i;
      g = boost::multiprecision::gcd(g, scan(pos + 1, i + 1));
      if (g == 1) return g;
    }
    return g;
  };
  if (r == 0) return 1;
  return scan(0, 0);
}

RationalSolve solve_linear(const QMat& A, const std::vector<Rat>& b) {
  if (static_cast<long>(b.size()) != A.rows())
    throw Error(ErrorCode::ShapeMismatch, "rhs length disagrees with matrix rows");
  long m = A.rows(), n = A.cols();
  QMat M(m, n + 1);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < n; ++j) M.at(i, j) = A.at(i, j);
    M.at(i, n) = b[static_cast<size_t>(i)];
  }
  std::vector<long> pivot_col;
  long r = 0;
  for (long col = 0; col < n && r < m; ++col) {
    long pivot = -1;
    for (long i = r; i < m; ++i)
      if (M.at(i, col) != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    for (long j = 0; j <= n; ++j) std::swap(M.at(r, j), M.at(pivot, j));
    Rat p = M.at(r, col);
    for (long j = col; j <= n; ++j) M.at(r, j) /= p;
    for (long i = 0; i < m; ++i) {
      if (i == r || M.at(i, col) == 0) continue;
      Rat f = M.at(i, col);
      for (long j = col; j <= n; ++j) M.at(i, j) -= f * M.at(r, j);
    }
    pivot_col.push_back(col);
    ++r;
  }
  RationalSolve out;
  out.rank = r;
  for (long i = r; i < m; ++i)
    if (M.at(i, n) != 0) { out.consistent = false; return out; }
  out.consistent = true;
  out.particular.assign(static_cast<size_t>(n), Rat(0));
  for (long k = 0; k < r; ++k)
    out.particular[static_cast<size_t>(pivot_col[static_cast<size_t>(k)])] = M.at(k, n);
  return out;
}

QMat rational_nullspace(const QMat& A) {
  long m = A.rows(), n = A.cols();
  QMat M = A;
  std::vector<long> pivot_col;
  long r = 0;
  for (long col = 0; col < n && r < m; ++col) {
    long pivot = -1;
    for (long i = r; i < m; ++i)
      if (M.at(i, col) != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    for (long j = 0; j < n; ++j) std::swap(M.at(r, j), M.at(pivot, j));
    Rat p = M.at(r, col);
    for (long j = col; j < n; ++j) M.at(r, j) /= p;
    for (long i = 0; i < m; ++i) {
      if (i == r || M.at(i, col) == 0) continue;
      Rat f = M.at(i, col);
      for (long j = col; j < n; ++j) M.at(i, j) -= f * M.at(r, j);
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (long c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  QMat K(n, n - r);
  long out_col = 0;
  for (long free = 0; free < n; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    K.at(free, out_col) = 1;
    for (long k = 0; k < r; ++k)
      K.at(pivot_col[static_cast<size_t>(k)], out_col) = -M.at(k, free);
    ++out_col;
  }
  return K;
}

IMat to_integer_row_scaled(const QMat& A) {
  IMat out(A.rows(), A.cols());
  for (long i = 0; i < A.rows(); ++i) {
    Int l = 1;
    for (long j = 0; j < A.cols(); ++j) {
      Int den = boost::multiprecision::denominator(A.at(i, j));
      l = l / boost::multiprecision::gcd(l, den) * den;
    }
    for (long j = 0; j < A.cols(); ++j) {
      Rat v = A.at(i, j) * Rat(l);
      out.at(i, j) = boost::multiprecision::numerator(v);
    }
  }
  return out;
}

QMat to_rational(const IMat& A) {
  QMat out(A.rows(), A.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j) out.at(i, j) = Rat(A.at(i, j));
  return out;
}

IMat integer_kernel(const QMat& A) { return integer_kernel(to_integer_row_scaled(A)); }

} // namespace hypertoric

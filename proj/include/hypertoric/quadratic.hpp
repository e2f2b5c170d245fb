#pragma once
#include <string>
#include <vector>

#include "hypertoric/exact.hpp"

namespace hypertoric {

// Exact element of a real quadratic field (or a rational, or infinity):
// value = (p + q*sqrt(D))/r in canonical form — r > 0, gcd(p, q, r) = 1,
// D squarefree, and q = 0 exactly when the value is rational (then D = 0).
// Square factors of D are folded into q on construction.
struct QuadraticSlope {
  bool infinite = false;
  Int p = 0, q = 0, r = 1, D = 0;

  static QuadraticSlope infinity();
  // Canonicalizing constructor; throws PreconditionViolated for r = 0 or
  // negative D.
  static QuadraticSlope of(Int p, Int q, Int r, Int D);
  static QuadraticSlope rational(const Rat& x);

  bool is_rational() const { return !infinite && q == 0; }
  bool is_zero() const { return !infinite && p == 0 && q == 0; }
  bool operator==(const QuadraticSlope& o) const = default;
};

// Field arithmetic. Operands must be finite and lie in one quadratic field
// (a rational combines with anything); mixing two distinct irrational
// fields throws UnsupportedNumberField.
QuadraticSlope operator+(const QuadraticSlope& a, const QuadraticSlope& b);
QuadraticSlope operator-(const QuadraticSlope& a, const QuadraticSlope& b);
QuadraticSlope operator*(const QuadraticSlope& a, const QuadraticSlope& b);
QuadraticSlope operator-(const QuadraticSlope& a);
// 1/x; reciprocal of zero is infinity.
QuadraticSlope reciprocal(const QuadraticSlope& a);
// a/b; division by zero gives infinity for a != 0 and throws for 0/0.
QuadraticSlope operator/(const QuadraticSlope& a, const QuadraticSlope& b);

Int floor_of(const QuadraticSlope& a); // finite values only
double numeric_value(const QuadraticSlope& a);

// Continued-fraction expansion. Rationals get a finite expansion (empty
// period); quadratic irrationals get the eventually periodic one with the
// minimal period, detected by first repetition of a complete quotient.
struct ContinuedFraction {
  std::vector<Int> preperiod;
  std::vector<Int> period;
};
ContinuedFraction cf_expansion(const QuadraticSlope& a);

// GL(2,Z) equivalence: rationals and infinity form one class; a rational
// never matches an irrational; two quadratic irrationals are equivalent
// iff they generate the same field and their minimal periods agree up to
// cyclic rotation (tails of equivalent numbers eventually coincide).
bool serret_equivalent(const QuadraticSlope& alpha, const QuadraticSlope& beta);

// (a*x + b)/(c*x + d) with |ad - bc| = 1 (throws PreconditionViolated
// otherwise). Maps infinity to a/c and poles to infinity.
QuadraticSlope apply_mobius(const QuadraticSlope& x, const Int& a, const Int& b,
                            const Int& c, const Int& d);

// Text forms: "infinity", rationals as "p" or "p/q", surds as "sqrt(2)",
// "1+sqrt(2)", "2*sqrt(3)", "(2+sqrt(2))/2". parse_slope accepts the same
// shapes (spaces ignored, square factors folded) and throws ParseError on
// anything else.
std::string format_slope(const QuadraticSlope& a);
QuadraticSlope parse_slope(const std::string& text);

} // namespace hypertoric

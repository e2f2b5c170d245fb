#include "hypertoric/quadratic.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace hypertoric {

namespace {

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

Int gcd3(const Int& a, const Int& b, const Int& c) {
  using boost::multiprecision::gcd;
  return gcd(gcd(abs_int(a), abs_int(b)), abs_int(c));
}

// n = s^2 * f with f squarefree; returns (s, f).
std::pair<Int, Int> squarefree_decompose(Int n) {
  Int s = 1, f = 1;
  for (Int i = 2; i * i <= n; ++i) {
    if (n % i != 0) continue;
    long e = 0;
    while (n % i == 0) {
      n /= i;
      ++e;
    }
    for (long k = 0; k < e / 2; ++k) s *= i;
    if (e % 2) f *= i;
  }
  f *= n; // leftover prime
  return {s, f};
}

// Shared field discriminant of two finite operands.
Int common_field(const QuadraticSlope& a, const QuadraticSlope& b) {
  if (a.q == 0) return b.D;
  if (b.q == 0) return a.D;
  if (a.D != b.D)
    throw Error(ErrorCode::UnsupportedNumberField,
                "cannot combine sqrt(" + to_string(a.D) + ") with sqrt(" +
                    to_string(b.D) + ") exactly");
  return a.D;
}

void require_finite(const QuadraticSlope& a) {
  if (a.infinite)
    throw Error(ErrorCode::PreconditionViolated,
                "operation needs a finite value");
}

} // namespace

QuadraticSlope QuadraticSlope::infinity() {
  QuadraticSlope s;
  s.infinite = true;
  s.r = 1;
  return s;
}

QuadraticSlope QuadraticSlope::of(Int p, Int q, Int r, Int D) {
  if (r == 0)
    throw Error(ErrorCode::PreconditionViolated, "denominator must be nonzero");
  if (D < 0)
    throw Error(ErrorCode::PreconditionViolated, "discriminant must be >= 0");
  if (q == 0 || D == 0) {
    q = 0;
    D = 0;
  } else {
    auto [s, f] = squarefree_decompose(D);
    q *= s;
    D = f;
    if (D == 1) { // sqrt(1) folds into the rational part
      p += q;
      q = 0;
      D = 0;
    }
  }
  if (r < 0) {
    p = -p;
    q = -q;
    r = -r;
  }
  Int g = gcd3(p, q, r);
  if (g > 1) {
    p /= g;
    q /= g;
    r /= g;
  }
  QuadraticSlope out;
  out.p = p;
  out.q = q;
  out.r = r;
  out.D = D;
  return out;
}

QuadraticSlope QuadraticSlope::rational(const Rat& x) {
  return of(Int(boost::multiprecision::numerator(x)),
            0, Int(boost::multiprecision::denominator(x)), 0);
}

QuadraticSlope operator+(const QuadraticSlope& a, const QuadraticSlope& b) {
  require_finite(a);
  require_finite(b);
  Int D = common_field(a, b);
  return QuadraticSlope::of(a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r,
                            a.r * b.r, D);
}

QuadraticSlope operator-(const QuadraticSlope& a) {
  require_finite(a);
  return QuadraticSlope::of(-a.p, -a.q, a.r, a.D);
}

QuadraticSlope operator-(const QuadraticSlope& a, const QuadraticSlope& b) {
  return a + (-b);
}

QuadraticSlope operator*(const QuadraticSlope& a, const QuadraticSlope& b) {
  require_finite(a);
  require_finite(b);
  Int D = common_field(a, b);
  return QuadraticSlope::of(a.p * b.p + a.q * b.q * D, a.p * b.q + a.q * b.p,
                            a.r * b.r, D);
}

QuadraticSlope reciprocal(const QuadraticSlope& a) {
  require_finite(a);
  if (a.is_zero()) return QuadraticSlope::infinity();
  // r/(p + q sqrt(D)) = r (p - q sqrt(D)) / (p^2 - q^2 D); the norm is
  // nonzero because sqrt(D) is irrational whenever q != 0.
  Int norm = a.p * a.p - a.q * a.q * a.D;
  return QuadraticSlope::of(a.r * a.p, -a.r * a.q, norm, a.D);
}

QuadraticSlope operator/(const QuadraticSlope& a, const QuadraticSlope& b) {
  require_finite(a);
  require_finite(b);
  if (b.is_zero()) {
    if (a.is_zero())
      throw Error(ErrorCode::PreconditionViolated, "0/0 is undefined");
    return QuadraticSlope::infinity();
  }
  return a * reciprocal(b);
}

Int floor_of(const QuadraticSlope& a) {
  require_finite(a);
  if (a.q == 0) return floor_div(a.p, a.r);
  // value = (p + sign(q) * sqrt(q^2 D)) / r with r > 0 and sqrt irrational.
  Int N = a.q * a.q * a.D;
  Int s = isqrt_floor(N);
  Int num = (a.q > 0) ? Int(a.p + s) : Int(a.p - s - 1);
  return floor_div(num, a.r);
}

double numeric_value(const QuadraticSlope& a) {
  if (a.infinite) return std::numeric_limits<double>::infinity();
  return (static_cast<double>(a.p) +
          static_cast<double>(a.q) * std::sqrt(static_cast<double>(a.D))) /
         static_cast<double>(a.r);
}

ContinuedFraction cf_expansion(const QuadraticSlope& slope) {
  require_finite(slope);
  ContinuedFraction out;
  std::map<std::tuple<Int, Int, Int, Int>, size_t> seen;
  std::vector<Int> terms;
  QuadraticSlope alpha = slope;
  // Complete quotients of a quadratic irrational are bounded, so the state
  // must repeat; rationals terminate by the Euclidean algorithm.
  for (long iter = 0; iter < 1000000; ++iter) {
    if (!alpha.is_rational()) {
      auto key = std::make_tuple(alpha.p, alpha.q, alpha.r, alpha.D);
      auto [it, fresh] = seen.insert({key, terms.size()});
      if (!fresh) {
        size_t start = it->second;
        out.preperiod.assign(terms.begin(), terms.begin() + static_cast<long>(start));
        out.period.assign(terms.begin() + static_cast<long>(start), terms.end());
        return out;
      }
    }
    Int a = floor_of(alpha);
    terms.push_back(a);
    QuadraticSlope rem = alpha - QuadraticSlope::rational(Rat(a));
    if (rem.is_zero()) {
      out.preperiod = terms;
      return out;
    }
    alpha = reciprocal(rem);
  }
  throw Error(ErrorCode::NoConvergence, "continued fraction did not close");
}

bool serret_equivalent(const QuadraticSlope& alpha, const QuadraticSlope& beta) {
  bool ra = alpha.infinite || alpha.is_rational();
  bool rb = beta.infinite || beta.is_rational();
  if (ra || rb) return ra == rb;
  if (alpha.D != beta.D) return false;
  std::vector<Int> pa = cf_expansion(alpha).period;
  std::vector<Int> pb = cf_expansion(beta).period;
  if (pa.size() != pb.size()) return false;
  size_t n = pa.size();
  for (size_t shift = 0; shift < n; ++shift) {
    bool match = true;
    for (size_t i = 0; i < n && match; ++i)
      if (pa[i] != pb[(i + shift) % n]) match = false;
    if (match) return true;
  }
  return false;
}

QuadraticSlope apply_mobius(const QuadraticSlope& x, const Int& a, const Int& b,
                            const Int& c, const Int& d) {
  Int det = a * d - b * c;
  if (det != 1 && det != -1)
    throw Error(ErrorCode::PreconditionViolated,
                "matrix must have determinant +-1");
  if (x.infinite) {
    if (c == 0) return QuadraticSlope::infinity();
    return QuadraticSlope::of(a, 0, c, 0);
  }
  QuadraticSlope num = QuadraticSlope::rational(Rat(a)) * x + QuadraticSlope::rational(Rat(b));
  QuadraticSlope den = QuadraticSlope::rational(Rat(c)) * x + QuadraticSlope::rational(Rat(d));
  if (den.is_zero()) return QuadraticSlope::infinity();
  return num / den;
}

std::string format_slope(const QuadraticSlope& a) {
  if (a.infinite) return "infinity";
  if (a.q == 0) return to_string(Rat(a.p, a.r));
  std::string num;
  if (a.p != 0) num += to_string(a.p);
  if (a.q == 1)
    num += (a.p != 0 ? "+" : "");
  else if (a.q == -1)
    num += "-";
  else
    num += (a.p != 0 && a.q > 0 ? "+" : "") + to_string(a.q) + "*";
  num += "sqrt(" + to_string(a.D) + ")";
  if (a.r == 1) return num;
  return "(" + num + ")/" + to_string(a.r);
}

namespace {

bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// One numerator term: "k", "sqrt(D)", "k*sqrt(D)" or "ksqrt(D)".
void parse_term(const std::string& term, Int& p_acc, Int& q_acc, Int& D_acc) {
  size_t pos = term.find("sqrt(");
  if (pos == std::string::npos) {
    if (!is_integer_text(term))
      throw Error(ErrorCode::ParseError, "bad term '" + term + "'");
    p_acc += parse_int(term);
    return;
  }
  if (term.back() != ')')
    throw Error(ErrorCode::ParseError, "unterminated sqrt in '" + term + "'");
  std::string coeff = term.substr(0, pos);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  Int k = 1;
  if (coeff == "-")
    k = -1;
  else if (!coeff.empty() && coeff != "+") {
    if (!is_integer_text(coeff))
      throw Error(ErrorCode::ParseError, "bad coefficient '" + coeff + "'");
    k = parse_int(coeff);
  }
  std::string arg = term.substr(pos + 5, term.size() - pos - 6);
  if (!is_integer_text(arg) || arg[0] == '-')
    throw Error(ErrorCode::ParseError, "bad sqrt argument '" + arg + "'");
  Int D = parse_int(arg);
  auto [s, f] = squarefree_decompose(D);
  k *= s;
  if (f <= 1) { // perfect square (or zero): rational contribution
    p_acc += k * (f == 1 ? 1 : 0);
    return;
  }
  if (q_acc != 0 && D_acc != f)
    throw Error(ErrorCode::ParseError,
                "terms mix sqrt(" + to_string(D_acc) + ") and sqrt(" +
                    to_string(f) + ")");
  D_acc = f;
  q_acc += k;
}

} // namespace

QuadraticSlope parse_slope(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty slope text");
  if (s == "infinity" || s == "inf") return QuadraticSlope::infinity();
  if (s.find("sqrt") == std::string::npos) {
    try {
      return QuadraticSlope::rational(parse_rat(s));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad rational '" + text + "'");
    }
  }

  // Optional top-level denominator: "num/r" with the slash at depth 0.
  std::string num = s;
  Int r = 1;
  long depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0) {
      num = s.substr(0, i);
      std::string den = s.substr(i + 1);
      if (!is_integer_text(den))
        throw Error(ErrorCode::ParseError, "bad denominator '" + den + "'");
      r = parse_int(den);
      if (r == 0) throw Error(ErrorCode::ParseError, "zero denominator");
      break;
    }
  }
  // Strip one pair of enclosing parentheses when it wraps the whole numerator.
  if (!num.empty() && num.front() == '(' && num.back() == ')') {
    long d2 = 0;
    bool wraps = true;
    for (size_t i = 0; i + 1 < num.size(); ++i) {
      if (num[i] == '(') ++d2;
      if (num[i] == ')') --d2;
      if (d2 == 0) {
        wraps = false;
        break;
      }
    }
    if (wraps) num = num.substr(1, num.size() - 2);
  }
  if (num.empty()) throw Error(ErrorCode::ParseError, "empty numerator");

  Int p = 0, q = 0, D = 0;
  std::string term;
  depth = 0;
  for (size_t i = 0; i < num.size(); ++i) {
    char c = num[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == '+' || c == '-') && depth == 0 && i > 0) {
      parse_term(term, p, q, D);
      term.clear();
      if (c == '-') term = "-";
      continue;
    }
    term += c;
  }
  parse_term(term, p, q, D);
  return QuadraticSlope::of(p, q, r, D);
}

} // namespace hypertoric

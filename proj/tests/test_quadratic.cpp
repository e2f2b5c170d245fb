#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hypertoric/quadratic.hpp"
#include "oracles.hpp"

using namespace hypertoric;

namespace {

QuadraticSlope surd(long p, long q, long r, long D) {
  return QuadraticSlope::of(Int(p), Int(q), Int(r), Int(D));
}

QuadraticSlope random_surd(std::mt19937_64& rng) {
  static const long fields[] = {2, 3, 5, 6, 7};
  long p = static_cast<long>(rng() % 7) - 3;
  long q = static_cast<long>(rng() % 7) - 3;
  long r = 1 + static_cast<long>(rng() % 3);
  long D = fields[rng() % 5];
  if (q == 0) q = 1;
  return surd(p, q, r, D);
}

} // namespace

TEST_CASE("canonical form folds squares, signs, and common factors") {
  QuadraticSlope a = surd(2, 2, 4, 8); // (2 + 2*sqrt(8))/4 = (1 + 2*sqrt(2))/2
  CHECK(a.p == 1);
  CHECK(a.q == 2);
  CHECK(a.r == 2);
  CHECK(a.D == 2);

  QuadraticSlope b = surd(0, 3, 3, 9); // 3*sqrt(9)/3 = 3
  CHECK(b.is_rational());
  CHECK(b.p == 3);
  CHECK(b.r == 1);
  CHECK(b.D == 0);

  QuadraticSlope c = surd(1, 1, -2, 2); // negative denominator flips signs
  CHECK(c.p == -1);
  CHECK(c.q == -1);
  CHECK(c.r == 2);

  CHECK(surd(5, 0, 1, 7).D == 0); // q = 0 wipes the field marker
  CHECK_THROWS_AS(surd(1, 1, 0, 2), Error);
  CHECK_THROWS_AS(QuadraticSlope::of(1, 1, 1, -2), Error);
}

TEST_CASE("field arithmetic matches double evaluation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    QuadraticSlope a = random_surd(rng);
    QuadraticSlope b = random_surd(rng);
    if (a.D != b.D) continue; // same-field pairs only
    double va = numeric_value(a), vb = numeric_value(b);
    CHECK(numeric_value(a + b) == doctest::Approx(va + vb).epsilon(1e-12));
    CHECK(numeric_value(a - b) == doctest::Approx(va - vb).epsilon(1e-12));
    CHECK(numeric_value(a * b) == doctest::Approx(va * vb).epsilon(1e-12));
    if (!b.is_zero())
      CHECK(numeric_value(a / b) == doctest::Approx(va / vb).epsilon(1e-12));
    if (!a.is_zero()) {
      CHECK(reciprocal(reciprocal(a)) == a);
      CHECK((a * reciprocal(a)) == QuadraticSlope::rational(Rat(1)));
    }
  }
}

TEST_CASE("the worked division: (1+sqrt(2))/sqrt(2) = (2+sqrt(2))/2") {
  QuadraticSlope num = surd(1, 1, 1, 2);
  QuadraticSlope den = surd(0, 1, 1, 2);
  QuadraticSlope ratio = num / den;
  CHECK(ratio.p == 2);
  CHECK(ratio.q == 1);
  CHECK(ratio.r == 2);
  CHECK(ratio.D == 2);
}

TEST_CASE("mixing two irrational fields is refused") {
  QuadraticSlope a = surd(0, 1, 1, 2);
  QuadraticSlope b = surd(0, 1, 1, 3);
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(a * b, Error);
  try {
    a + b;
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedNumberField);
  }
  // A rational combines with any field.
  CHECK((QuadraticSlope::rational(Rat(2)) * b).D == 3);
}

TEST_CASE("exact floors bracket the numeric value") {
  CHECK(floor_of(surd(0, 1, 1, 2)) == 1);   // sqrt(2)
  CHECK(floor_of(surd(0, -1, 1, 2)) == -2); // -sqrt(2)
  CHECK(floor_of(surd(1, 1, 2, 2)) == 1);   // (1+sqrt(2))/2
  CHECK(floor_of(surd(1, -3, 2, 2)) == -2); // (1-3*sqrt(2))/2
  CHECK(floor_of(surd(7, 0, 3, 0)) == 2);
  CHECK(floor_of(surd(-7, 0, 3, 0)) == -3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    QuadraticSlope a = random_surd(rng);
    double fl = static_cast<double>(floor_of(a));
    double v = numeric_value(a);
    CHECK(fl <= v + 1e-9);
    CHECK(v < fl + 1.0 + 1e-9);
  }
}

TEST_CASE("continued fractions of the classical surds") {
  ContinuedFraction r2 = cf_expansion(surd(0, 1, 1, 2));
  REQUIRE(r2.preperiod.size() == 1);
  CHECK(r2.preperiod[0] == 1);
  REQUIRE(r2.period.size() == 1);
  CHECK(r2.period[0] == 2);

  ContinuedFraction r3 = cf_expansion(surd(0, 1, 1, 3));
  REQUIRE(r3.preperiod.size() == 1);
  CHECK(r3.preperiod[0] == 1);
  REQUIRE(r3.period.size() == 2);
  CHECK(r3.period[0] == 1);
  CHECK(r3.period[1] == 2);

  ContinuedFraction silver = cf_expansion(surd(1, 1, 1, 2)); // 1+sqrt(2)
  CHECK(silver.preperiod.empty());
  REQUIRE(silver.period.size() == 1);
  CHECK(silver.period[0] == 2);

  ContinuedFraction golden = cf_expansion(surd(1, 1, 2, 5)); // (1+sqrt(5))/2
  CHECK(golden.preperiod.empty());
  REQUIRE(golden.period.size() == 1);
  CHECK(golden.period[0] == 1);

  ContinuedFraction seven_thirds = cf_expansion(surd(7, 0, 3, 0));
  CHECK(seven_thirds.period.empty());
  REQUIRE(seven_thirds.preperiod.size() == 2);
  CHECK(seven_thirds.preperiod[0] == 2);
  CHECK(seven_thirds.preperiod[1] == 3);
}

TEST_CASE("continued fractions reconstruct their value numerically") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    QuadraticSlope a = random_surd(rng);
    ContinuedFraction cf = cf_expansion(a);
    std::vector<Int> terms = cf.preperiod;
    while (!cf.period.empty() && terms.size() < 48)
      terms.insert(terms.end(), cf.period.begin(), cf.period.end());
    REQUIRE(!terms.empty());
    double v = static_cast<double>(terms.back());
    for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it)
      v = static_cast<double>(*it) + 1.0 / v;
    CHECK(v == doctest::Approx(numeric_value(a)).epsilon(1e-7));
  }
}

TEST_CASE("equivalence: worked examples") {
  QuadraticSlope r2 = surd(0, 1, 1, 2);
  QuadraticSlope silver = surd(1, 1, 1, 2);
  QuadraticSlope r3 = surd(0, 1, 1, 3);
  CHECK(serret_equivalent(r2, silver));
  CHECK_FALSE(serret_equivalent(r2, r3));
  CHECK(serret_equivalent(QuadraticSlope::rational(Rat(3, 7)),
                          QuadraticSlope::rational(Rat(0))));
  CHECK(serret_equivalent(QuadraticSlope::infinity(),
                          QuadraticSlope::rational(Rat(5))));
  CHECK_FALSE(serret_equivalent(r2, QuadraticSlope::rational(Rat(3, 7))));
  CHECK(serret_equivalent(-r2, r2));
}

TEST_CASE("equivalence is preserved by the group generators") {
  std::mt19937_64 rng(11);
  QuadraticSlope one = QuadraticSlope::rational(Rat(1));
  for (int trial = 0; trial < 60; ++trial) {
    QuadraticSlope a = random_surd(rng);
    CHECK(serret_equivalent(a, a + one));
    CHECK(serret_equivalent(a, -a));
    if (!a.is_zero()) CHECK(serret_equivalent(a, reciprocal(a)));
    QuadraticSlope m = apply_mobius(a, 2, 1, 1, 1); // det 1
    CHECK(serret_equivalent(a, m));
  }
}

TEST_CASE("equivalence agrees with a bounded word search") {
  std::mt19937_64 rng(13);
  int positives = 0;
  for (int trial = 0; trial < 40; ++trial) {
    QuadraticSlope a = random_surd(rng);
    // Generate an equivalent partner by a short random word so the search
    // is guaranteed to reach it within its depth budget.
    QuadraticSlope b = a;
    int len = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < len; ++i) {
      switch (rng() % 3) {
        case 0: b = b + QuadraticSlope::rational(Rat(1)); break;
        case 1: b = b - QuadraticSlope::rational(Rat(1)); break;
        default:
          if (!b.is_zero()) b = reciprocal(b);
          break;
      }
    }
    CHECK(serret_equivalent(a, b));
    CHECK(oracle::bfs_gl2z_equivalent(numeric_value(a), numeric_value(b)));
    ++positives;

    // Random unrelated pair: a certificate found by the search must be
    // confirmed by the exact decision.
    QuadraticSlope c = random_surd(rng);
    if (oracle::bfs_gl2z_equivalent(numeric_value(a), numeric_value(c)))
      CHECK(serret_equivalent(a, c));
  }
  CHECK(positives == 40);
}

TEST_CASE("moebius maps handle infinity and reject non-unimodular input") {
  QuadraticSlope r2 = surd(0, 1, 1, 2);
  CHECK(apply_mobius(r2, 1, 1, 0, 1) == surd(1, 1, 1, 2));
  CHECK(apply_mobius(r2, 0, 1, 1, 0) == reciprocal(r2));
  CHECK(apply_mobius(QuadraticSlope::infinity(), 2, 1, 1, 1) ==
        QuadraticSlope::rational(Rat(2)));
  CHECK(apply_mobius(QuadraticSlope::infinity(), 1, 5, 0, 1).infinite);
  // x = -d/c hits the pole.
  CHECK(apply_mobius(QuadraticSlope::rational(Rat(-1)), 1, 0, 1, 1).infinite);
  CHECK_THROWS_AS(apply_mobius(r2, 2, 0, 0, 1), Error);
}

TEST_CASE("text round trips") {
  const char* examples[] = {"sqrt(2)",        "1+sqrt(2)", "(2+sqrt(2))/2",
                            "2",              "3/7",       "-sqrt(2)",
                            "(1-2*sqrt(5))/3", "infinity",  "-5/3"};
  for (const char* text : examples) {
    QuadraticSlope a = parse_slope(text);
    CHECK(parse_slope(format_slope(a)) == a);
    CHECK(format_slope(a) == text);
  }
  // Non-canonical input normalizes on parse.
  CHECK(parse_slope("sqrt(8)") == surd(0, 2, 1, 2));
  CHECK(parse_slope("sqrt(9)") == QuadraticSlope::rational(Rat(3)));
  CHECK(parse_slope(" 1 + sqrt( 2 ) ") == surd(1, 1, 1, 2));
  CHECK(parse_slope("2sqrt(3)") == surd(0, 2, 1, 3));
  CHECK(parse_slope("sqrt(2)/2") == surd(0, 1, 2, 2));
  CHECK(parse_slope("INFINITY").infinite);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    QuadraticSlope a = random_surd(rng);
    CHECK(parse_slope(format_slope(a)) == a);
  }
}

TEST_CASE("parser rejects malformed text") {
  const char* bad[] = {"", "1.5", "sqrt(-1)", "sqrt(2)+sqrt(3)", "sqrt(2",
                       "1/0", "x+1", "(1+sqrt(2))/0"};
  for (const char* text : bad) CHECK_THROWS_AS(parse_slope(text), Error);
}

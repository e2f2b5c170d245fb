#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hypertoric/arrangement.hpp"
#include "oracles.hpp"

using namespace hypertoric;

namespace {

SubtorusSpec diagonal_circle_spec(long n) {
  std::vector<std::vector<long>> cols;
  for (long i = 0; i < n; ++i) {
    std::vector<long> c(static_cast<size_t>(n), 0);
    c[static_cast<size_t>(i)] = 1;
    cols.push_back(c);
  }
  cols.push_back(std::vector<long>(static_cast<size_t>(n), -1));
  return make_spec(n, n + 1, cols);
}

ZetaLift lift_of(std::vector<std::array<long, 3>> rows) {
  ZetaLift z;
  for (const auto& r : rows) z.tau.push_back({Rat(r[0]), Rat(r[1]), Rat(r[2])});
  return z;
}

ZetaLift random_lift(std::mt19937_64& rng, long d, long bound) {
  ZetaLift z = ZetaLift::zero(d);
  for (auto& row : z.tau)
    for (auto& v : row)
      v = Rat(static_cast<long>(rng() % static_cast<unsigned long>(2 * bound + 1)) - bound);
  return z;
}

// Dense oracle for subset emptiness: stack the three component systems into
// one block-diagonal rational system and compare ranks.
bool oracle_nonempty(const SubtorusSpec& spec, const ZetaLift& tau,
                     const std::vector<long>& members) {
  long s = static_cast<long>(members.size());
  QMat A(3 * s, 3 * spec.n);
  std::vector<Rat> b(static_cast<size_t>(3 * s));
  for (long r = 0; r < s; ++r) {
    long k = members[static_cast<size_t>(r)] - 1;
    for (int i = 0; i < 3; ++i) {
      for (long j = 0; j < spec.n; ++j)
        A.at(3 * r + i, i * spec.n + j) = Rat(spec.U.at(j, k));
      b[static_cast<size_t>(3 * r + i)] =
          tau.tau[static_cast<size_t>(k)][static_cast<size_t>(i)];
    }
  }
  return oracle::solvable_rref(A, b);
}

} // namespace

TEST_CASE("single-block subsets are flats of codimension three") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  std::mt19937_64 rng(7);
  ZetaLift tau = random_lift(rng, spec.d, 5);
  for (long k = 1; k <= spec.d; ++k) {
    FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of({k}));
    CHECK_FALSE(fs.empty);
    CHECK(fs.dim == 3 * spec.n - 3);
    REQUIRE(static_cast<long>(fs.point.size()) == 3 * spec.n);
    // The returned point satisfies the selected constraints.
    for (int i = 0; i < 3; ++i) {
      Rat acc = 0;
      for (long j = 0; j < spec.n; ++j)
        acc += fs.point[static_cast<size_t>(i * spec.n + j)] * Rat(spec.U.at(j, k - 1));
      CHECK(acc == tau.tau[static_cast<size_t>(k - 1)][static_cast<size_t>(i)]);
    }
  }
}

TEST_CASE("zero level: every subsystem passes through the origin") {
  SubtorusSpec spec = diagonal_circle_spec(3);
  ZetaLift tau = ZetaLift::zero(spec.d);
  std::vector<std::vector<long>> subsets = {{1}, {1, 2}, {1, 2, 3, 4}};
  for (const auto& S : subsets) {
    FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of(S));
    CHECK_FALSE(fs.empty);
    for (const Rat& c : fs.point) CHECK(c == 0);
  }
}

TEST_CASE("three blocks with incompatible offsets have empty intersection") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  ZetaLift tau = lift_of({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}});
  FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of({1, 2, 3}));
  CHECK(fs.empty);
  CHECK(oracle_nonempty(spec, tau, {1, 2, 3}) == false);
}

TEST_CASE("subset emptiness matches the dense oracle on random data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    SubtorusSpec spec = oracle::random_spec(rng, 6, 3, 2);
    ZetaLift tau = random_lift(rng, spec.d, 2);
    for (long size = 1; size <= spec.d; ++size) {
      std::vector<long> idx(static_cast<size_t>(size));
      std::function<void(long, long)> rec = [&](long pos, long start) {
        if (pos == size) {
          std::vector<long> members;
          for (long i : idx) members.push_back(i + 1);
          FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of(members));
          CHECK(fs.empty == !oracle_nonempty(spec, tau, members));
          return;
        }
        for (long i = start; i <= spec.d - (size - pos); ++i) {
          idx[static_cast<size_t>(pos)] = i;
          rec(pos + 1, i + 1);
        }
      };
      rec(0, 0);
    }
  }
}

TEST_CASE("zero level with more blocks than rank is rejected") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  SmoothnessVerdict v = smoothness_check(spec, ZetaLift::zero(spec.d));
  CHECK_FALSE(v.smooth);
  REQUIRE(v.excess_flat.has_value());
  CHECK(v.excess_flat->size() == spec.n + 1);
  CHECK(v.excess_flat->members == std::vector<long>{1, 2, 3});
}

TEST_CASE("two distinct parallel blocks in rank one are accepted") {
  SubtorusSpec spec = make_spec(1, 2, {{1}, {1}});
  SmoothnessVerdict v = smoothness_check(spec, lift_of({{0, 0, 0}, {1, 0, 0}}));
  CHECK(v.distinct);
  CHECK_FALSE(v.excess_flat.has_value());
  CHECK_FALSE(v.bad_flat.has_value());
  CHECK(v.smooth);

  SmoothnessVerdict dup = smoothness_check(spec, ZetaLift::zero(2));
  CHECK_FALSE(dup.distinct);
  REQUIRE(dup.duplicate_pair.has_value());
  CHECK(dup.duplicate_pair->members == std::vector<long>{1, 2});
  CHECK_FALSE(dup.smooth);
}

TEST_CASE("opposite-sign data cuts the same block") {
  SubtorusSpec spec = make_spec(1, 2, {{1}, {-1}});
  SmoothnessVerdict v = smoothness_check(spec, lift_of({{2, 0, 1}, {-2, 0, -1}}));
  CHECK_FALSE(v.distinct);
  REQUIRE(v.duplicate_pair.has_value());
  CHECK(v.duplicate_pair->members == std::vector<long>{1, 2});
}

TEST_CASE("generic offsets on the diagonal-circle configuration are accepted") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  SmoothnessVerdict v =
      smoothness_check(spec, lift_of({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  CHECK(v.distinct);
  CHECK_FALSE(v.excess_flat.has_value());
  CHECK_FALSE(v.bad_flat.has_value());
  CHECK(v.smooth);
}

TEST_CASE("a meeting pair with determinant two is flagged") {
  // Columns (1,0) and (1,2) meet at a point whenever their offsets are
  // consistent, but they do not span Z^2.
  SubtorusSpec spec = make_spec(2, 2, {{1, 0}, {1, 2}});
  SmoothnessVerdict v = smoothness_check(spec, lift_of({{0, 0, 0}, {1, 0, 0}}));
  CHECK(v.distinct);
  REQUIRE(v.bad_flat.has_value());
  CHECK(v.bad_flat->members == std::vector<long>{1, 2});
  CHECK_FALSE(v.smooth);
}

TEST_CASE("verdict is invariant under translations and positive scalings") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    SubtorusSpec spec = oracle::random_spec(rng, 5, 3, 2);
    ZetaLift tau = random_lift(rng, spec.d, 3);
    SmoothnessVerdict base = smoothness_check(spec, tau);

    std::vector<Rat> s(static_cast<size_t>(3 * spec.n));
    for (auto& c : s)
      c = Rat(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 3));
    SmoothnessVerdict moved = smoothness_check(spec, translate_level(spec, tau, s));
    CHECK(moved.smooth == base.smooth);
    CHECK(moved.distinct == base.distinct);
    CHECK(moved.excess_flat.has_value() == base.excess_flat.has_value());
    CHECK(moved.bad_flat.has_value() == base.bad_flat.has_value());

    ZetaLift scaled = tau;
    for (auto& row : scaled.tau)
      for (auto& c : row) c *= Rat(3, 7);
    SmoothnessVerdict sc = smoothness_check(spec, scaled);
    CHECK(sc.smooth == base.smooth);
    CHECK(sc.distinct == base.distinct);
  }
}

TEST_CASE("sampled levels are certified and deterministic in the seed") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  SampledLevel a = sample_generic_zeta(spec, 1, 10);
  CHECK(a.verdict.smooth);
  CHECK(a.attempts >= 1);
  CHECK(smoothness_check(spec, a.tau).smooth); // idempotent re-check
  SampledLevel b = sample_generic_zeta(spec, 1, 10);
  CHECK(a.tau == b.tau);
  CHECK(a.attempts == b.attempts);
}

TEST_CASE("square identity configurations accept the first distinct draw") {
  SubtorusSpec spec = make_spec(2, 2, {{1, 0}, {0, 1}});
  SampledLevel s = sample_generic_zeta(spec, 5, 4);
  CHECK(s.attempts == 1); // no n+1 subsets exist and e_1, e_2 never coincide
  CHECK(s.verdict.smooth);
}

TEST_CASE("sampling refuses non-unimodular subtori") {
  SubtorusSpec spec = make_spec(2, 3, {{1, 0}, {0, 1}, {1, 2}});
  CHECK_THROWS_AS(sample_generic_zeta(spec, 1, 10), Error);
  try {
    sample_generic_zeta(spec, 1, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("bound zero exhausts the budget when d exceeds n") {
  SubtorusSpec spec = diagonal_circle_spec(2);
  try {
    sample_generic_zeta(spec, 1, 0, 25);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExhaustedAttempts);
  }
}

TEST_CASE("level coordinates pair with the kernel and kill translations") {
  SubtorusSpec spec = diagonal_circle_spec(2); // kernel spanned by (1,1,1)
  ZetaLift tau = lift_of({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  auto zeta = level_coordinates(spec, tau);
  REQUIRE(zeta.size() == 1);
  CHECK(zeta[0][0] == 1);
  CHECK(zeta[0][1] == 1);
  CHECK(zeta[0][2] == 0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SubtorusSpec sp = oracle::random_spec(rng, 5, 3, 2);
    ZetaLift t = random_lift(rng, sp.d, 3);
    std::vector<Rat> s(static_cast<size_t>(3 * sp.n));
    for (auto& c : s) c = Rat(static_cast<long>(rng() % 9) - 4);
    CHECK(level_coordinates(sp, t) == level_coordinates(sp, translate_level(sp, t, s)));
  }
}

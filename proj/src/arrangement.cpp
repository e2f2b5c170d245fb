#include "hypertoric/arrangement.hpp"

#include <random>

#include "hypertoric/detail/subsets.hpp"

namespace hypertoric {

namespace {

void check_tau_shape(const SubtorusSpec& spec, const ZetaLift& tau) {
  if (tau.d() != spec.d)
    throw Error(ErrorCode::ShapeMismatch,
                "level lift has " + std::to_string(tau.tau.size()) +
                    " triples, expected " + std::to_string(spec.d));
}

// Blocks k and l cut the same affine set iff their defining data agree up
// to a global sign (columns are primitive, so no other scaling is possible).
bool same_block(const SubtorusSpec& spec, const ZetaLift& tau, long k, long l) {
  bool plus = true, minus = true;
  for (long i = 0; i < spec.n; ++i) {
    if (spec.U.at(i, k) != spec.U.at(i, l)) plus = false;
    if (spec.U.at(i, k) != -spec.U.at(i, l)) minus = false;
  }
  for (int i = 0; i < 3; ++i) {
    if (tau.tau[static_cast<size_t>(k)][static_cast<size_t>(i)] !=
        tau.tau[static_cast<size_t>(l)][static_cast<size_t>(i)])
      plus = false;
    if (tau.tau[static_cast<size_t>(k)][static_cast<size_t>(i)] !=
        -tau.tau[static_cast<size_t>(l)][static_cast<size_t>(i)])
      minus = false;
  }
  return plus || minus;
}

} // namespace

FlatSolve hyperplane_solve(const SubtorusSpec& spec, const ZetaLift& tau,
                           const IndexSubset& S) {
  require_valid(spec);
  check_tau_shape(spec, tau);
  if (S.members.empty())
    throw Error(ErrorCode::PreconditionViolated, "subset must be nonempty");
  for (long p : S.members)
    if (p < 1 || p > spec.d)
      throw Error(ErrorCode::PreconditionViolated,
                  "subset index " + std::to_string(p) + " out of range");

  std::vector<long> cols;
  for (long p : S.members) cols.push_back(p - 1);
  // Rows of A are the selected columns of U; all three components share it.
  QMat A = to_rational(spec.U.select_columns(cols)).transpose();

  FlatSolve out;
  std::vector<std::vector<Rat>> parts;
  long rank = 0;
  for (int i = 0; i < 3; ++i) {
    std::vector<Rat> b;
    for (long p : S.members)
      b.push_back(tau.tau[static_cast<size_t>(p - 1)][static_cast<size_t>(i)]);
    RationalSolve sol = solve_linear(A, b);
    if (!sol.consistent) return out; // empty, dim -1
    rank = sol.rank;
    parts.push_back(std::move(sol.particular));
  }
  out.empty = false;
  out.dim = 3 * (spec.n - rank);
  out.point.reserve(static_cast<size_t>(3 * spec.n));
  for (const auto& part : parts)
    out.point.insert(out.point.end(), part.begin(), part.end());
  return out;
}

SmoothnessVerdict smoothness_check(const SubtorusSpec& spec, const ZetaLift& tau) {
  require_valid(spec);
  check_tau_shape(spec, tau);

  SmoothnessVerdict v;
  v.distinct = true;

  // Representatives: first index of each distinct constraint block.
  std::vector<long> reps;
  for (long k = 0; k < spec.d; ++k) {
    long dup_of = -1;
    for (long r : reps)
      if (same_block(spec, tau, r, k)) {
        dup_of = r;
        break;
      }
    if (dup_of >= 0) {
      if (v.distinct) {
        v.distinct = false;
        v.duplicate_pair = IndexSubset::of({dup_of + 1, k + 1});
      }
    } else {
      reps.push_back(k);
    }
  }

  long m = static_cast<long>(reps.size());

  // No n+1 distinct blocks may share a point.
  if (m >= spec.n + 1) {
    detail::for_each_subset(m, spec.n + 1, [&](const std::vector<long>& pos) {
      std::vector<long> members;
      for (long p : pos) members.push_back(reps[static_cast<size_t>(p)] + 1);
      FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of(members));
      if (!fs.empty) {
        v.excess_flat = IndexSubset::of(members);
        return false;
      }
      return true;
    });
  }

  // Any n blocks that do meet must select a Z^n-basis from the columns.
  if (m >= spec.n) {
    detail::for_each_subset(m, spec.n, [&](const std::vector<long>& pos) {
      std::vector<long> members, cols;
      for (long p : pos) {
        members.push_back(reps[static_cast<size_t>(p)] + 1);
        cols.push_back(reps[static_cast<size_t>(p)]);
      }
      FlatSolve fs = hyperplane_solve(spec, tau, IndexSubset::of(members));
      if (fs.empty) return true;
      Int det = determinant(spec.U.select_columns(cols));
      if (det != 1 && det != -1) {
        v.bad_flat = IndexSubset::of(members);
        return false;
      }
      return true;
    });
  }

  v.smooth = v.distinct && !v.excess_flat && !v.bad_flat;
  return v;
}

SampledLevel sample_generic_zeta(const SubtorusSpec& spec, std::uint64_t seed,
                                 long bound, long max_attempts) {
  require_valid(spec);
  if (bound < 0)
    throw Error(ErrorCode::PreconditionViolated, "bound must be nonnegative");
  if (max_attempts < 1)
    throw Error(ErrorCode::PreconditionViolated, "attempt budget must be positive");
  if (!check_hypothesis_unimodular(spec).holds)
    throw Error(ErrorCode::PreconditionViolated,
                "independent column subsets must have determinant +-1 before "
                "generic levels can certify smoothness");

  std::mt19937_64 gen(seed);
  const unsigned long span = static_cast<unsigned long>(2 * bound + 1);
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    ZetaLift tau = ZetaLift::zero(spec.d);
    for (long k = 0; k < spec.d; ++k)
      for (int i = 0; i < 3; ++i)
        tau.tau[static_cast<size_t>(k)][static_cast<size_t>(i)] =
            Rat(static_cast<long>(gen() % span) - bound);
    SmoothnessVerdict v = smoothness_check(spec, tau);
    if (v.smooth) return {std::move(tau), std::move(v), attempt};
  }
  throw Error(ErrorCode::ExhaustedAttempts,
              "no accepted level after " + std::to_string(max_attempts) +
                  " draws with bound " + std::to_string(bound));
}

std::vector<std::array<Rat, 3>> level_coordinates(const SubtorusSpec& spec,
                                                  const ZetaLift& tau) {
  require_valid(spec);
  check_tau_shape(spec, tau);
  Sublattice ker = kernel_sublattice(spec);
  std::vector<std::array<Rat, 3>> out(static_cast<size_t>(ker.rank()));
  for (long j = 0; j < ker.rank(); ++j)
    for (int i = 0; i < 3; ++i) {
      Rat acc = 0;
      for (long k = 0; k < spec.d; ++k)
        acc += tau.tau[static_cast<size_t>(k)][static_cast<size_t>(i)] *
               Rat(ker.basis.at(k, j));
      out[static_cast<size_t>(j)][static_cast<size_t>(i)] = acc;
    }
  return out;
}

ZetaLift translate_level(const SubtorusSpec& spec, const ZetaLift& tau,
                         const std::vector<Rat>& s) {
  require_valid(spec);
  check_tau_shape(spec, tau);
  if (static_cast<long>(s.size()) != 3 * spec.n)
    throw Error(ErrorCode::ShapeMismatch, "translation needs 3n entries");
  ZetaLift out = tau;
  for (long k = 0; k < spec.d; ++k)
    for (int i = 0; i < 3; ++i) {
      Rat acc = 0;
      for (long j = 0; j < spec.n; ++j)
        acc += s[static_cast<size_t>(i * spec.n + j)] * Rat(spec.U.at(j, k));
      out.tau[static_cast<size_t>(k)][static_cast<size_t>(i)] += acc;
    }
  return out;
}

} // namespace hypertoric

#include "hypertoric/asymptotics.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "hypertoric/errors.hpp"

namespace hypertoric {
namespace {

long ambient_metric_dim(const SubtorusSpec& spec) {
  return 4 * (spec.d - kernel_sublattice(spec).rank());
}

long cone_dim_of(long dim_M, const SigmaAnalysis& an) {
  return dim_M - an.dim_T_sigma + an.dim_T_sigma_cap_N;
}

void require_transversal(const SigmaAnalysis& an) {
  if (!an.transversal)
    throw Error(ErrorCode::NotTransversal,
                "direction vector lies inside the subtorus algebra; it "
                "generates no deformation transverse to the fibers");
}

bool is_squarefree(long v) {
  for (long p = 2; p * p <= v; ++p)
    if (v % (p * p) == 0) return false;
  return true;
}

// The first m squarefree integers >= 2; sqrt of these are pairwise
// Q-linearly independent together with 1.
std::vector<long> squarefree_values(long m) {
  std::vector<long> out;
  for (long v = 2; static_cast<long>(out.size()) < m; ++v)
    if (is_squarefree(v)) out.push_back(v);
  return out;
}

} // namespace

std::string to_string(MetricClass c) {
  switch (c) {
    case MetricClass::SINGULAR: return "SINGULAR";
    case MetricClass::QAC: return "QAC";
    case MetricClass::AC: return "AC";
  }
  return "?";
}

std::string to_string(DecayClass c) {
  return c == DecayClass::FULL_DECAY ? "FULL_DECAY" : "PARTIAL_DECAY";
}

InvariantReport invariant_report(const SubtorusSpec& spec, const ZetaLift& tau,
                                 const SigmaSpec& sigma) {
  require_valid(spec);
  SigmaAnalysis an = sigma_analysis(spec, sigma);
  require_transversal(an);

  InvariantReport rep;
  rep.dim_M = ambient_metric_dim(spec);
  rep.smoothness = smoothness_check(spec, tau);
  if (!rep.smoothness.smooth)
    rep.metric_class = MetricClass::SINGULAR;
  else
    rep.metric_class = check_ac_condition(spec).holds ? MetricClass::AC
                                                      : MetricClass::QAC;
  rep.volume_growth_undeformed = rep.dim_M;
  rep.volume_growth_deformed = rep.dim_M - 1;
  rep.cone_dim_undeformed = rep.dim_M;
  rep.cone_dim_deformed = cone_dim_of(rep.dim_M, an);
  rep.cone_descriptor = "(M_{0,sigma}/T_sigma) x Im H";
  rep.decay_class = an.I_sigma.members.empty() ? DecayClass::FULL_DECAY
                                               : DecayClass::PARTIAL_DECAY;
  rep.sigma = an;
  // Transversality keeps the closure strictly larger than its overlap with
  // the subtorus algebra, so the deformed cone loses at least one dimension.
  assert(rep.cone_dim_deformed <= rep.volume_growth_deformed);
  return rep;
}

DecayDetail decay_class_detail(const SubtorusSpec& spec,
                               const SigmaSpec& sigma) {
  require_valid(spec);
  SigmaAnalysis an = sigma_analysis(spec, sigma);
  require_transversal(an);

  DecayDetail out;
  if (an.I_sigma.members.empty()) {
    out.decay_class = DecayClass::FULL_DECAY;
    out.bound = "O(x_4^2 rho^{-1})";
  } else {
    out.decay_class = DecayClass::PARTIAL_DECAY;
    out.bound = "O(x_4^2 v_{1/2}^2)";
    out.flag = "non-decaying directions near Hhat_1";
  }
  return out;
}

std::vector<SlopeEntry> kronecker_slopes(const SubtorusSpec& spec,
                                         const SigmaSpec& sigma) {
  require_valid(spec);
  (void)sigma_analysis(spec, sigma); // shape and nonzero-direction checks

  std::vector<QuadraticSlope> symbol_values;
  symbol_values.reserve(sigma.symbols.size());
  for (const auto& sym : sigma.symbols) {
    try {
      symbol_values.push_back(parse_slope(sym.name));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError)
        throw Error(ErrorCode::UnsupportedNumberField,
                    "symbol '" + sym.name +
                        "' does not denote an element of a real quadratic "
                        "field, so exact slopes are undefined");
      throw;
    }
  }

  std::vector<QuadraticSlope> a;
  a.reserve(spec.d);
  for (long p = 0; p < spec.d; ++p) {
    QuadraticSlope acc = QuadraticSlope::rational(Rat(0));
    for (long j = 0; j < sigma.coeffs.cols(); ++j)
      acc = acc + QuadraticSlope::rational(sigma.coeffs.at(p, j)) *
                      symbol_values[static_cast<std::size_t>(j)];
    a.push_back(acc);
  }

  std::vector<SlopeEntry> out;
  for (long i = 0; i < spec.d; ++i) {
    if (a[static_cast<std::size_t>(i)].is_zero()) continue;
    for (long j = i + 1; j < spec.d; ++j)
      out.push_back(SlopeEntry{{i + 1, j + 1},
                               a[static_cast<std::size_t>(j)] /
                                   a[static_cast<std::size_t>(i)]});
  }
  return out;
}

std::vector<SigmaScanEntry> scan_sigma_cone_dims(const SubtorusSpec& spec) {
  require_valid(spec);
  const long d = spec.d;
  const long dim_M = ambient_metric_dim(spec);
  std::vector<long> roots = squarefree_values(d);

  std::vector<SigmaScanEntry> out;
  auto push = [&](const std::string& family, SigmaSpec s) {
    SigmaScanEntry entry;
    entry.family = family;
    entry.sigma = std::move(s);
    SigmaAnalysis an = sigma_analysis(spec, entry.sigma);
    entry.transversal = an.transversal;
    if (an.transversal) entry.cone_dim_deformed = cone_dim_of(dim_M, an);
    out.push_back(std::move(entry));
  };

  // Prefix of m Q-linearly independent irrational entries, zeros after.
  for (long m = 1; m <= d; ++m) {
    SigmaSpec s;
    s.symbols.push_back({"1", 1.0});
    for (long j = 0; j < m; ++j) {
      long v = roots[static_cast<std::size_t>(j)];
      s.symbols.push_back({"sqrt(" + std::to_string(v) + ")",
                           std::sqrt(static_cast<double>(v))});
    }
    s.coeffs = QMat(d, m + 1);
    std::ostringstream desc;
    desc << "irrational-prefix: a = (";
    for (long p = 0; p < d; ++p) {
      if (p < m) {
        s.coeffs.at(p, p + 1) = Rat(1);
        desc << s.symbols[static_cast<std::size_t>(p + 1)].name;
      } else {
        desc << "0";
      }
      desc << (p + 1 < d ? ", " : ")");
    }
    push(desc.str(), std::move(s));
  }

  // Single coordinate directions a = e_p.
  for (long p = 1; p <= d; ++p) {
    std::vector<Rat> a(static_cast<std::size_t>(d), Rat(0));
    a[static_cast<std::size_t>(p - 1)] = Rat(1);
    push("coordinate: a = e_" + std::to_string(p), sigma_from_rationals(a));
  }

  // The diagonal direction a = (1, ..., 1).
  push("diagonal: a = (1, ..., 1)",
       sigma_from_rationals(std::vector<Rat>(static_cast<std::size_t>(d), Rat(1))));

  return out;
}

} // namespace hypertoric

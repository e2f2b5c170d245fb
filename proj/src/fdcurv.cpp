#include "hypertoric/fdcurv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypertoric/errors.hpp"

namespace hypertoric {
namespace {

// Flat storage for a rank-4 tensor with all indices of range k.
struct Tensor4 {
  long k = 0;
  std::vector<double> v;
  explicit Tensor4(long dim = 0)
      : k(dim), v(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}
  double& at(long a, long b, long c, long d) {
    return v[static_cast<std::size_t>(((a * k + b) * k + c) * k + d)];
  }
  double at(long a, long b, long c, long d) const {
    return v[static_cast<std::size_t>(((a * k + b) * k + c) * k + d)];
  }
};

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Christoffel symbols of the field at y with central differences of step h.
// gamma[l] is the symmetric matrix Gamma^l_{ij}.
std::vector<Eigen::MatrixXd> christoffel(const MetricField& field,
                                         const Eigen::VectorXd& y, double h,
                                         long k) {
  std::vector<Eigen::MatrixXd> dG(static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = h;
    dG[static_cast<std::size_t>(i)] = (field(y + e) - field(y - e)) / (2 * h);
  }
  Eigen::MatrixXd G = field(y);
  Eigen::LDLT<Eigen::MatrixXd> solver(G);
  std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(k),
                                     Eigen::MatrixXd::Zero(k, k));
  for (long i = 0; i < k; ++i)
    for (long j = i; j < k; ++j) {
      Eigen::VectorXd b(k);
      for (long mI = 0; mI < k; ++mI)
        b(mI) = 0.5 * (dG[static_cast<std::size_t>(i)](mI, j) +
                       dG[static_cast<std::size_t>(j)](mI, i) -
                       dG[static_cast<std::size_t>(mI)](i, j));
      Eigen::VectorXd g = solver.solve(b);
      for (long l = 0; l < k; ++l) {
        gamma[static_cast<std::size_t>(l)](i, j) = g(l);
        gamma[static_cast<std::size_t>(l)](j, i) = g(l);
      }
    }
  return gamma;
}

// Covariant curvature components R(e_i, e_j) e_c . e_d at x0, step h.
Tensor4 raw_riemann(const MetricField& field, const Eigen::VectorXd& x0,
                    double h, long k) {
  auto gamma0 = christoffel(field, x0, h, k);
  // dgamma[i][l](j, c) = d_i Gamma^l_{jc}
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(
      static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = h;
    auto plus = christoffel(field, x0 + e, h, k);
    auto minus = christoffel(field, x0 - e, h, k);
    auto& row = dgamma[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(k));
    for (long l = 0; l < k; ++l)
      row[static_cast<std::size_t>(l)] =
          (plus[static_cast<std::size_t>(l)] -
           minus[static_cast<std::size_t>(l)]) /
          (2 * h);
  }
  Eigen::MatrixXd G0 = field(x0);
  Tensor4 R(k);
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < k; ++j)
      for (long c = 0; c < k; ++c) {
        Eigen::VectorXd up(k); // R^l_{ijc}
        for (long l = 0; l < k; ++l) {
          double val = dgamma[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(l)](j, c) -
                       dgamma[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(l)](i, c);
          for (long mI = 0; mI < k; ++mI)
            val += gamma0[static_cast<std::size_t>(l)](i, mI) *
                       gamma0[static_cast<std::size_t>(mI)](j, c) -
                   gamma0[static_cast<std::size_t>(l)](j, mI) *
                       gamma0[static_cast<std::size_t>(mI)](i, c);
          up(l) = val;
        }
        Eigen::VectorXd lowered = G0 * up;
        for (long dI = 0; dI < k; ++dI) R.at(i, j, c, dI) = lowered(dI);
      }
  return R;
}

} // namespace

double CurvatureReport::riem(long a, long b, long c, long d) const {
  return riemann[static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d)];
}

double CurvatureReport::max_abs_sectional() const {
  double m = 0;
  for (const auto& s : sectional) m = std::max(m, std::abs(s.value));
  return m;
}

CurvatureReport fd_curvature(const MetricField& field,
                             const Eigen::VectorXd& x0, double h,
                             int richardson, double step_check_factor) {
  if (h <= 0)
    throw Error(ErrorCode::PreconditionViolated, "step must be positive");
  if (richardson < 1)
    throw Error(ErrorCode::PreconditionViolated,
                "at least one refinement level is required");
  long k = field(x0).rows();

  std::vector<Tensor4> levels;
  for (int l = 0; l < richardson; ++l)
    levels.push_back(raw_riemann(field, x0, h / std::pow(2.0, l), k));

  if (richardson >= 2) {
    const auto& fine = levels[static_cast<std::size_t>(richardson - 1)].v;
    const auto& coarse = levels[static_cast<std::size_t>(richardson - 2)].v;
    double diff = 0;
    for (std::size_t i = 0; i < fine.size(); ++i)
      diff = std::max(diff, std::abs(fine[i] - coarse[i]));
    // Below this floor the tensor counts as zero and any disagreement is
    // noise, not a step-size problem.
    double scale = std::max(1e-8, max_abs(fine));
    if (diff / scale > step_check_factor)
      throw Error(ErrorCode::StepTooLarge,
                  "finite-difference levels disagree; reduce the base step "
                  "or relax the disagreement factor");
  }

  // Step-halving extrapolation for the second-order central scheme.
  std::vector<Tensor4> table = levels;
  for (int stage = 1; stage < richardson; ++stage) {
    double w = std::pow(4.0, stage);
    for (int l = 0; l + stage < richardson; ++l) {
      auto& lo = table[static_cast<std::size_t>(l)].v;
      const auto& hi = table[static_cast<std::size_t>(l + 1)].v;
      for (std::size_t i = 0; i < lo.size(); ++i)
        lo[i] = (w * hi[i] - lo[i]) / (w - 1.0);
    }
  }
  Tensor4 R = table[0];

  // Enforce the pair symmetries, recording how much cleanup was needed.
  double sym_res = 0;
  Tensor4 Rs(k);
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k; ++b)
      for (long c = 0; c < k; ++c)
        for (long d = 0; d < k; ++d) {
          double anti = 0.25 * (R.at(a, b, c, d) - R.at(b, a, c, d) -
                                R.at(a, b, d, c) + R.at(b, a, d, c));
          Rs.at(a, b, c, d) = anti;
          sym_res = std::max(sym_res, std::abs(R.at(a, b, c, d) - anti));
        }
  Tensor4 Rp(k);
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k; ++b)
      for (long c = 0; c < k; ++c)
        for (long d = 0; d < k; ++d) {
          double v = 0.5 * (Rs.at(a, b, c, d) + Rs.at(c, d, a, b));
          Rp.at(a, b, c, d) = v;
          sym_res = std::max(sym_res, std::abs(Rs.at(a, b, c, d) - v));
        }

  // Orthonormal frame from the Cholesky factor of the metric at the center.
  Eigen::MatrixXd G0 = field(x0);
  Eigen::LLT<Eigen::MatrixXd> llt(G0);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::PreconditionViolated,
                "metric at the probe point is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd E =
      L.transpose().triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXd::Identity(k, k)); // columns: orthonormal frame

  // Transform all four slots into the orthonormal frame.
  auto contract = [&](const Tensor4& T, int slot) {
    Tensor4 out(k);
    for (long a = 0; a < k; ++a)
      for (long b = 0; b < k; ++b)
        for (long c = 0; c < k; ++c)
          for (long d = 0; d < k; ++d) {
            double acc = 0;
            for (long i = 0; i < k; ++i) {
              switch (slot) {
                case 0: acc += T.at(i, b, c, d) * E(i, a); break;
                case 1: acc += T.at(a, i, c, d) * E(i, b); break;
                case 2: acc += T.at(a, b, i, d) * E(i, c); break;
                default: acc += T.at(a, b, c, i) * E(i, d); break;
              }
            }
            out.at(a, b, c, d) = acc;
          }
    return out;
  };
  Tensor4 Ron = Rp;
  for (int slot = 0; slot < 4; ++slot) Ron = contract(Ron, slot);

  CurvatureReport rep;
  rep.dim = k;
  rep.riemann = Ron.v;
  rep.symmetry_residual = sym_res;
  for (long a = 0; a < k; ++a)
    for (long b = a + 1; b < k; ++b)
      rep.sectional.push_back({a, b, Ron.at(a, b, b, a)});
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(k, k);
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k; ++b)
      for (long c = 0; c < k; ++c) ric(a, b) += Ron.at(c, a, b, c);
  rep.ricci_norm = ric.norm();
  double kret = 0, bianchi = 0;
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k; ++b)
      for (long c = 0; c < k; ++c)
        for (long d = 0; d < k; ++d) {
          double v = Ron.at(a, b, c, d);
          kret += v * v;
          double cyc = v + Ron.at(b, c, a, d) + Ron.at(c, a, b, d);
          bianchi = std::max(bianchi, std::abs(cyc));
        }
  rep.kretschmann = kret;
  rep.bianchi_residual = bianchi;
  return rep;
}

namespace {

// Chart around m0: x maps to the level-set point whose displacement from m0
// has slice coordinates x. The pinned-coordinate system makes the chart
// differential available in closed form at every stencil point.
class QuotientChart {
 public:
  QuotientChart(const AmbientPoint& m0, Eigen::MatrixXd slice,
                const ProbeConfig& cfg)
      : m0_(m0.flat()), H_(std::move(slice)), cfg_(cfg) {}

  Eigen::MatrixXd operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd p = solve_point(x);
    AmbientPoint pt = AmbientPoint::from_flat(p);
    Eigen::MatrixXd V = chart_differential(pt);
    return metric_in_directions(pt, cfg_, V);
  }

 private:
  Eigen::VectorXd constraint(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& x) const {
    AmbientPoint pt = AmbientPoint::from_flat(p);
    MomentValues mv = moment_eval(pt, cfg_.spec);
    Eigen::VectorXd F(mv.mu_N.size() + H_.cols());
    F.head(mv.mu_N.size()) = mv.mu_N + cfg_.zeta;
    F.tail(H_.cols()) = H_.transpose() * (p - m0_) - x;
    return F;
  }

  Eigen::MatrixXd constraint_jacobian(const AmbientPoint& pt) const {
    Eigen::MatrixXd J = mu_N_jacobian(pt, cfg_.spec);
    Eigen::MatrixXd DC(J.rows() + H_.cols(), H_.rows());
    DC.topRows(J.rows()) = J;
    DC.bottomRows(H_.cols()) = H_.transpose();
    return DC;
  }

  Eigen::VectorXd solve_point(const Eigen::VectorXd& x) const {
    Eigen::VectorXd p = m0_ + H_ * x;
    bool polished = false;
    for (int it = 0; it < cfg_.max_newton_iterations; ++it) {
      Eigen::VectorXd F = constraint(p, x);
      if (F.norm() <= 0.01 * cfg_.newton_tol) return p;
      if (F.norm() <= cfg_.newton_tol) {
        if (polished) return p;
        polished = true;
      }
      Eigen::MatrixXd DC =
          constraint_jacobian(AmbientPoint::from_flat(p));
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          DC, Eigen::ComputeThinU | Eigen::ComputeThinV);
      double smax = svd.singularValues()(0);
      double smin = svd.singularValues()(svd.singularValues().size() - 1);
      if (smax <= 1e-14 || smin <= 1e-12 * smax)
        throw Error(ErrorCode::SingularJacobian,
                    "chart constraints degenerate at a stencil point");
      p -= svd.solve(F);
    }
    throw Error(ErrorCode::NoConvergence,
                "chart point solve exceeded the iteration budget");
  }

  Eigen::MatrixXd chart_differential(const AmbientPoint& pt) const {
    Eigen::MatrixXd DC = constraint_jacobian(pt);
    Eigen::MatrixXd rhs =
        Eigen::MatrixXd::Zero(DC.rows(), H_.cols());
    rhs.bottomRows(H_.cols()) =
        Eigen::MatrixXd::Identity(H_.cols(), H_.cols());
    Eigen::LDLT<Eigen::MatrixXd> gram(DC * DC.transpose());
    return DC.transpose() * gram.solve(rhs);
  }

  Eigen::VectorXd m0_;
  Eigen::MatrixXd H_;
  ProbeConfig cfg_;
};

} // namespace

CurvatureReport curvature_probe(const AmbientPoint& m, const ProbeConfig& cfg) {
  MetricSample sample = metric_at(m, cfg); // validates level and chart
  QuotientChart chart(m, sample.slice, cfg);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sample.slice.cols());
  return fd_curvature([&chart](const Eigen::VectorXd& x) { return chart(x); },
                      x0, cfg.fd_step, cfg.richardson, cfg.step_check_factor);
}

DecayFit decay_fit(const ProbeConfig& cfg, const RaySpec& ray,
                   DecayQuantity quantity, const std::vector<double>& radii) {
  if (radii.size() < 4)
    throw Error(ErrorCode::PreconditionViolated,
                "at least four radii are required for a fit");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] <= 0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw Error(ErrorCode::PreconditionViolated,
                  "radii must be positive and strictly increasing");
  Eigen::VectorXd dir = ray.direction;
  if (dir.size() != 4 * cfg.spec.d)
    throw Error(ErrorCode::ShapeMismatch, "ray direction has wrong size");
  double dn = dir.norm();
  if (dn <= 0)
    throw Error(ErrorCode::PreconditionViolated, "ray direction is zero");
  dir /= dn;

  std::vector<double> s_grid;
  s_grid.push_back(0.0);
  s_grid.insert(s_grid.end(), radii.begin(), radii.end());

  // Project each ray point, measure the quotient speed of the ray there,
  // and accumulate metric distance by the trapezoid rule.
  std::vector<AmbientPoint> points;
  std::vector<double> speeds;
  AmbientPoint prev = ray.base;
  double prev_s = 0.0;
  for (double s : s_grid) {
    Eigen::VectorXd start = prev.flat() + (s - prev_s) * dir;
    AmbientPoint p = level_project(AmbientPoint::from_flat(start), cfg);
    Eigen::VectorXd v = dir;
    Eigen::MatrixXd J = mu_N_jacobian(p, cfg.spec);
    if (J.rows() > 0) {
      Eigen::LDLT<Eigen::MatrixXd> gram(J * J.transpose());
      v -= J.transpose() * gram.solve(J * v);
    }
    double sp = std::sqrt(metric_in_directions(p, cfg, v)(0, 0));
    points.push_back(p);
    speeds.push_back(sp);
    prev = p;
    prev_s = s;
  }
  std::vector<double> rho(s_grid.size(), 0.0);
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    rho[i] = rho[i - 1] +
             0.5 * (speeds[i] + speeds[i - 1]) * (s_grid[i] - s_grid[i - 1]);

  DecayFit fit;
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    double q = 0;
    if (quantity == DecayQuantity::V1) {
      MetricSample ms = metric_at(points[i], cfg);
      q = ms.xi_norm2 > 0 ? 1.0 / ms.xi_norm2
                          : std::numeric_limits<double>::infinity();
    } else {
      // The geometry varies on a length scale proportional to the flat
      // distance from the origin, so the probe step must grow with it:
      // a fixed step would sink far samples below the rounding floor.
      ProbeConfig local = cfg;
      local.fd_step = cfg.fd_step * std::max(1.0, points[i].flat().norm());
      q = curvature_probe(points[i], local).max_abs_sectional();
    }
    fit.samples.emplace_back(rho[i], q);
  }

  double qmax = 0;
  for (const auto& s : fit.samples) qmax = std::max(qmax, std::abs(s.second));
  if (qmax < cfg.degenerate_floor) {
    fit.degenerate = true;
    return fit;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  double n = static_cast<double>(fit.samples.size());
  for (const auto& s : fit.samples) {
    double lx = std::log(s.first);
    double ly = std::log(std::max(s.second, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double denom = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / denom;
  double ss_tot = syy - sy * sy / n;
  double ss_res = ss_tot - fit.exponent * (sxy - sx * sy / n);
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

} // namespace hypertoric

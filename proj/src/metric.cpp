#include "hypertoric/metric.hpp"

#include <cmath>
#include <limits>

#include "hypertoric/errors.hpp"

namespace hypertoric {
namespace {

void check_point_shape(const AmbientPoint& m) {
  if (m.z.size() != m.w.size())
    throw Error(ErrorCode::ShapeMismatch,
                "ambient point needs equally many z and w coordinates");
}

void check_point_vs_spec(const AmbientPoint& m, const SubtorusSpec& spec) {
  check_point_shape(m);
  if (m.d() != spec.d)
    throw Error(ErrorCode::ShapeMismatch,
                "ambient point has " + std::to_string(m.d()) +
                    " coordinates but the subtorus acts on " +
                    std::to_string(spec.d));
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Kernel basis as a double matrix, one column per subtorus circle.
Eigen::MatrixXd kernel_basis_numeric(const SubtorusSpec& spec) {
  Sublattice N = kernel_sublattice(spec);
  Eigen::MatrixXd B(spec.d, N.rank());
  for (long k = 0; k < spec.d; ++k)
    for (long j = 0; j < N.rank(); ++j)
      B(k, j) = N.basis.at(k, j).convert_to<double>();
  return B;
}

// Ambient tangent directions of the subtorus orbit at m.
Eigen::MatrixXd orbit_matrix(const AmbientPoint& m, const SubtorusSpec& spec) {
  Eigen::MatrixXd B = kernel_basis_numeric(spec);
  Eigen::MatrixXd K(4 * spec.d, B.cols());
  for (long j = 0; j < B.cols(); ++j)
    K.col(j) = killing_field(m, B.col(j));
  return K;
}

// Ambient metric matrix: flat, plus the graph term of the flow moment map
// in deformed mode.
Eigen::MatrixXd ambient_metric(const AmbientPoint& m, const ProbeConfig& cfg) {
  long dim = 4 * m.d();
  Eigen::MatrixXd GX = Eigen::MatrixXd::Identity(dim, dim);
  if (cfg.deformed) {
    Eigen::MatrixXd Ds = mu_sigma_jacobian(m, cfg.a);
    GX += Ds.transpose() * Ds;
  }
  return GX;
}

void check_orbit_rank(const Eigen::MatrixXd& K, const ProbeConfig& cfg) {
  if (K.cols() == 0) return;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smax <= cfg.degenerate_floor ||
      smin <= cfg.degenerate_floor * std::max(1.0, smax))
    throw Error(ErrorCode::DegenerateOrbit,
                "a subtorus orbit direction vanishes at this point; the "
                "quotient chart is invalid on the fixed locus");
}

double level_residual(const AmbientPoint& m, const ProbeConfig& cfg) {
  MomentValues mv = moment_eval(m, cfg.spec);
  if (cfg.zeta.size() != mv.mu_N.size())
    throw Error(ErrorCode::ShapeMismatch,
                "level coordinates have size " + std::to_string(cfg.zeta.size()) +
                    " but the reduced moment map has " +
                    std::to_string(mv.mu_N.size()));
  return (mv.mu_N + cfg.zeta).norm();
}

} // namespace

Eigen::MatrixXd ambient_metric_matrix(const AmbientPoint& m,
                                      const ProbeConfig& cfg) {
  check_point_vs_spec(m, cfg.spec);
  return ambient_metric(m, cfg);
}

Eigen::VectorXd AmbientPoint::flat() const {
  check_point_shape(*this);
  Eigen::VectorXd x(4 * d());
  for (long k = 0; k < d(); ++k) {
    x(4 * k + 0) = z[static_cast<std::size_t>(k)].real();
    x(4 * k + 1) = z[static_cast<std::size_t>(k)].imag();
    x(4 * k + 2) = w[static_cast<std::size_t>(k)].real();
    x(4 * k + 3) = w[static_cast<std::size_t>(k)].imag();
  }
  return x;
}

AmbientPoint AmbientPoint::from_flat(const Eigen::VectorXd& x) {
  if (x.size() % 4 != 0)
    throw Error(ErrorCode::ShapeMismatch,
                "flat coordinates must come four per quaternion");
  AmbientPoint m;
  long d = x.size() / 4;
  for (long k = 0; k < d; ++k) {
    m.z.emplace_back(x(4 * k + 0), x(4 * k + 1));
    m.w.emplace_back(x(4 * k + 2), x(4 * k + 3));
  }
  return m;
}

ProbeConfig make_probe_config(const SubtorusSpec& spec, const ZetaLift& tau,
                              const SigmaSpec& sigma, bool deformed) {
  ProbeConfig cfg;
  cfg.spec = spec;
  auto levels = level_coordinates(spec, tau);
  cfg.zeta = Eigen::VectorXd(3 * static_cast<long>(levels.size()));
  for (long j = 0; j < static_cast<long>(levels.size()); ++j)
    for (long i = 0; i < 3; ++i)
      cfg.zeta(3 * j + i) =
          rat_to_double(levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
  auto a = sigma_numeric(sigma);
  cfg.a = Eigen::VectorXd(static_cast<long>(a.size()));
  for (long k = 0; k < cfg.a.size(); ++k)
    cfg.a(k) = a[static_cast<std::size_t>(k)];
  cfg.deformed = deformed;
  return cfg;
}

MomentValues moment_eval(const AmbientPoint& m, const SubtorusSpec& spec,
                         const Eigen::VectorXd* a) {
  check_point_vs_spec(m, spec);
  MomentValues out;
  out.mu = Eigen::VectorXd(3 * spec.d);
  for (long k = 0; k < spec.d; ++k) {
    const auto& zk = m.z[static_cast<std::size_t>(k)];
    const auto& wk = m.w[static_cast<std::size_t>(k)];
    std::complex<double> zw = zk * wk;
    out.mu(3 * k + 0) = 0.5 * (-std::norm(zk) + std::norm(wk));
    out.mu(3 * k + 1) = -zw.imag(); // real part of i z w
    out.mu(3 * k + 2) = zw.real();  // imaginary part of i z w
  }
  Eigen::MatrixXd B = kernel_basis_numeric(spec);
  out.mu_N = Eigen::VectorXd::Zero(3 * B.cols());
  for (long j = 0; j < B.cols(); ++j)
    for (long k = 0; k < spec.d; ++k)
      for (long i = 0; i < 3; ++i)
        out.mu_N(3 * j + i) += B(k, j) * out.mu(3 * k + i);
  out.mu_sigma.setZero();
  if (a != nullptr) {
    if (a->size() != spec.d)
      throw Error(ErrorCode::ShapeMismatch,
                  "flow direction has wrong number of entries");
    for (long k = 0; k < spec.d; ++k)
      for (long i = 0; i < 3; ++i)
        out.mu_sigma(i) += (*a)(k)*out.mu(3 * k + i);
  }
  return out;
}

Eigen::VectorXd killing_field(const AmbientPoint& m, const Eigen::VectorXd& t) {
  check_point_shape(m);
  if (t.size() != m.d())
    throw Error(ErrorCode::ShapeMismatch,
                "torus direction has wrong number of entries");
  Eigen::VectorXd v(4 * m.d());
  for (long k = 0; k < m.d(); ++k) {
    const auto& zk = m.z[static_cast<std::size_t>(k)];
    const auto& wk = m.w[static_cast<std::size_t>(k)];
    v(4 * k + 0) = t(k) * zk.imag();  // Re(-i t z)
    v(4 * k + 1) = -t(k) * zk.real(); // Im(-i t z)
    v(4 * k + 2) = -t(k) * wk.imag(); // Re(i t w)
    v(4 * k + 3) = t(k) * wk.real();  // Im(i t w)
  }
  return v;
}

Eigen::MatrixXd moment_jacobian(const AmbientPoint& m) {
  check_point_shape(m);
  long d = m.d();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * d, 4 * d);
  for (long k = 0; k < d; ++k) {
    double x = m.z[static_cast<std::size_t>(k)].real();
    double y = m.z[static_cast<std::size_t>(k)].imag();
    double u = m.w[static_cast<std::size_t>(k)].real();
    double v = m.w[static_cast<std::size_t>(k)].imag();
    J(3 * k + 0, 4 * k + 0) = -x;
    J(3 * k + 0, 4 * k + 1) = -y;
    J(3 * k + 0, 4 * k + 2) = u;
    J(3 * k + 0, 4 * k + 3) = v;
    J(3 * k + 1, 4 * k + 0) = -v;
    J(3 * k + 1, 4 * k + 1) = -u;
    J(3 * k + 1, 4 * k + 2) = -y;
    J(3 * k + 1, 4 * k + 3) = -x;
    J(3 * k + 2, 4 * k + 0) = u;
    J(3 * k + 2, 4 * k + 1) = -v;
    J(3 * k + 2, 4 * k + 2) = x;
    J(3 * k + 2, 4 * k + 3) = -y;
  }
  return J;
}

Eigen::MatrixXd mu_N_jacobian(const AmbientPoint& m, const SubtorusSpec& spec) {
  check_point_vs_spec(m, spec);
  Eigen::MatrixXd J = moment_jacobian(m);
  Eigen::MatrixXd B = kernel_basis_numeric(spec);
  Eigen::MatrixXd JN = Eigen::MatrixXd::Zero(3 * B.cols(), 4 * spec.d);
  for (long j = 0; j < B.cols(); ++j)
    for (long k = 0; k < spec.d; ++k)
      for (long i = 0; i < 3; ++i)
        JN.row(3 * j + i) += B(k, j) * J.row(3 * k + i);
  return JN;
}

Eigen::MatrixXd mu_sigma_jacobian(const AmbientPoint& m,
                                  const Eigen::VectorXd& a) {
  check_point_shape(m);
  if (a.size() != m.d())
    throw Error(ErrorCode::ShapeMismatch,
                "flow direction has wrong number of entries");
  Eigen::MatrixXd J = moment_jacobian(m);
  Eigen::MatrixXd Js = Eigen::MatrixXd::Zero(3, 4 * m.d());
  for (long k = 0; k < m.d(); ++k)
    for (long i = 0; i < 3; ++i) Js.row(i) += a(k) * J.row(3 * k + i);
  return Js;
}

AmbientPoint level_project(const AmbientPoint& m0, const ProbeConfig& cfg) {
  check_point_vs_spec(m0, cfg.spec);
  if (cfg.newton_tol <= 0)
    throw Error(ErrorCode::PreconditionViolated, "newton_tol must be positive");
  long r = kernel_sublattice(cfg.spec).rank();
  if (r == 0) return m0;

  AmbientPoint m = m0;
  bool polished = false;
  for (int it = 0; it < cfg.max_newton_iterations; ++it) {
    MomentValues mv = moment_eval(m, cfg.spec);
    Eigen::VectorXd F = mv.mu_N + cfg.zeta;
    // One extra step after first meeting the tolerance pins the result to
    // the machine-precision solution, which keeps stencils of projected
    // points smooth in their parameters.
    if (F.norm() <= 0.01 * cfg.newton_tol) return m;
    if (F.norm() <= cfg.newton_tol) {
      if (polished) return m;
      polished = true;
    }
    Eigen::MatrixXd J = mu_N_jacobian(m, cfg.spec);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax <= 1e-14 || smin <= 1e-12 * smax)
      throw Error(ErrorCode::SingularJacobian,
                  "moment-map Jacobian drops rank along the projection; "
                  "the level set is not a graph near this point");
    Eigen::VectorXd step = svd.solve(F); // minimum-norm Newton step
    m = AmbientPoint::from_flat(m.flat() - step);
  }
  throw Error(ErrorCode::NoConvergence,
              "level projection did not reach the residual tolerance "
              "within the iteration budget");
}

Eigen::MatrixXd metric_in_directions(const AmbientPoint& m,
                                     const ProbeConfig& cfg,
                                     const Eigen::MatrixXd& directions) {
  check_point_vs_spec(m, cfg.spec);
  if (directions.rows() != 4 * cfg.spec.d)
    throw Error(ErrorCode::ShapeMismatch,
                "directions must be ambient tangent vectors");
  Eigen::MatrixXd GX = ambient_metric(m, cfg);
  Eigen::MatrixXd K = orbit_matrix(m, cfg.spec);
  check_orbit_rank(K, cfg);

  Eigen::MatrixXd PD = directions;
  Eigen::LDLT<Eigen::MatrixXd> orbit_gram;
  if (K.cols() > 0) {
    orbit_gram.compute(K.transpose() * GX * K);
    PD -= K * orbit_gram.solve(K.transpose() * GX * directions);
  }
  Eigen::MatrixXd M = PD.transpose() * GX * PD;
  if (cfg.deformed) {
    Eigen::VectorXd xi = killing_field(m, cfg.a);
    Eigen::VectorXd xi_h = xi;
    if (K.cols() > 0)
      xi_h -= K * orbit_gram.solve(K.transpose() * GX * xi);
    double xn = xi_h.dot(GX * xi_h);
    Eigen::VectorXd u = PD.transpose() * GX * xi_h;
    M -= u * u.transpose() / (1.0 + xn);
  }
  return 0.5 * (M + M.transpose());
}

MetricSample metric_at(const AmbientPoint& m, const ProbeConfig& cfg) {
  check_point_vs_spec(m, cfg.spec);
  double residual = level_residual(m, cfg);
  double allow = std::max(1e-8, 100.0 * cfg.newton_tol);
  if (residual > allow)
    throw Error(ErrorCode::PreconditionViolated,
                "point is off the level set (residual " +
                    std::to_string(residual) + "); project it first");

  long d = cfg.spec.d;
  long r = kernel_sublattice(cfg.spec).rank();
  long quotient_dim = 4 * d - 4 * r;

  // Orthonormal basis of the level tangent space.
  Eigen::MatrixXd Q;
  if (r == 0) {
    Q = Eigen::MatrixXd::Identity(4 * d, 4 * d);
  } else {
    Eigen::MatrixXd J = mu_N_jacobian(m, cfg.spec);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    Q = svd.matrixV().rightCols(4 * d - 3 * r);
  }

  Eigen::MatrixXd K = orbit_matrix(m, cfg.spec);
  check_orbit_rank(K, cfg);

  // Slice: the part of the level tangent space flat-orthogonal to the orbit.
  Eigen::MatrixXd S;
  if (r == 0) {
    S = Q;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q.transpose() * K,
                                          Eigen::ComputeFullU);
    S = Q * svd.matrixU().rightCols(quotient_dim);
  }

  MetricSample sample;
  sample.base = m;
  sample.slice = S;
  sample.G = metric_in_directions(m, cfg, S);

  Eigen::MatrixXd GX = ambient_metric(m, cfg);
  Eigen::VectorXd xi = killing_field(m, cfg.a);
  Eigen::VectorXd xi_h = xi;
  if (K.cols() > 0) {
    Eigen::LDLT<Eigen::MatrixXd> orbit_gram(K.transpose() * GX * K);
    xi_h -= K * orbit_gram.solve(K.transpose() * GX * xi);
  }
  sample.xi_norm2 = xi_h.dot(GX * xi_h);
  sample.V1 = sample.xi_norm2 > 0
                  ? 1.0 / sample.xi_norm2
                  : std::numeric_limits<double>::infinity();
  sample.tn_fiber_norm2 =
      cfg.deformed ? sample.xi_norm2 / (1.0 + sample.xi_norm2) : 0.0;
  return sample;
}

MetricSample gh_oracle(const AmbientPoint& m) {
  check_point_shape(m);
  if (m.d() != 1)
    throw Error(ErrorCode::DimensionMismatch,
                "the closed-form reference exists only for one quaternionic "
                "coordinate");
  double norm2 = std::norm(m.z[0]) + std::norm(m.w[0]);
  double r = 0.5 * norm2;
  double V = 1.0 + 1.0 / (2.0 * r);
  MetricSample sample;
  sample.base = m;
  sample.slice = Eigen::MatrixXd::Identity(4, 4);
  sample.G = Eigen::MatrixXd::Zero(4, 4);
  sample.G(0, 0) = sample.G(1, 1) = sample.G(2, 2) = V;
  sample.G(3, 3) = 1.0 / V;
  sample.xi_norm2 = 2.0 * r;
  sample.V1 = 1.0 / (2.0 * r);
  sample.tn_fiber_norm2 = 2.0 * r / (1.0 + 2.0 * r);
  return sample;
}

Eigen::MatrixXd gh_chart_metric(const Eigen::VectorXd& x) {
  if (x.size() != 4)
    throw Error(ErrorCode::ShapeMismatch,
                "reference chart lives on (X, Y, Z, theta)");
  double X = x(0), Y = x(1), Z = x(2);
  double rho = std::sqrt(X * X + Y * Y + Z * Z);
  double V = 1.0 + 1.0 / (2.0 * rho);
  double plane2 = X * X + Y * Y;
  Eigen::Vector3d A = Eigen::Vector3d::Zero();
  if (plane2 > 1e-30) {
    double c = -0.5 * (1.0 - Z / rho) / plane2;
    A(0) = c * (-Y);
    A(1) = c * X;
  }
  Eigen::MatrixXd G(4, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      G(i, j) = V * (i == j ? 1.0 : 0.0) + A(i) * A(j) / V;
  for (int i = 0; i < 3; ++i) {
    G(i, 3) = A(i) / V;
    G(3, i) = A(i) / V;
  }
  G(3, 3) = 1.0 / V;
  return G;
}

} // namespace hypertoric

#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "hypertoric/arrangement.hpp"
#include "hypertoric/lattice.hpp"

namespace hypertoric {

// A point of the flat quaternionic ambient space, split into the two
// complex coordinates per quaternion, with an optional imaginary-quaternion
// tail used by deformed charts.
struct AmbientPoint {
  std::vector<std::complex<double>> z;
  std::vector<std::complex<double>> w;
  std::optional<std::array<double, 3>> q;

  long d() const { return static_cast<long>(z.size()); }

  // Real coordinates, four per quaternion: (Re z_k, Im z_k, Re w_k, Im w_k).
  Eigen::VectorXd flat() const;
  static AmbientPoint from_flat(const Eigen::VectorXd& x);
};

// Numeric context for every metric-lab evaluation.
struct ProbeConfig {
  SubtorusSpec spec;
  Eigen::VectorXd zeta; // 3 per kernel column: zeta[3j + i], component i
  Eigen::VectorXd a;    // flow direction, one entry per coordinate
  bool deformed = false;
  double newton_tol = 1e-12;
  double fd_step = 1e-4;
  int richardson = 2;             // number of step-halving levels
  double step_check_factor = 0.5; // allowed disagreement between levels
  double degenerate_floor = 1e-10;
  int max_newton_iterations = 60;
};

// Builds the numeric context from the exact inputs: the level lift is
// converted to coordinates over the canonical kernel basis and the flow
// direction to its declared numeric values.
ProbeConfig make_probe_config(const SubtorusSpec& spec, const ZetaLift& tau,
                              const SigmaSpec& sigma, bool deformed);

// Moment-map values at a point.
struct MomentValues {
  Eigen::VectorXd mu;       // 3 per coordinate: mu[3k + i]
  Eigen::VectorXd mu_N;     // 3 per kernel column: mu_N[3j + i]
  Eigen::Vector3d mu_sigma; // weighted by the flow direction (zero if absent)
};

MomentValues moment_eval(const AmbientPoint& m, const SubtorusSpec& spec,
                         const Eigen::VectorXd* a = nullptr);

// Derivative of the torus action at m along t: (-i t_k z_k, i t_k w_k).
Eigen::VectorXd killing_field(const AmbientPoint& m, const Eigen::VectorXd& t);

// Jacobians of the moment maps in the flat real coordinates.
Eigen::MatrixXd moment_jacobian(const AmbientPoint& m);             // 3d x 4d
Eigen::MatrixXd mu_N_jacobian(const AmbientPoint& m,
                              const SubtorusSpec& spec);            // 3r x 4d
Eigen::MatrixXd mu_sigma_jacobian(const AmbientPoint& m,
                                  const Eigen::VectorXd& a);        // 3 x 4d

// Newton projection onto the level set mu_N(m) + zeta = 0 by minimum-norm
// steps. Fixes on-level points; throws SingularJacobian when the moment
// Jacobian drops rank and NoConvergence when the budget runs out.
AmbientPoint level_project(const AmbientPoint& m0, const ProbeConfig& cfg);

// Ambient metric matrix used by the configuration: flat, plus the graph
// term of the flow moment map in deformed mode.
Eigen::MatrixXd ambient_metric_matrix(const AmbientPoint& m,
                                      const ProbeConfig& cfg);

// Quotient metric evaluated on the given ambient directions (columns of
// `directions`, each tangent to the level set): projects out the subtorus
// orbit, applies the configured ambient metric, and in deformed mode
// replaces the flow-fiber block.
Eigen::MatrixXd metric_in_directions(const AmbientPoint& m,
                                     const ProbeConfig& cfg,
                                     const Eigen::MatrixXd& directions);

// Quotient metric at a point in a canonical orthonormal slice basis.
struct MetricSample {
  AmbientPoint base;
  Eigen::MatrixXd slice;     // 4d x 4n, orthonormal, tangent to the level set
  Eigen::MatrixXd G;         // 4n x 4n quotient metric on the slice classes
  double xi_norm2 = 0;       // quotient norm^2 of the flow Killing class
  double V1 = 0;             // 1 / xi_norm2
  double tn_fiber_norm2 = 0; // xi_norm2 / (1 + xi_norm2) in deformed mode
};

MetricSample metric_at(const AmbientPoint& m, const ProbeConfig& cfg);

// Closed-form reference for the one-coordinate deformed quotient: the
// circle-potential form with V(r) = 1 + 1/(2r) at r = |m|^2 / 2.
MetricSample gh_oracle(const AmbientPoint& m);

// The same reference as a coordinate metric field on (X, Y, Z, theta):
// base block V delta_ij + A_i A_j / V, mixed block A_i / V, fiber 1 / V,
// with the standard monopole potential A (string on the negative Z axis).
Eigen::MatrixXd gh_chart_metric(const Eigen::VectorXd& x);

} // namespace hypertoric

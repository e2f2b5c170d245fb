#pragma once
#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "hypertoric/metric.hpp"

namespace hypertoric {

// A coordinate metric field: x in R^k -> symmetric positive matrix G(x).
using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct SectionalSample {
  long a = 0, b = 0; // 0-based orthonormal frame indices, a < b
  double value = 0;
};

// Curvature measured in an orthonormal frame at one point.
struct CurvatureReport {
  long dim = 0;
  std::vector<double> riemann; // dim^4 components, last index fastest
  std::vector<SectionalSample> sectional;
  double ricci_norm = 0;
  double bianchi_residual = 0;   // max first-Bianchi cyclic sum
  double symmetry_residual = 0;  // max pair-symmetry defect before cleanup
  double kretschmann = 0;        // frame-invariant squared norm

  double riem(long a, long b, long c, long d) const;
  double max_abs_sectional() const;
};

// Finite-difference curvature of a metric field at x0: Christoffel symbols
// and the curvature tensor by nested central differences with step-halving
// extrapolation over `richardson` levels. Throws StepTooLarge when the two
// finest raw levels disagree by more than step_check_factor relatively.
CurvatureReport fd_curvature(const MetricField& field,
                             const Eigen::VectorXd& x0, double h,
                             int richardson, double step_check_factor);

// Curvature of the quotient metric at an on-level point: builds a chart
// from slice displacements re-solved onto the level set (with the slice
// coordinates pinned, so the chart differential is available in closed
// form) and runs the finite-difference engine on it.
CurvatureReport curvature_probe(const AmbientPoint& m, const ProbeConfig& cfg);

enum class DecayQuantity { V1, MAX_SECTIONAL };

struct RaySpec {
  AmbientPoint base;
  Eigen::VectorXd direction; // ambient, unit length
};

// Least-squares power-law fit of a quantity against metric distance along
// a projected ray.
struct DecayFit {
  double exponent = 0;
  double r2 = 0;
  bool degenerate = false; // quantity below the noise floor everywhere
  std::vector<std::pair<double, double>> samples; // (distance, quantity)
};

// Evaluates the quantity at base + s * direction re-projected onto the
// level set for each s in `radii` (strictly increasing, at least 4), and
// fits log(quantity) against log(metric distance from the base).
DecayFit decay_fit(const ProbeConfig& cfg, const RaySpec& ray,
                   DecayQuantity quantity, const std::vector<double>& radii);

} // namespace hypertoric

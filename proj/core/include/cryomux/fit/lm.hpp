#pragma once

// Bounded Levenberg-Marquardt least squares with finite-difference Jacobians.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cryomux::fit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Maps a parameter vector to a residual vector. Must be pure.
using ResidualFn = std::function<Vector(const Vector&)>;

struct Bounds {
  Vector lower;
  Vector upper;

  static Bounds unbounded(std::size_t n);
  bool contains(const Vector& x) const;
  Vector clamp(const Vector& x) const;
};

struct Tolerances {
  double relative_step = 1e-10;
  double relative_cost = 1e-12;
  std::size_t max_iterations = 200;
  double fd_relative_step = 1e-7;
  double initial_damping = 1e-6;
  double max_damping = 1e12;
};

struct FitResult {
  std::vector<std::string> names;
  Vector params;
  // Scaled by the reduced chi-square at the optimum.
  Matrix covariance;
  double residual_norm = 0.0;
  double reduced_chi_square = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::string message;

  double value(const std::string& name) const;
  double stderr_of(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
};

/// Forward-difference Jacobian with per-parameter step rel_step * |x_j|
/// (rel_step when x_j == 0). Steps flip to backward differences at an upper
/// bound.
Matrix finite_difference_jacobian(const ResidualFn& fn, const Vector& x, const Vector& r0,
                                  double rel_step, const Bounds* bounds = nullptr);

FitResult lm_minimize(const ResidualFn& residuals, const Vector& init, const Bounds& bounds,
                      const Tolerances& tol = {});

/// (J^T J)^+ scaled by s^2; used for covariance estimates.
Matrix normal_covariance(const Matrix& jacobian, double scale);

}  // namespace cryomux::fit

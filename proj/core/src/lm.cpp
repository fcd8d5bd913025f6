#include "cryomux/fit/lm.hpp"

#include <algorithm>
#include <cmath>

#include "cryomux/error.hpp"

namespace cryomux::fit {

Bounds Bounds::unbounded(std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  return {Vector::Constant(static_cast<Eigen::Index>(n), -inf),
          Vector::Constant(static_cast<Eigen::Index>(n), inf)};
}

bool Bounds::contains(const Vector& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

Vector Bounds::clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

std::size_t FitResult::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorKind::invalid_input, "no fit parameter '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

double FitResult::value(const std::string& name) const {
  return params[static_cast<Eigen::Index>(index_of(name))];
}

double FitResult::stderr_of(const std::string& name) const {
  const auto i = static_cast<Eigen::Index>(index_of(name));
  return std::sqrt(std::max(0.0, covariance(i, i)));
}

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

double half_sq(const Vector& r) { return 0.5 * r.squaredNorm(); }

}  // namespace

Matrix finite_difference_jacobian(const ResidualFn& fn, const Vector& x, const Vector& r0,
                                  double rel_step, const Bounds* bounds) {
  Matrix jac(r0.size(), x.size());
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double h = x[j] != 0.0 ? rel_step * std::abs(x[j]) : rel_step;
    if (bounds && x[j] + h > bounds->upper[j]) h = -h;
    xp[j] = x[j] + h;
    // Use the step actually representable in floating point.
    const double dx = xp[j] - x[j];
    jac.col(j) = (fn(xp) - r0) / dx;
    xp[j] = x[j];
  }
  return jac;
}

Matrix normal_covariance(const Matrix& jacobian, double scale) {
  // Equilibrate columns first so that parameters of very different magnitude
  // do not fall below the rank threshold of the pseudo-inverse.
  Vector d = jacobian.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = d[j] > 0.0 ? 1.0 / d[j] : 0.0;
  const Matrix js = jacobian * d.asDiagonal();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(js.transpose() * js);
  return d.asDiagonal() * cod.pseudoInverse() * d.asDiagonal() * scale;
}

FitResult lm_minimize(const ResidualFn& residuals, const Vector& init, const Bounds& bounds,
                      const Tolerances& tol) {
  const Eigen::Index n = init.size();
  if (n == 0) throw Error(ErrorKind::invalid_input, "no parameters to fit");
  if (bounds.lower.size() != n || bounds.upper.size() != n) {
    throw Error(ErrorKind::invalid_input, "bounds dimension mismatch");
  }
  if (!bounds.contains(init)) throw Error(ErrorKind::invalid_input, "initial point outside bounds");

  Vector x = init;
  Vector r = residuals(x);
  if (!all_finite(r)) throw Error(ErrorKind::invalid_input, "residuals not finite at start");
  const Eigen::Index m = r.size();
  if (m < n) {
    throw Error(ErrorKind::underdetermined, "fewer residuals than parameters");
  }

  FitResult out;
  out.names.resize(static_cast<std::size_t>(n));
  double cost = half_sq(r);
  double lambda = tol.initial_damping;
  bool converged = false;
  bool diverged = false;
  std::size_t iter = 0;
  Matrix jac = finite_difference_jacobian(residuals, x, r, tol.fd_relative_step, &bounds);

  while (iter < tol.max_iterations && !converged && !diverged) {
    ++iter;
    if (cost == 0.0) {
      converged = true;
      break;
    }
    const Matrix jtj = jac.transpose() * jac;
    const Vector grad = jac.transpose() * r;
    Vector diag = jtj.diagonal();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(diag[i] > 0.0)) diag[i] = 1.0;
    }

    bool accepted = false;
    while (!accepted) {
      Matrix lhs = jtj;
      lhs.diagonal() += lambda * diag;
      Eigen::LDLT<Matrix> ldlt(lhs);
      Vector step;
      if (ldlt.info() == Eigen::Success) step = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        lambda *= 10.0;
        if (lambda > tol.max_damping) {
          diverged = true;
          out.message = "normal equations singular beyond maximum damping";
          break;
        }
        continue;
      }
      const Vector x_new = bounds.clamp(x + step);
      const Vector actual = x_new - x;
      const double step_norm = actual.norm();
      const double x_norm = x.norm();
      if (step_norm <= tol.relative_step * (x_norm + tol.relative_step)) {
        converged = true;
        out.message = "relative step below tolerance";
        break;
      }
      const Vector r_new = residuals(x_new);
      if (!all_finite(r_new)) {
        diverged = true;
        out.message = "non-finite residuals during search";
        break;
      }
      const double cost_new = half_sq(r_new);
      if (cost_new < cost) {
        const double drop = cost - cost_new;
        x = x_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (drop <= tol.relative_cost * cost ||
            step_norm <= tol.relative_step * (x.norm() + tol.relative_step)) {
          converged = true;
          out.message = "converged";
        } else {
          jac = finite_difference_jacobian(residuals, x, r, tol.fd_relative_step, &bounds);
        }
      } else {
        lambda *= 10.0;
        if (lambda > tol.max_damping) {
          // No descent left. Accept as a minimum only if the residual is
          // (nearly) orthogonal to every Jacobian column.
          double worst_cosine = 0.0;
          const double r_norm = r.norm();
          for (Eigen::Index i = 0; i < n; ++i) {
            const double col = std::sqrt(jtj(i, i));
            if (col > 0.0 && r_norm > 0.0) {
              worst_cosine = std::max(worst_cosine, std::abs(grad[i]) / (col * r_norm));
            }
          }
          if (worst_cosine < 1e-4) {
            converged = true;
            out.message = "no further decrease possible";
          } else if (all_finite(r_new)) {
            diverged = true;
            out.message = "stalled away from a stationary point";
          } else {
            diverged = true;
            out.message = "non-finite residuals during search";
          }
          break;
        }
      }
    }
  }
  if (!converged && !diverged) out.message = "iteration limit reached";

  out.params = x;
  out.iterations = iter;
  out.converged = converged;
  out.residual_norm = r.norm();
  const double dof = m > n ? static_cast<double>(m - n) : 1.0;
  out.reduced_chi_square = 2.0 * cost / dof;
  jac = finite_difference_jacobian(residuals, x, r, tol.fd_relative_step, &bounds);
  out.covariance = normal_covariance(jac, out.reduced_chi_square);
  return out;
}

}  // namespace cryomux::fit

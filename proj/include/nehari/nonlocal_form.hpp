#pragma once

#include "nehari/problem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace nehari {

/// Symmetric positive-definite quadratic form over interior nodal values
/// whose value u^T G u is the squared X0 norm
///   \int\int_Q |u(x) - u(y)|^2 / |x - y|^{1+2s} dx dy
/// of the piecewise-linear interpolant of u (extended by zero outside the
/// interval). Immutable once built; the Cholesky factor used for Riesz
/// representatives is computed at construction.
class GagliardoForm {
 public:
  GagliardoForm(GridSpec grid, double s, Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& quad_weights() const { return quad_weights_; }
  const GridSpec& grid() const { return grid_; }
  double s() const { return s_; }

  /// Solves G x = rhs on the interior nodes; boundary entries of the result
  /// are zero and those of `rhs` are ignored.
  GridFunction riesz(const GridFunction& rhs) const;

 private:
  GridSpec grid_;
  double s_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd quad_weights_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// kappa(x_i) = ((R - x_i)^{-2s} + (x_i - L)^{-2s}) / (2s) at the interior
/// nodes (N - 1 values): the exterior interaction \int_{CΩ} |x-y|^{-1-2s} dy.
Eigen::VectorXd exterior_kernel(const GridSpec& grid, double s);

/// OpenMP row-gather assembly. Each entry is produced by one thread in a
/// fixed order, so the result does not depend on the thread count.
GagliardoForm assemble_form(const GridSpec& grid, double s);

/// Serial reference assembly: classic scatter over unordered cell pairs.
/// Kept for testing the parallel kernel and for benchmarking.
GagliardoForm assemble_form_serial(const GridSpec& grid, double s);

double seminorm_sq(const GagliardoForm& form, const GridFunction& u);
double pair_norm_sq(const GagliardoForm& form, const GridPair& p);

/// G u on the interior nodes (zero at the boundary), the discrete pairing of
/// u against each hat test function.
GridFunction apply_form(const GagliardoForm& form, const GridFunction& u);

/// Throws GridMismatch unless `u` has one entry per grid node.
void check_compatible(const GagliardoForm& form, const GridFunction& u);

}  // namespace nehari

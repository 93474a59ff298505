#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace nehari {

/// Nodal values of a piecewise-linear function on the uniform grid,
/// indices 0..N. Elements of X0 keep both boundary entries at zero.
using GridFunction = Eigen::VectorXd;

/// Uniform partition of the interval (left, right) into `cells` cells.
struct GridSpec {
  double left = -1.0;
  double right = 1.0;
  int cells = 128;

  double h() const { return (right - left) / cells; }
  int nodes() const { return cells + 1; }
  int interior() const { return cells - 1; }
  double x(int i) const { return left + i * h(); }
  /// Coordinate mapped affinely onto [-1, 1].
  double unit_x(int i) const { return -1.0 + 2.0 * i / cells; }

  /// Throws InvalidGrid unless right > left and cells >= 4.
  void check() const;
  bool operator==(const GridSpec&) const = default;
};

/// Concrete instance of one of the weight functions f, g or b.
struct WeightSpec {
  enum class Kind { Constant, Gaussian, CosPiX, LinearX, Samples };

  Kind kind = Kind::Constant;
  double value = 1.0;      // Constant
  double center = 0.0;     // Gaussian
  double width = 1.0;      // Gaussian
  double amplitude = 1.0;  // Gaussian, CosPiX
  double slope = 0.0;      // LinearX
  double offset = 0.0;     // LinearX
  std::vector<double> samples;

  static WeightSpec constant(double v);
  static WeightSpec gaussian(double center, double width, double amplitude);
  static WeightSpec cos_pi_x(double amplitude);
  static WeightSpec linear_x(double slope, double offset);
  static WeightSpec from_samples(std::vector<double> values);
};

struct ProblemSpec {
  GridSpec grid;
  double s = 0.4;
  double q = 0.5;
  double alpha = 1.5;
  double beta = 1.5;
  double lambda = 0.01;
  double mu = 0.01;
  WeightSpec f = WeightSpec::constant(1.0);
  WeightSpec g = WeightSpec::constant(1.0);
  WeightSpec b = WeightSpec::cos_pi_x(1.0);
};

/// Problem data sampled onto the grid. Produced by `validate_params` for
/// production use; `sample_problem` skips the assumption checks so tests can
/// build degenerate instances.
struct Problem {
  ProblemSpec spec;
  GridFunction f;
  GridFunction g;
  GridFunction b;
  Eigen::VectorXd quad_weights;  // composite trapezoid weights, N+1 entries
  double critical_exponent = 0.0;

  const GridSpec& grid() const { return spec.grid; }
  double q() const { return spec.q; }
  double alpha() const { return spec.alpha; }
  double beta() const { return spec.beta; }
  /// Homogeneity degree of the coupling term, alpha + beta.
  double r() const { return spec.alpha + spec.beta; }
};

/// Pair (u, w) of grid functions on the same grid.
struct GridPair {
  GridFunction u;
  GridFunction w;

  GridPair scaled(double t) const { return {t * u, t * w}; }
};

GridPair zero_pair(const GridSpec& grid);

/// 2n / (n - 2s); throws InvalidOrder unless n > 2s.
double critical_exponent(int n, double s);

GridFunction sample_weight(const WeightSpec& w, const GridSpec& grid);
Eigen::VectorXd trapezoid_weights(const GridSpec& grid);

Problem sample_problem(const ProblemSpec& spec);

/// Checks every standing assumption and samples the weights. Throws
/// ValidationError listing all violations.
Problem validate_params(const ProblemSpec& spec);

}  // namespace nehari

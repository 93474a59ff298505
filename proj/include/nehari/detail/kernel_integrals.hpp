#pragma once

// Closed-form and quadrature building blocks for the 1-D Gagliardo kernel
// |x - y|^{-(1+2s)} acting on piecewise-linear functions. Shared by the
// parallel and serial assembly paths.

#include <array>
#include <vector>

namespace nehari::detail {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre_unit(int points);

/// \int\int_{[0,h]^2} |x - y|^{1-2s} dx dy, the same-cell energy per unit
/// squared slope.
double same_cell_coefficient(double h, double s);

/// Unit-square moments \int\int xi^a eta^b (xi + eta)^{-1-2s} for
/// (a, b) = (2, 0) and (1, 1). Scale by h^{1-2s} (after dividing the slopes
/// by h) to get the corner-touching cell-pair energy.
struct CornerMoments {
  double m20;
  double m11;
};
CornerMoments corner_moments(double s);

/// Local 2x2 stiffness of one cell acting on its two nodal values.
using Local2 = std::array<std::array<double, 2>, 2>;
/// Local 4x4 block of a cell pair (I, J): slots 0,1 are the nodes of I and
/// slots 2,3 the nodes of J, both left to right.
using Local4 = std::array<std::array<double, 4>, 4>;

Local2 same_cell_block(double h, double s);

/// Energy of two cells sharing one node (already includes both orderings
/// (I,J) and (J,I) of the double integral).
Local4 adjacent_cell_block(double h, double s);

/// Cells I and J = I + offset with |offset| >= 2 (at least one full cell
/// between them); tensor Gauss quadrature. Includes both orderings.
Local4 separated_cell_block(double h, double s, int offset);

/// \int_cell phi_a phi_b kappa(x) dx for the exterior kernel
/// kappa(x) = ((x-L)^{-2s} + (R-x)^{-2s}) / (2s) on cell `cell` of an N-cell
/// grid with spacing h. Exact near the endpoints, Gauss elsewhere.
Local2 exterior_cell_block(double h, double s, int cell, int cells);

}  // namespace nehari::detail

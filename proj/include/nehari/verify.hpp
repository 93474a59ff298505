#pragma once

#include "nehari/nonlocal_form.hpp"
#include "nehari/problem.hpp"

#include <string>
#include <vector>

namespace nehari {

/// Independent quadrature oracle for the squared X0 norm: punctured midpoint
/// double sum on a grid refined `refine` times, with the closed-form
/// same-cell term and a midpoint exterior term. Deliberately shares no code
/// with the assembled form.
double brute_force_norm(const GridSpec& grid, double s, const GridFunction& u, int refine);

struct ResidualReport {
  double res_u = 0.0;
  double res_w = 0.0;
  double masked_fraction = 0.0;
  double delta = 0.0;
};

/// Nodal residual of the weak formulation tested against each hat function,
/// restricted to interior nodes where u > delta and w > delta, each
/// component normalized by its largest term magnitude.
ResidualReport weak_residual(const Problem& problem, const GagliardoForm& form,
                             const GridPair& pair, double delta);

struct Check {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct CheckList {
  std::vector<Check> checks;

  bool all_passed() const;
  const Check* find(const std::string& name) const;
};

/// Runs the Hölder/Sobolev inequality chains on a concrete pair:
/// discrete Hölder for each component, the K bound, the coupling bound and,
/// when the pair lies on the Nehari set, the coercivity lower bound.
/// Throws CandidateNotIncluded if `S_est` exceeds the Sobolev quotient of a
/// nonzero component (the bounds are only valid for such an S).
CheckList inequality_suite(const Problem& problem, const GagliardoForm& form,
                           const GridPair& pair, double S_est, double manifold_tol = 1e-8);

}  // namespace nehari

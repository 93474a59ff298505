#pragma once

#include "nehari/nonlocal_form.hpp"
#include "nehari/problem.hpp"

namespace nehari {

/// The three scalars that determine the whole fiber of a pair:
/// norm2 = ||(u,w)||^2, K = λ∫f u+^{1-q} + μ∫g w+^{1-q}, B = ∫b u+^α w+^β.
struct PairStats {
  double norm2 = 0.0;
  double K = 0.0;
  double B = 0.0;

  double scale() const;
};

/// Exponents shared by every fiber computation.
struct Exponents {
  double q;
  double alpha;
  double beta;

  double r() const { return alpha + beta; }
  static Exponents of(const Problem& p) { return {p.q(), p.alpha(), p.beta()}; }
};

struct EnergyParts {
  double norm2 = 0.0;
  double K = 0.0;
  double B = 0.0;
  double J = 0.0;
};

double K_value(const Problem& problem, const GridPair& pair);
double B_value(const Problem& problem, const GridPair& pair);
PairStats pair_stats(const Problem& problem, const GagliardoForm& form, const GridPair& pair);

/// J = norm2/2 - K/(1-q) - B/(α+β).
double energy_from_stats(const PairStats& st, const Exponents& ex);
EnergyParts energy(const Problem& problem, const GagliardoForm& form, const GridPair& pair);

/// Energy with the singular term continued linearly below `eps`, so that it
/// is C^1 everywhere. Agrees with `energy` wherever u, w >= eps.
double smoothed_energy(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                       double eps);

/// Euclidean gradient of `smoothed_energy` with respect to the interior
/// nodal values (boundary entries zero).
GridPair energy_gradient(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                         double eps);

struct FiberValues {
  double phi;    // J(t u, t w)
  double dphi;   // d/dt
  double ddphi;  // d^2/dt^2
};

/// Fiber map t -> J(t u, t w) and its first two derivatives, in closed form
/// from the pair's stats.
FiberValues phi(const PairStats& st, const Exponents& ex, double t);
FiberValues phi(const Problem& problem, const GagliardoForm& form, const GridPair& pair, double t);

}  // namespace nehari

#pragma once

#include "nehari/nonlocal_form.hpp"
#include "nehari/problem.hpp"

#include <optional>
#include <span>
#include <vector>

namespace nehari {

/// (α+β)/(α+β-1+q), the Lebesgue exponent of the weights f and g.
double q_star(double alpha, double beta, double q);

/// (Σ_i w_i |f_i|^r)^{1/r}.
double weight_norm(double r, const GridFunction& f, const Eigen::VectorXd& weights);

/// Λ = (|λ| ||f||)^{2/(1+q)} + (|μ| ||g||)^{2/(1+q)}.
double lambda_aggregate(double lambda, double mu, double f_norm, double g_norm, double q);

/// Discrete Sobolev quotient u^T G u / (Σ w_i |u_i|^r)^{2/r}; +inf for u = 0.
double sobolev_quotient(const GagliardoForm& form, const GridFunction& u, double r);

/// Coupled quotient ||(u,w)||^2 / (Σ w_i |u_i|^α |w_i|^β)^{2/(α+β)}.
double coupled_quotient(const GagliardoForm& form, const GridPair& p, double alpha, double beta);

struct SobolevOptions {
  int refine_iters = 300;  // descent iterations per refined candidate
  int refine_count = 4;    // refine only this many best candidates
  double rel_tol = 1e-12;  // stop refining once the quotient stalls
};

/// Center hat and a smooth bump, the seeded part of every candidate set.
std::vector<GridFunction> default_candidates(const GridSpec& grid);

/// Minimum of the Sobolev quotient over the candidates, after refining the
/// best few by normalized Sobolev-gradient descent. Never exceeds the
/// quotient of any supplied candidate.
double estimate_S(const GagliardoForm& form, double r, std::span<const GridFunction> candidates,
                  const SobolevOptions& opts = {});

/// Same scheme for the coupled constant. Informational only.
double estimate_S_coupled(const GagliardoForm& form, double alpha, double beta,
                          std::span<const GridPair> candidates, const SobolevOptions& opts = {});

double threshold_C(double alpha, double beta, double q, double S, double b_sup);

struct GapRadii {
  double A0;
  double A_lm;
};
GapRadii gap_radii(double alpha, double beta, double q, double S, double b_sup, double Lambda);

double E_coefficient(double alpha, double beta, double q, double S, double b_sup, double Lambda);

/// Closed-form lower bound for J on the Nehari set, as displayed for the
/// coercivity estimate.
double energy_lower_bound(double alpha, double beta, double q, double S, double Lambda);

/// rho(t) = c t^2 - d t^{1-q}, the scalar comparison function for J on the
/// Nehari set.
struct Rho {
  double c;
  double d;
  double q;

  double operator()(double t) const;
  double t_min() const;
  double min_value() const;
};

/// c = 1/2 - 1/(α+β), d = (1/(1-q) - 1/(α+β)) Λ^{(1+q)/2} S^{-(1-q)/2}.
Rho coercivity_rho(double alpha, double beta, double q, double S, double Lambda);

struct ConstantsReport {
  double q_star = 0.0;
  double f_norm = 0.0;
  double g_norm = 0.0;
  double b_sup = 0.0;
  double Lambda = 0.0;
  double S = 0.0;
  std::optional<double> S_coupled;
  double C = 0.0;
  double E = 0.0;
  double A0 = 0.0;
  double A_lm = 0.0;
  double J_lower = 0.0;
  bool in_gamma = false;
};

/// max over nodes of b+.
double b_sup(const Problem& problem);

ConstantsReport compute_constants(const Problem& problem, double S,
                                  std::optional<double> S_coupled = std::nullopt);

}  // namespace nehari

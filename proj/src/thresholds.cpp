#include "nehari/thresholds.hpp"

#include "nehari/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace nehari {

double q_star(double alpha, double beta, double q) {
  const double r = alpha + beta;
  return r / (r - 1.0 + q);
}

double weight_norm(double r, const GridFunction& f, const Eigen::VectorXd& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) sum += weights[i] * std::pow(std::abs(f[i]), r);
  return std::pow(sum, 1.0 / r);
}

double lambda_aggregate(double lambda, double mu, double f_norm, double g_norm, double q) {
  const double e = 2.0 / (1.0 + q);
  return std::pow(std::abs(lambda) * f_norm, e) + std::pow(std::abs(mu) * g_norm, e);
}

namespace {

double lebesgue_sum(const GagliardoForm& form, const GridFunction& u, double r) {
  const auto& wq = form.quad_weights();
  double d = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) d += wq[i] * std::pow(std::abs(u[i]), r);
  return d;
}

double coupling_sum(const GagliardoForm& form, const GridPair& p, double alpha, double beta) {
  const auto& wq = form.quad_weights();
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.u.size(); ++i)
    d += wq[i] * std::pow(std::abs(p.u[i]), alpha) * std::pow(std::abs(p.w[i]), beta);
  return d;
}

double signed_pow(double v, double e) {
  return v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), e), v);
}

// Components share one quotient Q = ||z||^2 / D(z)^{2/r}; the descent
// direction is the Sobolev (G-metric) gradient z - A/(r D) G^{-1} grad D.
struct QuotientProblem {
  std::function<double(const std::vector<GridFunction>&)> D;
  std::function<std::vector<GridFunction>(const std::vector<GridFunction>&)> grad_D;
  double r;
};

double quotient_of(const GagliardoForm& form, const QuotientProblem& qp,
                   const std::vector<GridFunction>& z) {
  double a = 0.0;
  for (const auto& c : z) a += seminorm_sq(form, c);
  const double d = qp.D(z);
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return a / std::pow(d, 2.0 / qp.r);
}

double refine(const GagliardoForm& form, const QuotientProblem& qp, std::vector<GridFunction> z,
              const SobolevOptions& opts) {
  double Q = quotient_of(form, qp, z);
  if (!std::isfinite(Q)) return Q;
  for (int it = 0; it < opts.refine_iters; ++it) {
    double a = 0.0;
    for (const auto& c : z) a += seminorm_sq(form, c);
    const double d = qp.D(z);
    const auto gd = qp.grad_D(z);
    std::vector<GridFunction> dir(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) dir[k] = z[k] - (a / (qp.r * d)) * form.riesz(gd[k]);

    bool accepted = false;
    double step = 1.0;
    for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
      std::vector<GridFunction> trial(z.size());
      for (std::size_t k = 0; k < z.size(); ++k) trial[k] = z[k] - step * dir[k];
      const double Qt = quotient_of(form, qp, trial);
      if (Qt < Q) {
        // keep the iterate normalized, the quotient is scale invariant
        const double norm = std::pow(qp.D(trial), 1.0 / qp.r);
        for (auto& c : trial) c /= norm;
        const double rel = (Q - Qt) / Q;
        z = std::move(trial);
        Q = Qt;
        accepted = true;
        if (rel < opts.rel_tol) it = opts.refine_iters;
        break;
      }
    }
    if (!accepted) break;
  }
  return Q;
}

template <class Candidate, class ToComponents>
double estimate_generic(const GagliardoForm& form, const QuotientProblem& qp,
                        std::span<const Candidate> candidates, const SobolevOptions& opts,
                        ToComponents to_components) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidateSet, "no Sobolev candidates");
  std::vector<double> raw(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto z = to_components(candidates[i]);
    for (const auto& c : z) check_compatible(form, c);
    raw[i] = quotient_of(form, qp, z);
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });

  const int count = std::min<int>(opts.refine_count, static_cast<int>(order.size()));
  std::vector<double> refined(count, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < count; ++k) {
    if (std::isfinite(raw[order[k]]))
      refined[k] = refine(form, qp, to_components(candidates[order[k]]), opts);
  }
  double best = *std::min_element(raw.begin(), raw.end());
  for (double v : refined) best = std::min(best, v);
  if (!std::isfinite(best))
    throw Error(ErrorCode::EmptyCandidateSet, "every candidate is identically zero");
  return best;
}

}  // namespace

double sobolev_quotient(const GagliardoForm& form, const GridFunction& u, double r) {
  const double d = lebesgue_sum(form, u, r);
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return seminorm_sq(form, u) / std::pow(d, 2.0 / r);
}

double coupled_quotient(const GagliardoForm& form, const GridPair& p, double alpha, double beta) {
  const double d = coupling_sum(form, p, alpha, beta);
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return pair_norm_sq(form, p) / std::pow(d, 2.0 / (alpha + beta));
}

std::vector<GridFunction> default_candidates(const GridSpec& grid) {
  const int N = grid.cells;
  GridFunction hat = GridFunction::Zero(grid.nodes());
  hat[N / 2] = 1.0;
  GridFunction bump = GridFunction::Zero(grid.nodes());
  for (int i = 1; i < N; ++i) {
    const double x = grid.unit_x(i);
    bump[i] = std::pow(1.0 - x * x, 2);
  }
  return {hat, bump};
}

double estimate_S(const GagliardoForm& form, double r, std::span<const GridFunction> candidates,
                  const SobolevOptions& opts) {
  const double crit = 2.0 / (1.0 - 2.0 * form.s());
  if (!(r > 2.0 && r < crit))
    throw Error(ErrorCode::InvalidExponent, "Sobolev exponent must lie in (2, 2*_s)");
  QuotientProblem qp;
  qp.r = r;
  qp.D = [&form, r](const std::vector<GridFunction>& z) { return lebesgue_sum(form, z[0], r); };
  qp.grad_D = [&form, r](const std::vector<GridFunction>& z) {
    const auto& wq = form.quad_weights();
    GridFunction g(z[0].size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = r * wq[i] * signed_pow(z[0][i], r - 1.0);
    return std::vector<GridFunction>{g};
  };
  return estimate_generic(form, qp, candidates, opts,
                          [](const GridFunction& u) { return std::vector<GridFunction>{u}; });
}

double estimate_S_coupled(const GagliardoForm& form, double alpha, double beta,
                          std::span<const GridPair> candidates, const SobolevOptions& opts) {
  QuotientProblem qp;
  qp.r = alpha + beta;
  qp.D = [&form, alpha, beta](const std::vector<GridFunction>& z) {
    return coupling_sum(form, {z[0], z[1]}, alpha, beta);
  };
  qp.grad_D = [&form, alpha, beta](const std::vector<GridFunction>& z) {
    const auto& wq = form.quad_weights();
    GridFunction gu(z[0].size()), gw(z[0].size());
    for (Eigen::Index i = 0; i < gu.size(); ++i) {
      const double u = z[0][i], w = z[1][i];
      gu[i] = alpha * wq[i] * signed_pow(u, alpha - 1.0) * std::pow(std::abs(w), beta);
      gw[i] = beta * wq[i] * std::pow(std::abs(u), alpha) * signed_pow(w, beta - 1.0);
    }
    return std::vector<GridFunction>{gu, gw};
  };
  return estimate_generic(form, qp, candidates, opts, [](const GridPair& p) {
    return std::vector<GridFunction>{p.u, p.w};
  });
}

namespace {

void check_S_b(double S, double b_sup) {
  if (!(S > 0.0)) throw Error(ErrorCode::NonpositiveS, "S must be positive");
  if (!(b_sup > 0.0)) throw Error(ErrorCode::NonpositiveBSup, "sup b+ must be positive");
}

}  // namespace

double threshold_C(double alpha, double beta, double q, double S, double b_sup) {
  check_S_b(S, b_sup);
  const double r = alpha + beta;
  return std::pow((1.0 + q) / (r - 1.0 + q), 2.0 / (r - 2.0)) *
         std::pow((r - 2.0) / (r - 1.0 + q), 2.0 / (1.0 + q)) *
         std::pow(1.0 / b_sup, 2.0 / (r - 2.0)) *
         std::pow(S, 2.0 * (r - 1.0 + q) / ((1.0 + q) * (r - 2.0)));
}

GapRadii gap_radii(double alpha, double beta, double q, double S, double b_sup, double Lambda) {
  check_S_b(S, b_sup);
  const double r = alpha + beta;
  GapRadii g;
  g.A0 = std::pow((1.0 + q) / ((r - 1.0 + q) * b_sup) * std::pow(S, r / 2.0), 1.0 / (r - 2.0));
  g.A_lm = std::pow((r - 1.0 + q) / (r - 2.0) * std::pow(S, -(1.0 - q) / 2.0), 1.0 / (1.0 + q)) *
           std::sqrt(std::max(Lambda, 0.0));
  return g;
}

double E_coefficient(double alpha, double beta, double q, double S, double b_sup, double Lambda) {
  check_S_b(S, b_sup);
  if (!(Lambda > 0.0)) throw Error(ErrorCode::NonpositiveLambda, "Lambda must be positive");
  const double r = alpha + beta;
  const double e = (r - 2.0) / (1.0 + q);
  return (1.0 + q) / (r - 1.0 + q) * std::pow((r - 2.0) / (r - 1.0 + q), e) *
             std::pow(std::pow(S, (1.0 - q) / 2.0) / std::pow(Lambda, (1.0 + q) / 2.0), e) -
         b_sup * std::pow(S, -r / 2.0);
}

double energy_lower_bound(double alpha, double beta, double q, double S, double Lambda) {
  if (!(S > 0.0)) throw Error(ErrorCode::NonpositiveS, "S must be positive");
  const double r = alpha + beta;
  return -(1.0 + q) * (r - 2.0) / ((1.0 - q) * r) *
         std::pow((r - 1.0 + q) / (2.0 * (r - 2.0)), 2.0 / (1.0 + q)) * Lambda *
         std::pow(S, -(1.0 - q) / (1.0 + q));
}

double Rho::operator()(double t) const { return c * t * t - d * std::pow(t, 1.0 - q); }

double Rho::t_min() const { return std::pow(d * (1.0 - q) / (2.0 * c), 1.0 / (1.0 + q)); }

double Rho::min_value() const { return (*this)(t_min()); }

Rho coercivity_rho(double alpha, double beta, double q, double S, double Lambda) {
  if (!(S > 0.0)) throw Error(ErrorCode::NonpositiveS, "S must be positive");
  const double r = alpha + beta;
  return {0.5 - 1.0 / r,
          (1.0 / (1.0 - q) - 1.0 / r) * std::pow(Lambda, (1.0 + q) / 2.0) *
              std::pow(S, -(1.0 - q) / 2.0),
          q};
}

double b_sup(const Problem& problem) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < problem.b.size(); ++i) m = std::max(m, problem.b[i]);
  return m;
}

ConstantsReport compute_constants(const Problem& problem, double S,
                                  std::optional<double> S_coupled) {
  const double a = problem.alpha(), b = problem.beta(), q = problem.q();
  ConstantsReport rep;
  rep.q_star = q_star(a, b, q);
  rep.f_norm = weight_norm(rep.q_star, problem.f, problem.quad_weights);
  rep.g_norm = weight_norm(rep.q_star, problem.g, problem.quad_weights);
  rep.b_sup = nehari::b_sup(problem);
  rep.Lambda = lambda_aggregate(problem.spec.lambda, problem.spec.mu, rep.f_norm, rep.g_norm, q);
  rep.S = S;
  rep.S_coupled = S_coupled;
  rep.C = threshold_C(a, b, q, S, rep.b_sup);
  rep.E = rep.Lambda > 0.0 ? E_coefficient(a, b, q, S, rep.b_sup, rep.Lambda)
                           : std::numeric_limits<double>::infinity();
  const GapRadii g = gap_radii(a, b, q, S, rep.b_sup, rep.Lambda);
  rep.A0 = g.A0;
  rep.A_lm = g.A_lm;
  rep.J_lower = energy_lower_bound(a, b, q, S, rep.Lambda);
  rep.in_gamma = rep.Lambda > 0.0 && rep.Lambda < rep.C;
  return rep;
}

}  // namespace nehari

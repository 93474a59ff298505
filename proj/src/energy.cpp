#include "nehari/energy.hpp"

#include "nehari/error.hpp"

#include <algorithm>
#include <cmath>

namespace nehari {

namespace {

void check_pair(const Problem& problem, const GridPair& pair) {
  const auto n = problem.grid().nodes();
  if (pair.u.size() != n || pair.w.size() != n)
    throw Error(ErrorCode::GridMismatch, "pair does not match the problem grid");
}

double pos(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

double PairStats::scale() const { return std::abs(norm2) + std::abs(K) + std::abs(B); }

double K_value(const Problem& problem, const GridPair& pair) {
  check_pair(problem, pair);
  const double e = 1.0 - problem.q();
  const auto& wq = problem.quad_weights;
  double su = 0.0, sw = 0.0;
  for (Eigen::Index i = 0; i < wq.size(); ++i) {
    su += wq[i] * problem.f[i] * std::pow(pos(pair.u[i]), e);
    sw += wq[i] * problem.g[i] * std::pow(pos(pair.w[i]), e);
  }
  return problem.spec.lambda * su + problem.spec.mu * sw;
}

double B_value(const Problem& problem, const GridPair& pair) {
  check_pair(problem, pair);
  const auto& wq = problem.quad_weights;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < wq.size(); ++i) {
    const double up = pos(pair.u[i]), wp = pos(pair.w[i]);
    if (up == 0.0 || wp == 0.0) continue;
    sum += wq[i] * problem.b[i] * std::pow(up, problem.alpha()) * std::pow(wp, problem.beta());
  }
  return sum;
}

PairStats pair_stats(const Problem& problem, const GagliardoForm& form, const GridPair& pair) {
  return {pair_norm_sq(form, pair), K_value(problem, pair), B_value(problem, pair)};
}

double energy_from_stats(const PairStats& st, const Exponents& ex) {
  return 0.5 * st.norm2 - st.K / (1.0 - ex.q) - st.B / ex.r();
}

EnergyParts energy(const Problem& problem, const GagliardoForm& form, const GridPair& pair) {
  const PairStats st = pair_stats(problem, form, pair);
  return {st.norm2, st.K, st.B, energy_from_stats(st, Exponents::of(problem))};
}

double smoothed_energy(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                       double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::NonpositiveEpsilon, "eps must be positive");
  check_pair(problem, pair);
  const double q = problem.q();
  const double e = 1.0 - q;
  // primitive of max(v, eps)^{-q}, continued linearly below eps
  auto prim = [&](double v) {
    if (v >= eps) return std::pow(v, e) / e;
    return std::pow(eps, e) / e + (v - eps) * std::pow(eps, -q);
  };
  const auto& wq = problem.quad_weights;
  double sing = 0.0;
  for (Eigen::Index i = 1; i + 1 < wq.size(); ++i) {
    sing += wq[i] * (problem.spec.lambda * problem.f[i] * prim(pair.u[i]) +
                     problem.spec.mu * problem.g[i] * prim(pair.w[i]));
  }
  return 0.5 * pair_norm_sq(form, pair) - sing - B_value(problem, pair) / problem.r();
}

GridPair energy_gradient(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                         double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::NonpositiveEpsilon, "eps must be positive");
  check_pair(problem, pair);
  GridPair grad{apply_form(form, pair.u), apply_form(form, pair.w)};
  const double q = problem.q(), a = problem.alpha(), b = problem.beta(), r = problem.r();
  const double lam = problem.spec.lambda, mu = problem.spec.mu;
  const auto& wq = problem.quad_weights;
  const Eigen::Index last = wq.size() - 1;
  for (Eigen::Index i = 1; i < last; ++i) {
    const double u = pair.u[i], w = pair.w[i];
    const double up = pos(u), wp = pos(w);
    double cu = 0.0, cw = 0.0;
    if (up > 0.0 && wp > 0.0) {
      // u+^{α-1} w+^β and u+^α w+^{β-1}, written so that swapping (u, α) with
      // (w, β) produces bit-identical results.
      const double ua1 = std::pow(up, a - 1.0), wb1 = std::pow(wp, b - 1.0);
      cu = (a / r) * problem.b[i] * (ua1 * (wb1 * wp));
      cw = (b / r) * problem.b[i] * (wb1 * (ua1 * up));
    }
    grad.u[i] -= wq[i] * (lam * problem.f[i] * std::pow(std::max(u, eps), -q) + cu);
    grad.w[i] -= wq[i] * (mu * problem.g[i] * std::pow(std::max(w, eps), -q) + cw);
  }
  return grad;
}

FiberValues phi(const PairStats& st, const Exponents& ex, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveT, "fiber parameter t must be positive");
  const double q = ex.q, r = ex.r();
  const double tq = std::pow(t, -q);       // t^{-q}
  const double tr = std::pow(t, r - 2.0);  // t^{r-2}
  FiberValues v;
  v.phi = 0.5 * t * t * st.norm2 - t * tq * st.K / (1.0 - q) - t * t * tr * st.B / r;
  v.dphi = t * st.norm2 - tq * st.K - t * tr * st.B;
  v.ddphi = st.norm2 + q * tq / t * st.K - (r - 1.0) * tr * st.B;
  return v;
}

FiberValues phi(const Problem& problem, const GagliardoForm& form, const GridPair& pair, double t) {
  return phi(pair_stats(problem, form, pair), Exponents::of(problem), t);
}

}  // namespace nehari

#include "nehari/solver.hpp"

#include "nehari/error.hpp"
#include "nehari/fiber.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

namespace nehari {

std::string_view to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

Branch branch_from_string(std::string_view s) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  throw Error(ErrorCode::ConfigParseError, "branch must be plus or minus, got " + std::string(s));
}

void SolverOptions::check() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (max_iters < 1 || restarts < 1 || !positive(step) || !positive(tol_energy) ||
      !positive(tol_manifold) || !positive(eps_singular))
    throw Error(ErrorCode::InvalidOptions, "solver options must be positive, restarts >= 1");
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 restart_rng(std::uint64_t seed, int k) {
  // splitmix64 finalizer decorrelates neighbouring seeds and restart indices
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return std::mt19937_64(z ^ (z >> 31));
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

GridFunction bump(const GridSpec& grid, double center, double width, double power,
                  double amplitude) {
  GridFunction v = GridFunction::Zero(grid.nodes());
  for (int i = 1; i < grid.cells; ++i) {
    const double y = (grid.unit_x(i) - center) / width;
    if (std::abs(y) < 1.0) v[i] = amplitude * std::pow(1.0 - y * y, power);
  }
  return v;
}

}  // namespace

GridPair initial_direction(const Problem& problem, Branch branch, std::mt19937_64& rng,
                           bool tie_components) {
  const GridSpec& grid = problem.grid();
  if (branch == Branch::Plus) {
    auto draw = [&] {
      const double c = uniform(rng, -0.3, 0.3);
      const double width = uniform(rng, 1.0, 1.6);
      const double power = uniform(rng, 0.75, 2.0);
      const double amp = uniform(rng, 0.5, 1.5);
      return bump(grid, c, width, power, amp);
    };
    GridPair p;
    p.u = draw();
    p.w = tie_components ? p.u : draw();
    return p;
  }

  const int N = grid.cells;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int node = 1 + static_cast<int>(unit_uniform(rng) * (N - 1));
    const double c = grid.unit_x(node);
    const double wu = uniform(rng, 0.2, 0.8);
    const double wv = uniform(rng, 0.2, 0.8);
    const double amp_u = uniform(rng, 0.5, 1.5);
    const double amp_w = uniform(rng, 0.5, 1.5);
    if (!(problem.b[node] > 0.0)) continue;
    GridPair p;
    p.u = bump(grid, c, wu, 2.0, amp_u);
    p.w = tie_components ? p.u : bump(grid, c, wv, 2.0, amp_w);
    if (B_value(problem, p) > 0.0 && K_value(problem, p) > 0.0) return p;
  }
  throw Error(ErrorCode::DirectionSearchFailed, "no direction with B > 0 in 1000 samples");
}

namespace {

constexpr double kProjectTol = 1e-13;
constexpr int kMaxHalvings = 60;

struct Trajectory {
  bool admissible = false;
  SolutionReport report;
  double residual = 0.0;  // |phi'(1)| / scale
};

// Projects a nonnegative direction onto the branch; empty if the fiber has no
// root of the required kind.
std::optional<double> branch_scaling(const PairStats& st, const Exponents& ex, Branch branch) {
  if (!(st.norm2 > 0.0) || !(st.K > 0.0)) return std::nullopt;
  const FiberRoots roots = project(st, ex, kProjectTol);
  if (roots.kind == RootCase::NoAdmissibleRoot) return std::nullopt;
  if (branch == Branch::Plus) return roots.t1;
  if (roots.kind != RootCase::TwoRoots) return std::nullopt;
  return roots.t2;
}

Trajectory run_restart(const Problem& problem, const GagliardoForm& form, Branch branch,
                       const SolverOptions& opts, int k, const IterateObserver& observer) {
  Trajectory out;
  const Exponents ex = Exponents::of(problem);
  std::mt19937_64 rng = restart_rng(opts.seed, k);
  const GridPair dir = initial_direction(problem, branch, rng, opts.tie_components);

  const PairStats st0 = pair_stats(problem, form, dir);
  const auto t0 = branch_scaling(st0, ex, branch);
  if (!t0) return out;

  GridPair z = dir.scaled(*t0);
  PairStats st = pair_stats(problem, form, z);
  double J = energy_from_stats(st, ex);
  double t_used = *t0;
  if (observer) observer({k, 0, &z, st, J});

  int iter = 0;
  bool stalled = false;
  while (iter < opts.max_iters) {
    const GridPair g = energy_gradient(problem, form, z, opts.eps_singular);
    const GridFunction du = form.riesz(g.u);
    const GridFunction dw = form.riesz(g.w);

    double step = opts.step;
    bool accepted = false;
    GridPair next;
    PairStats next_st;
    double next_J = 0.0, next_t = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      GridPair cand{(z.u - step * du).cwiseMax(0.0), (z.w - step * dw).cwiseMax(0.0)};
      const PairStats cst = pair_stats(problem, form, cand);
      const auto t = branch_scaling(cst, ex, branch);
      if (!t) continue;
      GridPair proj = cand.scaled(*t);
      const PairStats pst = pair_stats(problem, form, proj);
      const double pJ = energy_from_stats(pst, ex);
      if (pJ < J) {
        next = std::move(proj);
        next_st = pst;
        next_J = pJ;
        next_t = *t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    ++iter;
    const double decrease = (J - next_J) / std::max(std::abs(J), 1e-300);
    z = std::move(next);
    st = next_st;
    J = next_J;
    t_used = next_t;
    if (observer) observer({k, iter, &z, st, J});
    if (decrease < opts.tol_energy) {
      stalled = true;
      break;
    }
  }

  const Membership m = classify(st, ex, opts.tol_manifold);
  const MembershipLabel want =
      branch == Branch::Plus ? MembershipLabel::NPlus : MembershipLabel::NMinus;

  out.admissible = true;
  SolutionReport& r = out.report;
  r.branch = branch;
  r.J = J;
  r.norm = std::sqrt(st.norm2);
  r.phi1 = m.phi1;
  r.phi2 = m.phi2;
  r.t_used = t_used;
  r.iters = iter;
  r.converged = stalled && m.label == want;
  r.pair = std::move(z);
  out.residual = std::abs(m.phi1) / st.scale();
  return out;
}

// Best J wins; near-ties go to the lower manifold residual, then fewer
// iterations, then the lower restart index.
bool better(const Trajectory& a, const Trajectory& b) {
  const double tie = 1e-12 * std::max(std::abs(a.report.J), std::abs(b.report.J));
  if (std::abs(a.report.J - b.report.J) > tie) return a.report.J < b.report.J;
  if (a.residual != b.residual) return a.residual < b.residual;
  return a.report.iters < b.report.iters;
}

}  // namespace

SolutionReport solve_branch(const Problem& problem, const GagliardoForm& form, Branch branch,
                            const SolverOptions& opts, const IterateObserver& observer) {
  opts.check();
  check_compatible(form, problem.f);
  std::vector<Trajectory> runs(opts.restarts);
  std::vector<std::exception_ptr> errors(opts.restarts);

  if (observer) {
    for (int k = 0; k < opts.restarts; ++k)
      runs[k] = run_restart(problem, form, branch, opts, k, observer);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < opts.restarts; ++k) {
      try {
        runs[k] = run_restart(problem, form, branch, opts, k, observer);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const Trajectory* best = nullptr;
  int used = 0;
  for (const auto& t : runs) {
    if (!t.admissible) continue;
    ++used;
    if (!best || better(t, *best)) best = &t;
  }
  if (!best)
    throw Error(ErrorCode::NoAdmissibleDirection,
                "every restart hit a fiber without an admissible root");
  SolutionReport out = best->report;
  out.restarts_used = used;
  return out;
}

GapReport gap_check(const SolutionReport& plus, const SolutionReport& minus,
                    const ConstantsReport& constants) {
  if (!plus.converged || !minus.converged)
    throw Error(ErrorCode::NotConvergedInput, "gap check needs two converged reports");
  GapReport g;
  g.norm_plus = plus.norm;
  g.norm_minus = minus.norm;
  g.A0 = constants.A0;
  g.A_lm = constants.A_lm;
  g.ordering_ok = g.norm_minus > g.A0 && g.A0 > g.A_lm && g.A_lm > g.norm_plus;
  return g;
}

RunArtifacts run_problem(const Problem& problem, const GagliardoForm& form,
                         const RunOptions& opts) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  RunArtifacts art;
  std::vector<GridFunction> candidates = default_candidates(problem.grid());

  auto solve = [&](Branch b, const char* phase) {
    const auto t0 = clock::now();
    SolutionReport rep = solve_branch(problem, form, b, opts.solver);
    art.timings[phase] = ms(t0, clock::now());
    candidates.push_back(rep.pair.u);
    candidates.push_back(rep.pair.w);
    art.solutions.push_back(std::move(rep));
  };
  if (opts.plus) solve(Branch::Plus, "solve_plus");
  if (opts.minus) solve(Branch::Minus, "solve_minus");

  const auto t0 = clock::now();
  const double S = estimate_S(form, problem.r(), candidates, opts.sobolev);
  art.constants = compute_constants(problem, S);
  art.timings["constants"] = ms(t0, clock::now());

  if (opts.plus && opts.minus && art.solutions[0].converged && art.solutions[1].converged)
    art.gap = gap_check(art.solutions[0], art.solutions[1], art.constants);
  return art;
}

}  // namespace nehari

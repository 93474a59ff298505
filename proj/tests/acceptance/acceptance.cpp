// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are the pinned acceptance values.

#include "nehari/cli.hpp"
#include "nehari/fiber.hpp"
#include "nehari/io.hpp"
#include "nehari/solver.hpp"
#include "nehari/thresholds.hpp"
#include "nehari/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nehari;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

ProblemSpec fixture_spec() {
  ProblemSpec s;
  s.grid.cells = 128;
  return s;
}

const char* kFixtureConfig = R"({
  "grid": {"left": -1.0, "right": 1.0, "cells": 128},
  "s": 0.4, "q": 0.5, "alpha": 1.5, "beta": 1.5,
  "lambda": 0.01, "mu": 0.01,
  "f": {"kind": "constant", "value": 1.0},
  "g": {"kind": "constant", "value": 1.0},
  "b": {"kind": "cos_pi_x", "amplitude": 1.0}
})";

Outcome criterion_constants() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int bad = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = 1.0 + 1e-3 + 1.5 * U(rng), b = 1.0 + 1e-3 + 1.5 * U(rng);
    const double q = 0.01 + 0.98 * U(rng);
    const double S = 0.1 + 20.0 * U(rng), bs = 0.05 + 5.0 * U(rng);
    const double C = threshold_C(a, b, q, S, bs);
    const GapRadii g = gap_radii(a, b, q, S, bs, C);
    // E is a difference of two terms of size b_sup S^{-r/2}
    const double e_rel = std::abs(E_coefficient(a, b, q, S, bs, C)) / (bs * std::pow(S, -(a + b) / 2));
    const double a_rel = std::abs(g.A_lm - g.A0) / g.A0;
    worst = std::max({worst, e_rel, a_rel});
    if (e_rel > 1e-9 || a_rel > 1e-9) ++bad;
    const double Lam = C * std::exp(4.0 * (U(rng) - 0.5));
    const double E = E_coefficient(a, b, q, S, bs, Lam);
    if ((E > 0) != (C - Lam > 0)) ++bad;
  }
  const double C = threshold_C(1.5, 1.5, 0.5, 1.0, 1.0);
  const GapRadii g = gap_radii(1.5, 1.5, 0.5, 1.0, 1.0, C);
  const bool fixture = std::abs(C - 0.106100) < 5e-7 && std::abs(g.A0 - 0.6) < 1e-12 &&
                       std::abs(g.A_lm - 0.600000) < 5e-7;
  return {bad == 0 && fixture,
          fmt("100 draws, %.0f violations, worst rel %.1e; fixture C=%.6f", bad, worst, C) +
              fmt(" A0=%.6f A_lm=%.6f", g.A0, g.A_lm)};
}

double golden_section(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  while (b - a > 1e-12) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

Outcome criterion_rho() {
  const Rho rho{1.0, 1.0, 0.5};
  const double t_gs = golden_section([&](double t) { return rho(t); }, 1e-6, 5.0);
  const double t_cf = rho.t_min();
  const bool ok = std::abs(t_cf - t_gs) <= 1e-8 && std::abs(rho(t_cf) - rho(t_gs)) <= 1e-8 &&
                  std::abs(t_cf - std::pow(0.25, 2.0 / 3.0)) <= 1e-15 &&
                  std::abs(t_cf - 0.396850) < 5e-7 && std::abs(rho(t_cf) + 0.472470) < 5e-7;
  return {ok, fmt("t_min=%.9f (golden %.9f), rho(t_min)=%.9f", t_cf, t_gs, rho(t_cf))};
}

Outcome criterion_fiber() {
  const Problem p = validate_params(fixture_spec());
  const GagliardoForm form = assemble_form(p.grid(), p.spec.s);
  const Exponents ex = Exponents::of(p);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const GridSpec& g = p.grid();

  auto rescaled_label = [&](const GridPair& d, double t) {
    return classify(pair_stats(p, form, d.scaled(t)), ex).label;
  };
  int two = 0, one = 0, bad = 0, draws = 0;
  while ((two < 50 || one < 50) && draws < 100000) {
    ++draws;
    // random nonnegative bumps; centered where b > 0 or where b < 0
    const bool want_positive = two < 50;
    const double c = want_positive ? -0.4 + 0.8 * U(rng) : (U(rng) < 0.5 ? -1.0 : 1.0) * (0.7 + 0.25 * U(rng));
    const double width = want_positive ? 0.1 + 0.6 * U(rng) : 0.05 + 0.15 * U(rng);
    const double scale = std::exp(6.0 * (U(rng) - 0.5));
    GridPair d = zero_pair(g);
    for (int i = 1; i < g.cells; ++i) {
      const double y = (g.unit_x(i) - c) / width;
      if (std::abs(y) < 1.0) {
        d.u[i] = scale * (1.0 - y * y) * (0.5 + U(rng));
        d.w[i] = scale * (1.0 - y * y) * (0.5 + U(rng));
      }
    }
    const PairStats st = pair_stats(p, form, d);
    if (!(st.K > 0.0)) continue;
    const FiberRoots r = project(st, ex, 1e-13);
    if (st.B > 0.0) {
      if (two >= 50 || !(r.psi_at_tmax > 0.0)) continue;
      ++two;
      const bool ok = r.kind == RootCase::TwoRoots && r.t1 < r.t_max && r.t_max < r.t2 &&
                      psi_derivative(st, ex, r.t1) > 0.0 && psi_derivative(st, ex, r.t2) < 0.0 &&
                      rescaled_label(d, r.t1) == MembershipLabel::NPlus &&
                      rescaled_label(d, r.t2) == MembershipLabel::NMinus;
      if (!ok) ++bad;
    } else {
      if (one >= 50) continue;
      ++one;
      const bool ok = r.kind == RootCase::SingleRoot && std::isnan(r.t2) &&
                      rescaled_label(d, r.t1) == MembershipLabel::NPlus;
      if (!ok) ++bad;
    }
  }
  const FiberRoots fx = project({1.0, 0.1, 0.1}, {0.5, 1.5, 1.5}, 1e-10);
  const bool fixture = fx.kind == RootCase::TwoRoots && std::abs(fx.t1 - 0.2186) <= 1e-3 &&
                       std::abs(fx.t2 - 9.968) <= 1e-2;
  return {bad == 0 && two == 50 && one == 50 && fixture,
          fmt("%.0f two-root and %.0f one-root directions, %.0f violations", two, one, bad) +
              fmt("; fixture t1=%.6f t2=%.5f", fx.t1, fx.t2)};
}

Outcome criterion_form_oracle() {
  const GridSpec g{-1.0, 1.0, 16};
  const GagliardoForm form = assemble_form(g, 0.4);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0, worst_scale = 0.0;
  for (int k = 0; k < 10; ++k) {
    GridFunction u = GridFunction::Zero(g.nodes());
    for (int i = 1; i < g.cells; ++i) u[i] = U(rng);
    const double a = seminorm_sq(form, u);
    worst = std::max(worst, std::abs(brute_force_norm(g, 0.4, u, 8) - a) / a);
    worst_scale = std::max(worst_scale, std::abs(seminorm_sq(form, 2.0 * u) - 4.0 * a) / (4.0 * a));
  }
  return {worst <= 0.02 && worst_scale <= 1e-14,
          fmt("max rel gap %.2e (tol 2e-2), scaling error %.1e (tol 1e-14)", worst, worst_scale)};
}

struct FixtureRun {
  Problem problem = validate_params(fixture_spec());
  GagliardoForm form = assemble_form(problem.grid(), problem.spec.s);
  SolutionReport plus, minus;
  std::vector<GridPair> iterates;
};

FixtureRun& fixture_run() {
  static FixtureRun run = [] {
    FixtureRun r;
    const SolverOptions o;
    auto keep = [&r](const IterateInfo& it) { r.iterates.push_back(*it.pair); };
    r.plus = solve_branch(r.problem, r.form, Branch::Plus, o, keep);
    r.minus = solve_branch(r.problem, r.form, Branch::Minus, o, keep);
    return r;
  }();
  return run;
}

Outcome criterion_branches() {
  FixtureRun& r = fixture_run();
  const int N = r.problem.grid().cells;
  const double min_plus = std::min(r.plus.pair.u.segment(1, N - 1).minCoeff(),
                                   r.plus.pair.w.segment(1, N - 1).minCoeff());
  const bool nonneg = r.plus.pair.u.minCoeff() >= 0 && r.plus.pair.w.minCoeff() >= 0 &&
                      r.minus.pair.u.minCoeff() >= 0 && r.minus.pair.w.minCoeff() >= 0;
  const bool ok = r.plus.converged && r.plus.J < 0 && r.plus.phi2 > 0 && r.minus.converged &&
                  r.minus.phi2 < 0 && nonneg && min_plus > 0;
  return {ok, fmt("plus J=%.6e phi2=%.3e", r.plus.J, r.plus.phi2) +
                  fmt(", minus phi2=%.3e, plus interior min=%.3e", r.minus.phi2, min_plus)};
}

Outcome criterion_gap() {
  const io::Config cfg = io::parse_config_text(kFixtureConfig);
  const std::vector<double> ls{0.005, 0.01, 0.02}, ms{0.005, 0.01, 0.02};
  const auto rows = cli::run_sweep(cfg.problem, cfg.solver, ls, ms);
  int eligible = 0, ok = 0;
  for (const auto& row : rows) {
    if (!(row.in_gamma && row.plus_converged && row.minus_converged)) continue;
    ++eligible;
    if (row.gap_ok && row.norm_minus > row.A0 && row.A0 > row.A_lm && row.A_lm > row.norm_plus) ++ok;
  }
  return {eligible > 0 && ok == eligible,
          fmt("%.0f of %.0f eligible sweep points ordered (%.0f points)", ok, eligible, rows.size())};
}

Outcome criterion_residual() {
  FixtureRun& r = fixture_run();
  double worst = 0.0, masked = 0.0;
  for (const SolutionReport* s : {&r.plus, &r.minus}) {
    const ResidualReport rr = weak_residual(r.problem, r.form, s->pair, 1e-4 * s->pair.u.maxCoeff());
    worst = std::max({worst, rr.res_u, rr.res_w});
    masked = std::max(masked, rr.masked_fraction);
  }
  return {r.plus.converged && r.minus.converged && worst <= 1e-3 && masked < 0.2,
          fmt("max residual %.2e (tol 1e-3), max masked fraction %.3f (tol 0.2)", worst, masked)};
}

Outcome criterion_inequalities() {
  FixtureRun& r = fixture_run();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const GridSpec& g = r.problem.grid();
  std::vector<GridPair> randoms;
  for (int k = 0; k < 50; ++k) {
    GridPair p = zero_pair(g);
    const double scale = std::exp(8.0 * (U(rng) - 0.5));
    for (int i = 1; i < g.cells; ++i) {
      p.u[i] = scale * U(rng);
      p.w[i] = scale * U(rng);
    }
    randoms.push_back(std::move(p));
  }
  std::vector<GridFunction> cands = default_candidates(g);
  for (const auto* set : {&r.iterates, &randoms})
    for (const auto& p : *set) {
      cands.push_back(p.u);
      cands.push_back(p.w);
    }
  SobolevOptions so;
  so.refine_count = 2;
  const double S = estimate_S(r.form, r.problem.r(), cands, so);

  int checks = 0, violations = 0, s1 = 0;
  for (const auto* set : {&r.iterates, &randoms})
    for (const auto& p : *set) {
      const CheckList c = inequality_suite(r.problem, r.form, p, S);
      for (const auto& ch : c.checks) {
        if (!ch.applicable) continue;
        ++checks;
        if (ch.name == "s1") ++s1;
        if (!ch.passed) ++violations;
      }
    }
  return {violations == 0 && s1 == static_cast<int>(r.iterates.size()),
          fmt("%.0f iterates + 50 random pairs, %.0f checks (%.0f coercivity), ", r.iterates.size(),
              checks, s1) +
              fmt("%.0f violations, S=%.4f", violations, S)};
}

Outcome criterion_symmetry() {
  ProblemSpec s = fixture_spec();
  s.f = s.g = WeightSpec::constant(1.0);
  s.lambda = s.mu = 0.01;
  s.alpha = s.beta = 1.5;
  const Problem p = validate_params(s);
  const GagliardoForm form = assemble_form(s.grid, s.s);
  SolverOptions o;
  o.tie_components = true;
  double worst = 0.0;
  bool converged = true;
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const SolutionReport r = solve_branch(p, form, b, o);
    converged = converged && r.converged;
    worst = std::max(worst, (r.pair.u - r.pair.w).cwiseAbs().maxCoeff());
  }
  return {converged && worst <= 1e-12, fmt("sup|u-w| = %.1e over both branches (tol 1e-12)", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "nehari_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg = (dir / "fixture.json").string();
  std::ofstream(cfg) << kFixtureConfig;
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "nehari_frac");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink);
  };
  int rc = 0;
  for (const char* d : {"a", "b"})
    rc |= run({"solve", "--config", cfg, "--seed", "7", "--out-dir", (dir / d).string()});
  rc |= run({"sweep", "--config", cfg, "--lambda", "0.005,0.01", "--mu", "0.01,0.02", "--out",
             (dir / "s1.csv").string()});
  rc |= run({"sweep", "--config", cfg, "--lambda", "0.005,0.01", "--mu", "0.01,0.02", "--out",
             (dir / "s2.csv").string(), "--jobs", "2"});
  int identical = 0, compared = 0;
  for (const char* f : {"solution_plus.json", "solution_minus.json", "gap.json"}) {
    ++compared;
    const std::string a = slurp(dir / "a" / f);
    if (!a.empty() && a == slurp(dir / "b" / f)) ++identical;
  }
  ++compared;
  const std::string s1 = slurp(dir / "s1.csv");
  if (!s1.empty() && s1 == slurp(dir / "s2.csv")) ++identical;
  fs::remove_all(dir);
  return {rc == 0 && identical == compared,
          fmt("%.0f of %.0f artifacts byte-identical, exit codes ", identical, compared) +
              (rc == 0 ? "ok" : "nonzero")};
}

}  // namespace

int main() {
  report(1, "constants identity suite", criterion_constants);
  report(2, "rho minimizer", criterion_rho);
  report(3, "fiber root structure", criterion_fiber);
  report(4, "form-oracle equivalence", criterion_form_oracle);
  report(5, "solver branch properties", criterion_branches);
  report(6, "gap ordering over sweep", criterion_gap);
  report(7, "weak residual", criterion_residual);
  report(8, "inequality chains", criterion_inequalities);
  report(9, "symmetry reduction", criterion_symmetry);
  report(10, "determinism", criterion_determinism);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

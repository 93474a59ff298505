#include "nehari/cli.hpp"

#include "nehari/energy.hpp"
#include "nehari/fiber.hpp"
#include "nehari/io.hpp"
#include "nehari/nonlocal_form.hpp"
#include "nehari/thresholds.hpp"
#include "nehari/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace nehari::cli {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigParseError: return kParse;
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidExponent:
    case ErrorCode::InvalidOrder:
    case ErrorCode::WeightSignViolation:
    case ErrorCode::ZeroParameters:
    case ErrorCode::SampleLengthMismatch:
    case ErrorCode::InvalidOptions: return kValidation;
    case ErrorCode::NoAdmissibleDirection:
    case ErrorCode::DirectionSearchFailed: return kNoDirection;
    case ErrorCode::NotConverged: return kNotConverged;
    default: return kCheckFailed;
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<SweepRow> run_sweep(const ProblemSpec& base, const SolverOptions& opts,
                                std::span<const double> lambdas, std::span<const double> mus,
                                int jobs) {
  std::vector<SweepRow> rows;
  for (double l : lambdas)
    for (double m : mus) {
      SweepRow r;
      r.lambda = l;
      r.mu = m;
      rows.push_back(r);
    }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.mu < b.mu;
  });
  if (rows.empty()) return rows;

  // The form depends only on the grid and s, which all points share.
  base.grid.check();
  const GagliardoForm form = assemble_form(base.grid, base.s);
  const int n = static_cast<int>(rows.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int k = 0; k < n; ++k) {
    SweepRow& row = rows[k];
    row.Lambda = row.C = row.J_plus = row.J_minus = kNaN;
    row.norm_plus = row.norm_minus = row.A0 = row.A_lm = kNaN;
    try {
      ProblemSpec spec = base;
      spec.lambda = row.lambda;
      spec.mu = row.mu;
      const Problem problem = validate_params(spec);
      std::vector<GridFunction> candidates = default_candidates(spec.grid);
      auto attempt = [&](Branch b) -> std::optional<SolutionReport> {
        try {
          SolutionReport rep = solve_branch(problem, form, b, opts);
          candidates.push_back(rep.pair.u);
          candidates.push_back(rep.pair.w);
          return rep;
        } catch (const Error&) {
          return std::nullopt;
        }
      };
      const auto plus = attempt(Branch::Plus);
      const auto minus = attempt(Branch::Minus);
      const ConstantsReport c =
          compute_constants(problem, estimate_S(form, problem.r(), candidates));
      row.Lambda = c.Lambda;
      row.C = c.C;
      row.in_gamma = c.in_gamma;
      row.A0 = c.A0;
      row.A_lm = c.A_lm;
      if (plus) {
        row.plus_converged = plus->converged;
        row.J_plus = plus->J;
        row.norm_plus = plus->norm;
      }
      if (minus) {
        row.minus_converged = minus->converged;
        row.J_minus = minus->J;
        row.norm_minus = minus->norm;
      }
      if (row.plus_converged && row.minus_converged)
        row.gap_ok = gap_check(*plus, *minus, c).ordering_ok;
    } catch (const Error&) {
      // validation failure: the row keeps its NaN/false encoding
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.lambda) << ',' << format_double(r.mu) << ',' << format_double(r.Lambda)
       << ',' << format_double(r.C) << ',' << b(r.in_gamma) << ',' << b(r.plus_converged) << ','
       << b(r.minus_converged) << ',' << format_double(r.J_plus) << ','
       << format_double(r.J_minus) << ',' << format_double(r.norm_plus) << ','
       << format_double(r.norm_minus) << ',' << format_double(r.A0) << ','
       << format_double(r.A_lm) << ',' << b(r.gap_ok) << '\n';
  }
  return os.str();
}

std::string fiber_csv(const Problem& problem, const GagliardoForm& form, const GridPair& dir,
                      double t_lo, double t_hi, int samples) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw Error(ErrorCode::NonpositiveT, "fiber range needs 0 < t_lo < t_hi");
  if (samples < 2) throw Error(ErrorCode::InvalidOptions, "fiber needs at least 2 samples");
  const PairStats st = pair_stats(problem, form, dir);
  const Exponents ex = Exponents::of(problem);
  const FiberRoots roots = project(st, ex);

  std::ostringstream os;
  os << "# kind=" << to_string(roots.kind) << ",t1=" << format_double(roots.t1)
     << ",t2=" << format_double(roots.t2) << ",t_max=" << format_double(roots.t_max) << '\n';
  os << "t,phi,dphi,psi\n";
  const double ratio = std::log(t_hi / t_lo);
  for (int k = 0; k < samples; ++k) {
    const double t = k == samples - 1 ? t_hi : t_lo * std::exp(ratio * k / (samples - 1));
    const FiberValues fv = phi(st, ex, t);
    os << format_double(t) << ',' << format_double(fv.phi) << ',' << format_double(fv.dphi) << ','
       << format_double(psi(st, ex, t)) << '\n';
  }
  return os.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigParseError, "cannot write " + path);
  out << text;
}

int default_jobs() {
  if (const char* env = std::getenv("NEHARI_FRAC_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

struct SolverFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> max_iters;
  std::optional<double> tol_manifold;
  bool tie_components = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base seed for restart initializations");
    cmd->add_option("--restarts", restarts, "Independent restarts per branch");
    cmd->add_option("--max-iters", max_iters, "Iteration cap per restart");
    cmd->add_option("--tol-manifold", tol_manifold, "Manifold membership tolerance");
    cmd->add_flag("--tie-components", tie_components, "Start every restart from w = u");
  }
  SolverOptions apply(SolverOptions o) const {
    if (seed) o.seed = *seed;
    if (restarts) o.restarts = *restarts;
    if (max_iters) o.max_iters = *max_iters;
    if (tol_manifold) o.tol_manifold = *tol_manifold;
    if (tie_components) o.tie_components = true;
    return o;
  }
};

void print_summary(std::ostream& out, const SolutionReport& r) {
  out << to_string(r.branch) << ": J=" << format_double(r.J) << " norm=" << format_double(r.norm)
      << " phi2=" << format_double(r.phi2) << " iters=" << r.iters
      << " converged=" << (r.converged ? "true" : "false") << '\n';
}

int cmd_constants(const std::string& config_path, std::ostream& out) {
  const io::Config cfg = io::load_config(config_path);
  const Problem problem = validate_params(cfg.problem);
  const GagliardoForm form = assemble_form(cfg.problem.grid, cfg.problem.s);
  const std::vector<GridFunction> candidates = default_candidates(cfg.problem.grid);
  const ConstantsReport c = compute_constants(problem, estimate_S(form, problem.r(), candidates));
  io::json j = io::to_json(c);
  j["problem_hash"] = io::problem_hash(cfg.canonical);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_solve(const std::string& config_path, const std::string& branch,
              const std::string& out_dir, const SolverFlags& flags, bool allow_unconverged,
              std::ostream& out) {
  const io::Config cfg = io::load_config(config_path);
  const std::string hash = io::problem_hash(cfg.canonical);
  const Problem problem = validate_params(cfg.problem);
  RunOptions ro;
  ro.solver = flags.apply(cfg.solver);
  ro.solver.check();
  ro.plus = branch == "plus" || branch == "both";
  ro.minus = branch == "minus" || branch == "both";

  const auto t0 = std::chrono::steady_clock::now();
  const GagliardoForm form = assemble_form(cfg.problem.grid, cfg.problem.s);
  const double assemble_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  RunArtifacts art = run_problem(problem, form, ro);
  art.problem_hash = hash;
  art.timings["assemble"] = assemble_ms;

  std::filesystem::create_directories(out_dir);
  bool all_converged = true;
  for (const auto& s : art.solutions) {
    const std::string path =
        (std::filesystem::path(out_dir) / ("solution_" + std::string(to_string(s.branch)) + ".json"))
            .string();
    io::write_json(path, io::to_json(s, hash));
    print_summary(out, s);
    out << "  wrote " << path << '\n';
    all_converged = all_converged && s.converged;
  }
  if (ro.plus && ro.minus) {
    io::json g = {{"problem_hash", hash}, {"constants", io::to_json(art.constants)}};
    g["gap"] = art.gap ? io::to_json(*art.gap) : io::json(nullptr);
    const std::string path = (std::filesystem::path(out_dir) / "gap.json").string();
    io::write_json(path, g);
    out << "gap: ordering_ok=" << (art.gap && art.gap->ordering_ok ? "true" : "false") << '\n';
    out << "  wrote " << path << '\n';
  }
  out << "problem_hash " << hash << '\n';
  for (const auto& [phase, ms] : art.timings) out << "time " << phase << " " << ms << " ms\n";
  if (!all_converged && !allow_unconverged) return kNotConverged;
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& lambdas,
              const std::vector<double>& mus, const std::string& out_csv, const SolverFlags& flags,
              int jobs, std::ostream& out) {
  if (lambdas.empty() || mus.empty())
    throw Error(ErrorCode::ConfigParseError, "sweep grids must be nonempty");
  const io::Config cfg = io::load_config(config_path);
  SolverOptions opts = flags.apply(cfg.solver);
  opts.check();
  const auto rows = run_sweep(cfg.problem, opts, lambdas, mus, jobs);
  write_text(out_csv, sweep_csv(rows));
  out << "wrote " << rows.size() << " rows to " << out_csv << '\n';
  return kOk;
}

int cmd_fiber(const std::string& config_path, const std::string& direction, std::uint64_t seed,
              double t_lo, double t_hi, int samples, const std::string& out_csv,
              std::ostream& out) {
  const io::Config cfg = io::load_config(config_path);
  const Problem problem = validate_params(cfg.problem);
  const GagliardoForm form = assemble_form(cfg.problem.grid, cfg.problem.s);
  std::mt19937_64 rng = restart_rng(seed, 0);
  const GridPair dir = initial_direction(problem, branch_from_string(direction), rng);
  const std::string csv = fiber_csv(problem, form, dir, t_lo, t_hi, samples);
  if (out_csv.empty() || out_csv == "-")
    out << csv;
  else
    write_text(out_csv, csv);
  return kOk;
}

int cmd_verify(const std::string& config_path, const std::string& solution_path,
               double delta_factor, double residual_tol, std::ostream& out) {
  const io::Config cfg = io::load_config(config_path);
  const std::string hash = io::problem_hash(cfg.canonical);
  const Problem problem = validate_params(cfg.problem);
  const GagliardoForm form = assemble_form(cfg.problem.grid, cfg.problem.s);
  const io::json sj = io::read_json(solution_path);
  const SolutionReport sol = io::solution_from_json(sj);
  check_compatible(form, sol.pair.u);
  check_compatible(form, sol.pair.w);

  std::vector<GridFunction> candidates = default_candidates(cfg.problem.grid);
  candidates.push_back(sol.pair.u);
  candidates.push_back(sol.pair.w);
  const double S = estimate_S(form, problem.r(), candidates);
  CheckList checks = inequality_suite(problem, form, sol.pair, S, cfg.solver.tol_manifold);

  const double J = energy(problem, form, sol.pair).J;
  Check rt;
  rt.name = "J_roundtrip";
  rt.lhs = std::abs(J - sol.J);
  rt.rhs = 1e-12 * std::abs(J);
  rt.passed = rt.lhs <= rt.rhs;
  checks.checks.push_back(rt);

  Check hc;
  hc.name = "problem_hash";
  hc.passed = sj.value("problem_hash", std::string()) == hash;
  checks.checks.push_back(hc);

  io::json res = nullptr;
  const double umax = sol.pair.u.maxCoeff();
  if (umax > 0.0) {
    const ResidualReport rr = weak_residual(problem, form, sol.pair, delta_factor * umax);
    res = io::to_json(rr);
    Check wc;
    wc.name = "weak_residual";
    wc.applicable = sol.converged;
    wc.lhs = std::max(rr.res_u, rr.res_w);
    wc.rhs = residual_tol;
    wc.passed = !wc.applicable || wc.lhs <= wc.rhs;
    checks.checks.push_back(wc);
  }

  const bool ok = checks.all_passed();
  io::json j = {{"problem_hash", hash}, {"S", S},     {"J_file", sol.J}, {"J_recomputed", J},
                {"residual", res},       {"checks", io::to_json(checks)}, {"passed", ok}};
  out << j.dump(2) << '\n';
  return ok ? kOk : kCheckFailed;
}

int cmd_assemble(const std::string& config_path, const std::string& dump_path, bool serial,
                 std::ostream& out) {
  const io::Config cfg = io::load_config(config_path);
  cfg.problem.grid.check();
  const auto t0 = std::chrono::steady_clock::now();
  const GagliardoForm form = serial ? assemble_form_serial(cfg.problem.grid, cfg.problem.s)
                                    : assemble_form(cfg.problem.grid, cfg.problem.s);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!dump_path.empty()) {
    std::ostringstream os;
    const auto& G = form.matrix();
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index k = 0; k < G.cols(); ++k) os << (k ? "," : "") << format_double(G(i, k));
      os << '\n';
    }
    write_text(dump_path, os.str());
    out << "wrote " << G.rows() << "x" << G.cols() << " matrix to " << dump_path << '\n';
  }
  out << "time assemble " << ms << " ms\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nehari-manifold solver for a singular fractional Laplacian system", "nehari_frac"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = default_jobs();
  app.add_option("--jobs", jobs, "Worker threads (default: NEHARI_FRAC_JOBS or OpenMP default)");

  std::string config;
  auto* c_const = app.add_subcommand("constants", "Print the threshold constants as JSON");
  c_const->add_option("--config", config, "Config JSON")->required();

  auto* c_solve = app.add_subcommand("solve", "Solve one or both branches");
  std::string branch = "both", out_dir = ".";
  bool allow_unconverged = false;
  SolverFlags solve_flags;
  c_solve->add_option("--config", config, "Config JSON")->required();
  c_solve->add_option("--branch", branch, "plus, minus or both")
      ->check(CLI::IsMember({"plus", "minus", "both"}));
  c_solve->add_option("--out-dir", out_dir, "Directory for solution files");
  c_solve->add_flag("--allow-unconverged", allow_unconverged, "Exit 0 even if a branch stalls");
  solve_flags.add_to(c_solve);

  auto* c_sweep = app.add_subcommand("sweep", "Solve over a (lambda, mu) grid");
  std::vector<double> lambdas, mus;
  std::string sweep_out = "sweep.csv";
  SolverFlags sweep_flags;
  c_sweep->add_option("--config", config, "Config JSON")->required();
  c_sweep->add_option("--lambda", lambdas, "Comma-separated lambda values")
      ->delimiter(',')
      ->required();
  c_sweep->add_option("--mu", mus, "Comma-separated mu values")->delimiter(',')->required();
  c_sweep->add_option("--out", sweep_out, "Output CSV");
  sweep_flags.add_to(c_sweep);

  auto* c_fiber = app.add_subcommand("fiber", "Sample the fiber map of a seeded direction");
  std::string direction = "minus", fiber_out;
  std::uint64_t fiber_seed = 0;
  double t_lo = 1e-3, t_hi = 1e3;
  int samples = 200;
  c_fiber->add_option("--config", config, "Config JSON")->required();
  c_fiber->add_option("--direction", direction, "Direction family: plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  c_fiber->add_option("--seed", fiber_seed, "Direction seed");
  c_fiber->add_option("--t-lo", t_lo, "Smallest t");
  c_fiber->add_option("--t-hi", t_hi, "Largest t");
  c_fiber->add_option("--samples", samples, "Number of sample rows");
  c_fiber->add_option("--out", fiber_out, "Output CSV (default stdout)");

  auto* c_verify = app.add_subcommand("verify", "Check a stored solution");
  std::string solution;
  double delta_factor = 1e-4, residual_tol = 1e-3;
  c_verify->add_option("--config", config, "Config JSON")->required();
  c_verify->add_option("--solution", solution, "Solution JSON")->required();
  c_verify->add_option("--delta-factor", delta_factor, "Mask threshold relative to max(u)");
  c_verify->add_option("--residual-tol", residual_tol, "Weak residual bound");

  auto* c_asm = app.add_subcommand("assemble", "Assemble the quadratic form");
  std::string dump_path;
  bool serial = false;
  c_asm->add_option("--config", config, "Config JSON")->required();
  c_asm->add_option("--dump-matrix", dump_path, "Write the interior matrix as CSV");
  c_asm->add_flag("--serial", serial, "Use the serial reference kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kParse;
  }

  try {
    if (jobs > 0) omp_set_num_threads(jobs);
    if (c_const->parsed()) return cmd_constants(config, out);
    if (c_solve->parsed())
      return cmd_solve(config, branch, out_dir, solve_flags, allow_unconverged, out);
    if (c_sweep->parsed())
      return cmd_sweep(config, lambdas, mus, sweep_out, sweep_flags, jobs, out);
    if (c_fiber->parsed())
      return cmd_fiber(config, direction, fiber_seed, t_lo, t_hi, samples, fiber_out, out);
    if (c_verify->parsed()) return cmd_verify(config, solution, delta_factor, residual_tol, out);
    if (c_asm->parsed()) return cmd_assemble(config, dump_path, serial, out);
  } catch (const ValidationError& e) {
    err << "validation failed:\n";
    for (const auto& v : e.violations()) err << "  " << to_string(v.code) << ": " << v.message << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kCheckFailed;
  }
  return kParse;
}

}  // namespace nehari::cli

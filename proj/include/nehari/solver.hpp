#pragma once

#include "nehari/energy.hpp"
#include "nehari/nonlocal_form.hpp"
#include "nehari/problem.hpp"
#include "nehari/thresholds.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nehari {

enum class Branch { Plus, Minus };

std::string_view to_string(Branch b);
/// Parses "plus" / "minus"; throws ConfigParseError otherwise.
Branch branch_from_string(std::string_view s);

struct SolverOptions {
  int max_iters = 2000;
  double step = 0.1;          // base step, halved on rejection and reset after acceptance
  double tol_energy = 1e-10;  // relative J decrease that ends a trajectory
  double tol_manifold = 1e-8;
  double eps_singular = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 8;
  bool tie_components = false;  // start every restart from w = u

  /// Throws InvalidOptions on nonpositive fields or restarts < 1.
  void check() const;
};

struct SolutionReport {
  Branch branch = Branch::Plus;
  GridPair pair;
  double J = 0.0;
  double norm = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double t_used = 0.0;  // fiber scaling applied at the last accepted projection
  int iters = 0;
  bool converged = false;
  int restarts_used = 0;  // restarts that produced an admissible trajectory
};

struct GapReport {
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double A0 = 0.0;
  double A_lm = 0.0;
  bool ordering_ok = false;
};

/// One accepted iterate (including the projected starting point) of one
/// restart trajectory.
struct IterateInfo {
  int restart = 0;
  int iter = 0;
  const GridPair* pair = nullptr;
  PairStats stats;
  double J = 0.0;
};
using IterateObserver = std::function<void(const IterateInfo&)>;

/// Uniform double in [0, 1) from the top 53 bits of one draw. Spelled out
/// so that streams are identical across standard libraries.
double unit_uniform(std::mt19937_64& rng);

/// Generator for restart `k` of a run seeded with `seed`.
std::mt19937_64 restart_rng(std::uint64_t seed, int k);

/// Nonnegative starting pair with K > 0. For the Minus branch the support is
/// centered on a node where b > 0 and the draw is repeated until B > 0.
GridPair initial_direction(const Problem& problem, Branch branch, std::mt19937_64& rng,
                           bool tie_components = false);

/// Sobolev-gradient descent on the branch with fiber reprojection after each
/// step. Restarts run concurrently unless an observer is given.
SolutionReport solve_branch(const Problem& problem, const GagliardoForm& form, Branch branch,
                            const SolverOptions& opts, const IterateObserver& observer = {});

GapReport gap_check(const SolutionReport& plus, const SolutionReport& minus,
                    const ConstantsReport& constants);

struct RunOptions {
  SolverOptions solver;
  bool plus = true;
  bool minus = true;
  SobolevOptions sobolev;
};

struct RunArtifacts {
  std::string problem_hash;
  ConstantsReport constants;
  std::vector<SolutionReport> solutions;
  std::optional<GapReport> gap;
  std::map<std::string, double> timings;  // milliseconds per phase
};

/// Solves the requested branches, then estimates S with the solution
/// components added to the default candidates, so that every constant is
/// consistent with the pairs it is compared against.
RunArtifacts run_problem(const Problem& problem, const GagliardoForm& form,
                         const RunOptions& opts);

}  // namespace nehari

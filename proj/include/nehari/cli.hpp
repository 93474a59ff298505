#pragma once

#include "nehari/error.hpp"
#include "nehari/problem.hpp"
#include "nehari/solver.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nehari::cli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kParse = 2,
  kValidation = 3,
  kNoDirection = 4,
  kNotConverged = 5,
};

int exit_code(ErrorCode code);

/// One (λ, μ) point of a sweep. Points that fail validation or hit a solver
/// error keep NaN in the numeric columns and false in the flags.
struct SweepRow {
  double lambda = 0.0;
  double mu = 0.0;
  double Lambda = 0.0;
  double C = 0.0;
  bool in_gamma = false;
  bool plus_converged = false;
  bool minus_converged = false;
  double J_plus = 0.0;
  double J_minus = 0.0;
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double A0 = 0.0;
  double A_lm = 0.0;
  bool gap_ok = false;
};

inline constexpr const char* kSweepHeader =
    "lambda,mu,Lambda,C,in_gamma,plus_converged,minus_converged,J_plus,J_minus,norm_plus,"
    "norm_minus,A0,A_lm,gap_ok";

/// Runs every (λ, μ) pair, up to `jobs` points at a time (0 = OpenMP
/// default). Rows come back sorted by (λ, μ).
std::vector<SweepRow> run_sweep(const ProblemSpec& base, const SolverOptions& opts,
                                std::span<const double> lambdas, std::span<const double> mus,
                                int jobs = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Log-spaced samples of the fiber of `dir`, preceded by a comment row with
/// the projection roots.
std::string fiber_csv(const Problem& problem, const GagliardoForm& form, const GridPair& dir,
                      double t_lo, double t_hi, int samples);

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

/// Entry point behind the `nehari_frac` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nehari::cli

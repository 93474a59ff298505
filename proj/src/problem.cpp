#include "nehari/problem.hpp"

#include "nehari/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nehari {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::WeightSignViolation: return "WeightSignViolation";
    case ErrorCode::ZeroParameters: return "ZeroParameters";
    case ErrorCode::SampleLengthMismatch: return "SampleLengthMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonpositiveEpsilon: return "NonpositiveEpsilon";
    case ErrorCode::NonpositiveT: return "NonpositiveT";
    case ErrorCode::NonpositiveNorm: return "NonpositiveNorm";
    case ErrorCode::NonpositiveK: return "NonpositiveK";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::NonpositiveS: return "NonpositiveS";
    case ErrorCode::NonpositiveBSup: return "NonpositiveBSup";
    case ErrorCode::NonpositiveLambda: return "NonpositiveLambda";
    case ErrorCode::DirectionSearchFailed: return "DirectionSearchFailed";
    case ErrorCode::NoAdmissibleDirection: return "NoAdmissibleDirection";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotConvergedInput: return "NotConvergedInput";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::CandidateNotIncluded: return "CandidateNotIncluded";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::InvalidOptions: return "InvalidOptions";
  }
  return "Unknown";
}

namespace {

std::string join_violations(const std::vector<Violation>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << to_string(v[i].code) << " (" << v[i].message << ")";
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::InvalidExponent : violations.front().code,
            join_violations(violations)),
      violations_(std::move(violations)) {}

bool ValidationError::has(ErrorCode code) const noexcept {
  for (const auto& v : violations_)
    if (v.code == code) return true;
  return false;
}

void GridSpec::check() const {
  if (!(right - left > 0.0) || !std::isfinite(left) || !std::isfinite(right))
    throw Error(ErrorCode::InvalidGrid, "interval must satisfy right > left");
  if (cells < 4) throw Error(ErrorCode::InvalidGrid, "need at least 4 cells");
}

WeightSpec WeightSpec::constant(double v) {
  WeightSpec w;
  w.kind = Kind::Constant;
  w.value = v;
  return w;
}

WeightSpec WeightSpec::gaussian(double center, double width, double amplitude) {
  WeightSpec w;
  w.kind = Kind::Gaussian;
  w.center = center;
  w.width = width;
  w.amplitude = amplitude;
  return w;
}

WeightSpec WeightSpec::cos_pi_x(double amplitude) {
  WeightSpec w;
  w.kind = Kind::CosPiX;
  w.amplitude = amplitude;
  return w;
}

WeightSpec WeightSpec::linear_x(double slope, double offset) {
  WeightSpec w;
  w.kind = Kind::LinearX;
  w.slope = slope;
  w.offset = offset;
  return w;
}

WeightSpec WeightSpec::from_samples(std::vector<double> values) {
  WeightSpec w;
  w.kind = Kind::Samples;
  w.samples = std::move(values);
  return w;
}

GridPair zero_pair(const GridSpec& grid) {
  return {GridFunction::Zero(grid.nodes()), GridFunction::Zero(grid.nodes())};
}

double critical_exponent(int n, double s) {
  if (!(n > 2.0 * s) || !(s > 0.0))
    throw Error(ErrorCode::InvalidOrder, "critical exponent needs 0 < 2s < n");
  return 2.0 * n / (n - 2.0 * s);
}

GridFunction sample_weight(const WeightSpec& w, const GridSpec& grid) {
  const int n = grid.nodes();
  GridFunction out(n);
  using Kind = WeightSpec::Kind;
  if (w.kind == Kind::Samples) {
    if (static_cast<int>(w.samples.size()) != n)
      throw Error(ErrorCode::SampleLengthMismatch,
                  "expected " + std::to_string(n) + " samples, got " +
                      std::to_string(w.samples.size()));
    for (int i = 0; i < n; ++i) out[i] = w.samples[i];
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    switch (w.kind) {
      case Kind::Constant: out[i] = w.value; break;
      case Kind::Gaussian: {
        const double z = (x - w.center) / w.width;
        out[i] = w.amplitude * std::exp(-z * z);
        break;
      }
      case Kind::CosPiX: out[i] = w.amplitude * std::cos(std::numbers::pi * grid.unit_x(i)); break;
      case Kind::LinearX: out[i] = w.slope * x + w.offset; break;
      case Kind::Samples: break;
    }
  }
  return out;
}

Eigen::VectorXd trapezoid_weights(const GridSpec& grid) {
  Eigen::VectorXd wts = Eigen::VectorXd::Constant(grid.nodes(), grid.h());
  wts[0] = wts[grid.cells] = 0.5 * grid.h();
  return wts;
}

Problem sample_problem(const ProblemSpec& spec) {
  spec.grid.check();
  Problem p;
  p.spec = spec;
  p.f = sample_weight(spec.f, spec.grid);
  p.g = sample_weight(spec.g, spec.grid);
  p.b = sample_weight(spec.b, spec.grid);
  p.quad_weights = trapezoid_weights(spec.grid);
  if (spec.s > 0.0 && spec.s < 0.5) p.critical_exponent = critical_exponent(1, spec.s);
  return p;
}

Problem validate_params(const ProblemSpec& spec) {
  std::vector<Violation> bad;
  auto fail = [&](ErrorCode c, std::string msg) { bad.push_back({c, std::move(msg)}); };

  try {
    spec.grid.check();
  } catch (const Error& e) {
    throw ValidationError({{ErrorCode::InvalidGrid, e.what()}});
  }

  // n = 1 > 2s forces s < 1/2; 2*_s - 1 > 2 forces s > 1/6.
  const bool order_ok = spec.s > 1.0 / 6.0 && spec.s < 0.5;
  if (!order_ok) fail(ErrorCode::InvalidOrder, "s must lie in (1/6, 1/2)");
  if (!(spec.q > 0.0 && spec.q < 1.0)) fail(ErrorCode::InvalidExponent, "q must lie in (0, 1)");
  if (!(spec.alpha > 1.0)) fail(ErrorCode::InvalidExponent, "alpha must exceed 1");
  if (!(spec.beta > 1.0)) fail(ErrorCode::InvalidExponent, "beta must exceed 1");
  const double r = spec.alpha + spec.beta;
  if (!(r > 2.0)) fail(ErrorCode::InvalidExponent, "alpha + beta must exceed 2");
  if (order_ok) {
    const double crit = critical_exponent(1, spec.s);
    if (!(r < crit - 1.0))
      fail(ErrorCode::InvalidExponent, "alpha + beta must be below 2*_s - 1");
  }
  if (!std::isfinite(spec.lambda) || !std::isfinite(spec.mu))
    fail(ErrorCode::ZeroParameters, "lambda and mu must be finite");
  else if (spec.lambda == 0.0 && spec.mu == 0.0)
    fail(ErrorCode::ZeroParameters, "(lambda, mu) = (0, 0) is excluded");

  Problem p;
  try {
    p = sample_problem(spec);
  } catch (const Error& e) {
    fail(e.code(), e.what());
    throw ValidationError(std::move(bad));
  }

  const int N = spec.grid.cells;
  bool f_pos = true, g_pos = true, finite = true;
  double b_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= N; ++i) {
    finite = finite && std::isfinite(p.f[i]) && std::isfinite(p.g[i]) && std::isfinite(p.b[i]);
    b_max = std::max(b_max, p.b[i]);
    if (i == 0 || i == N) continue;
    f_pos = f_pos && p.f[i] > 0.0;
    g_pos = g_pos && p.g[i] > 0.0;
  }
  if (!finite) fail(ErrorCode::WeightSignViolation, "weights must be finite at every node");
  if (!f_pos) fail(ErrorCode::WeightSignViolation, "f must be strictly positive in the interior");
  if (!g_pos) fail(ErrorCode::WeightSignViolation, "g must be strictly positive in the interior");
  if (!(b_max > 0.0)) fail(ErrorCode::WeightSignViolation, "b must be positive somewhere");

  if (!bad.empty()) throw ValidationError(std::move(bad));
  return p;
}

}  // namespace nehari

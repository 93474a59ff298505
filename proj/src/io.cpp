#include "nehari/io.hpp"

#include "nehari/error.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace nehari::io {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::ConfigParseError, msg);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) parse_fail("unknown key '" + it.key() + "' in " + where);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail("missing '" + key + "' in " + where);
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) parse_fail("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

long long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) parse_fail("'" + key + "' must be an integer");
  return v.get<long long>();
}

// NaN and infinities have no JSON spelling; nlohmann writes null.
double number_or_nan(const json& v) {
  return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

json to_json(const WeightSpec& w) {
  switch (w.kind) {
    case WeightSpec::Kind::Constant: return {{"kind", "constant"}, {"value", w.value}};
    case WeightSpec::Kind::Gaussian:
      return {{"kind", "gaussian"}, {"center", w.center}, {"width", w.width}, {"amplitude", w.amplitude}};
    case WeightSpec::Kind::CosPiX: return {{"kind", "cos_pi_x"}, {"amplitude", w.amplitude}};
    case WeightSpec::Kind::LinearX: return {{"kind", "linear_x"}, {"slope", w.slope}, {"offset", w.offset}};
    case WeightSpec::Kind::Samples: return {{"kind", "samples"}, {"values", w.samples}};
  }
  return {};
}

WeightSpec weight_from_json(const json& j) {
  const std::string where = "weight";
  const json& kind_j = require(j, "kind", where);
  if (!kind_j.is_string()) parse_fail("weight kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "constant") {
    reject_unknown(j, {"kind", "value"}, where);
    return WeightSpec::constant(number(j, "value", where));
  }
  if (kind == "gaussian") {
    reject_unknown(j, {"kind", "center", "width", "amplitude"}, where);
    return WeightSpec::gaussian(number(j, "center", where), number(j, "width", where),
                                number_or(j, "amplitude", 1.0, where));
  }
  if (kind == "cos_pi_x") {
    reject_unknown(j, {"kind", "amplitude"}, where);
    return WeightSpec::cos_pi_x(number_or(j, "amplitude", 1.0, where));
  }
  if (kind == "linear_x") {
    reject_unknown(j, {"kind", "slope", "offset"}, where);
    return WeightSpec::linear_x(number(j, "slope", where), number_or(j, "offset", 0.0, where));
  }
  if (kind == "samples") {
    reject_unknown(j, {"kind", "values"}, where);
    const json& v = require(j, "values", where);
    if (!v.is_array()) parse_fail("samples values must be an array");
    std::vector<double> values;
    for (const auto& e : v) {
      if (!e.is_number()) parse_fail("samples values must be numbers");
      values.push_back(e.get<double>());
    }
    return WeightSpec::from_samples(std::move(values));
  }
  parse_fail("unknown weight kind '" + kind + "'");
}

json to_json(const ProblemSpec& spec) {
  return {{"grid", {{"left", spec.grid.left}, {"right", spec.grid.right}, {"cells", spec.grid.cells}}},
          {"s", spec.s},
          {"q", spec.q},
          {"alpha", spec.alpha},
          {"beta", spec.beta},
          {"lambda", spec.lambda},
          {"mu", spec.mu},
          {"f", to_json(spec.f)},
          {"g", to_json(spec.g)},
          {"b", to_json(spec.b)}};
}

json to_json(const SolverOptions& o) {
  return {{"max_iters", o.max_iters},       {"step", o.step},
          {"tol_energy", o.tol_energy},     {"tol_manifold", o.tol_manifold},
          {"eps_singular", o.eps_singular}, {"seed", o.seed},
          {"restarts", o.restarts},         {"tie_components", o.tie_components}};
}

Config parse_config(const json& j) {
  if (!j.is_object()) parse_fail("config must be a JSON object");
  reject_unknown(j, {"grid", "s", "q", "alpha", "beta", "lambda", "mu", "f", "g", "b", "solver"},
                 "config");
  Config c;
  const json& grid = require(j, "grid", "config");
  reject_unknown(grid, {"left", "right", "cells"}, "grid");
  c.problem.grid.left = number(grid, "left", "grid");
  c.problem.grid.right = number(grid, "right", "grid");
  c.problem.grid.cells = static_cast<int>(integer(require(grid, "cells", "grid"), "cells"));
  c.problem.s = number(j, "s", "config");
  c.problem.q = number(j, "q", "config");
  c.problem.alpha = number(j, "alpha", "config");
  c.problem.beta = number(j, "beta", "config");
  c.problem.lambda = number(j, "lambda", "config");
  c.problem.mu = number(j, "mu", "config");
  c.problem.f = weight_from_json(require(j, "f", "config"));
  c.problem.g = weight_from_json(require(j, "g", "config"));
  c.problem.b = weight_from_json(require(j, "b", "config"));

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (!s.is_object()) parse_fail("solver must be an object");
    reject_unknown(s, {"max_iters", "step", "tol_energy", "tol_manifold", "eps_singular", "seed",
                       "restarts", "tie_components"},
                   "solver");
    SolverOptions& o = c.solver;
    if (s.contains("max_iters")) o.max_iters = static_cast<int>(integer(s["max_iters"], "max_iters"));
    if (s.contains("restarts")) o.restarts = static_cast<int>(integer(s["restarts"], "restarts"));
    if (s.contains("seed")) {
      const json& v = s["seed"];
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        parse_fail("'seed' must be a nonnegative integer");
      o.seed = v.get<std::uint64_t>();
    }
    o.step = number_or(s, "step", o.step, "solver");
    o.tol_energy = number_or(s, "tol_energy", o.tol_energy, "solver");
    o.tol_manifold = number_or(s, "tol_manifold", o.tol_manifold, "solver");
    o.eps_singular = number_or(s, "eps_singular", o.eps_singular, "solver");
    if (s.contains("tie_components")) {
      if (!s["tie_components"].is_boolean()) parse_fail("'tie_components' must be a boolean");
      o.tie_components = s["tie_components"].get<bool>();
    }
  }
  c.canonical = to_json(c.problem);
  c.canonical["solver"] = to_json(c.solver);
  return c;
}

Config parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string problem_hash(const json& canonical) {
  const std::string text = canonical.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

json to_json(const SolutionReport& r, const std::string& hash) {
  return {{"branch", std::string(to_string(r.branch))},
          {"u", std::vector<double>(r.pair.u.data(), r.pair.u.data() + r.pair.u.size())},
          {"w", std::vector<double>(r.pair.w.data(), r.pair.w.data() + r.pair.w.size())},
          {"J", r.J},
          {"norm", r.norm},
          {"phi1", r.phi1},
          {"phi2", r.phi2},
          {"t_used", r.t_used},
          {"iters", r.iters},
          {"converged", r.converged},
          {"restarts_used", r.restarts_used},
          {"problem_hash", hash}};
}

SolutionReport solution_from_json(const json& j) {
  try {
    SolutionReport r;
    r.branch = branch_from_string(j.at("branch").get<std::string>());
    const auto u = j.at("u").get<std::vector<double>>();
    const auto w = j.at("w").get<std::vector<double>>();
    if (u.size() != w.size()) parse_fail("u and w lengths differ");
    r.pair.u = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
    r.pair.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    r.J = number_or_nan(j.at("J"));
    r.norm = number_or_nan(j.at("norm"));
    r.phi1 = number_or_nan(j.at("phi1"));
    r.phi2 = number_or_nan(j.at("phi2"));
    r.t_used = number_or_nan(j.at("t_used"));
    r.iters = j.at("iters").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.restarts_used = j.value("restarts_used", 0);
    return r;
  } catch (const json::exception& e) {
    parse_fail(std::string("bad solution file: ") + e.what());
  }
}

json to_json(const ConstantsReport& c) {
  json j = {{"q_star", c.q_star}, {"f_norm", c.f_norm}, {"g_norm", c.g_norm}, {"b_sup", c.b_sup},
            {"Lambda", c.Lambda}, {"S", c.S},           {"C", c.C},           {"E", c.E},
            {"A0", c.A0},         {"A_lm", c.A_lm},     {"J_lower", c.J_lower}, {"in_gamma", c.in_gamma}};
  j["S_coupled"] = c.S_coupled ? json(*c.S_coupled) : json(nullptr);
  return j;
}

json to_json(const GapReport& g) {
  return {{"norm_plus", g.norm_plus}, {"norm_minus", g.norm_minus}, {"A0", g.A0},
          {"A_lm", g.A_lm},           {"ordering_ok", g.ordering_ok}};
}

json to_json(const ResidualReport& r) {
  return {{"res_u", r.res_u}, {"res_w", r.res_w}, {"masked_fraction", r.masked_fraction},
          {"delta", r.delta}};
}

json to_json(const CheckList& c) {
  json arr = json::array();
  for (const auto& ch : c.checks)
    arr.push_back({{"name", ch.name}, {"applicable", ch.applicable}, {"passed", ch.passed},
                   {"lhs", ch.lhs}, {"rhs", ch.rhs}});
  return arr;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

}  // namespace nehari::io

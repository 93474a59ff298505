#pragma once

#include "nehari/solver.hpp"
#include "nehari/thresholds.hpp"
#include "nehari/verify.hpp"

#include <json.hpp>

#include <string>

namespace nehari::io {

using nlohmann::json;

/// Parsed run configuration. `canonical` is the config re-serialized from
/// the parsed values with every optional field filled in, so that key order
/// and omitted defaults do not affect the hash.
struct Config {
  ProblemSpec problem;
  SolverOptions solver;
  json canonical;
};

/// Throws ConfigParseError on malformed JSON, missing or mistyped fields and
/// unknown keys. Does not check the mathematical assumptions.
Config parse_config(const json& j);
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

json to_json(const ProblemSpec& spec);
json to_json(const SolverOptions& opts);
json to_json(const WeightSpec& w);
WeightSpec weight_from_json(const json& j);

/// Lowercase hex SHA-256 of the compact dump of `canonical`.
std::string problem_hash(const json& canonical);

json to_json(const SolutionReport& r, const std::string& problem_hash);
/// Inverse of the solution writer; the pair keeps the stored nodal values.
SolutionReport solution_from_json(const json& j);

json to_json(const ConstantsReport& c);
json to_json(const GapReport& g);
json to_json(const ResidualReport& r);
json to_json(const CheckList& c);

/// Writes `j.dump(2)` plus a trailing newline.
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

}  // namespace nehari::io

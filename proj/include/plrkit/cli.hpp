#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "plrkit/io.hpp"

namespace plrkit {

/// Everything one CLI invocation needs. Unset optionals fall back to per-command defaults.
struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::optional<std::string> catalog_file;

  // slope / ekeland / orbit
  std::optional<std::string> space;
  std::optional<std::string> field;
  std::optional<std::string> g_field;
  std::optional<std::string> point;
  std::optional<std::string> start;
  std::optional<std::string> x_bar;
  std::optional<std::string> map;
  std::optional<double> eps;
  std::optional<double> resolution;
  std::optional<double> lambda;
  std::optional<std::size_t> max_iter;

  // plr-check / sharp-min / series-check
  std::optional<std::string> catalog;
  std::optional<std::vector<double>> center;
  std::optional<std::vector<double>> p;
  std::optional<double> c;
  std::optional<double> delta;
  std::optional<double> spacing;
  std::optional<std::string> file;

  // determine
  std::optional<std::string> instance;
  std::optional<double> h;
  std::optional<std::string> report;
  std::optional<std::string> csv;
  std::optional<std::string> plot;
};

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names{"slope",     "ekeland",   "orbit",     "plr-check",
                                              "series-check", "sharp-min", "determine", "catalog-list"};
  return names;
}

/// Strict parse: unknown keys are an InputError.
ExperimentConfig config_from_json(const json& j, const std::string& where = "config");

/// Fields set in `over` replace those in `base`.
ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& over);

/// Runs one command. Exit codes: 0 pass, 1 verified failure, 2 input error.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace plrkit

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nehari/io.hpp"

namespace nehari {

enum class Scenario { ClosedFormSuite, Classify, GroundSmallNu, GroundLargeNu, MountainPass, AlgebraicLemma, MassLedger };
std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct GridSpec {
  double r_min = 1e-6;
  double r_max = 1e6;
  std::size_t n = 1024;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::ClosedFormSuite;
  Params params;
  GridSpec grid;
  DescentConfig descent;
  MountainPassConfig mountain_pass;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  Json options = Json::object();  // scenario-specific settings
};

inline constexpr int kSchemaVersion = 1;

/// Parses JSON text. Syntax errors become ConfigError with a "line:col"
/// anchor; unknown keys and wrong types are ConfigError as well.
ExperimentConfig parse_config(const std::string& text);
Json config_to_json(const ExperimentConfig& c);

/// Applies "a.b.c=value" to a config document; value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(Json& doc, const std::string& assignment);

/// Reads text, applies overrides and parses.
ExperimentConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {});

struct ExperimentOutcome {
  bool pass = false;
  std::string verdict;  // one line
  Json result;          // scenario payload
  std::vector<HistoryEntry> history;
  std::vector<std::pair<std::string, StatePair>> fields;
};

/// Executes a scenario without touching the file system.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Writes result.json, history.csv and fields/<name>.csv under dir.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const ExperimentOutcome& out);

}  // namespace nehari

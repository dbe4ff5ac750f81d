#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbm/io.hpp"

namespace bbm {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The kinds accepted by the CLI, one per verified claim family.
const std::vector<std::string>& experiment_kinds();

// Default parameter section for a kind; every accepted key appears here.
nlohmann::json default_params(const std::string& kind);

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  int threads = 1;
  std::string format = "csv";  // csv | json
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const;
  // Throws ConfigError listing unknown or mistyped keys.
  static ExperimentConfig from_json(const nlohmann::json& j);
  // params merged over default_params(kind); throws ConfigError on unknown keys.
  nlohmann::json resolved_params() const;
};

// FNV-1a of the canonical JSON form of the config.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> info;
  bool ok() const { return errors.empty(); }
  std::string render() const;
};

Diagnostics validate(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::string claim;
  bool pass = false;
  std::vector<std::string> summary_lines;
  std::vector<std::string> header;
  CsvTable rows;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::uint64_t> member_seeds;
};

// Runs the experiment without touching the filesystem.
ExperimentResult execute(const ExperimentConfig& cfg);

nlohmann::json manifest(const ExperimentConfig& cfg, const ExperimentResult& res);

// Executes and writes <out>/<kind>.csv or .json, manifest.json and
// summary.txt. Returns 0 on pass, 1 on tolerance failure, 2 on configuration
// errors (reported on log).
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace bbm

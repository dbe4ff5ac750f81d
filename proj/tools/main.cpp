#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bbm/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> format;
  bool dump = false;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--threads", f.threads, "worker threads");
  app->add_option("--format", f.format, "csv or json");
  app->add_flag("--print-config", f.dump, "print the resolved config and exit");
}

bbm::ExperimentConfig load(const std::string& kind, const Flags& f) {
  bbm::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw bbm::ConfigError("cannot parse " + f.config + ": " + e.what());
    }
    if (!kind.empty() && !j.contains("kind")) j["kind"] = kind;
    cfg = bbm::ExperimentConfig::from_json(j);
    if (!kind.empty() && cfg.kind != kind)
      throw bbm::ConfigError("config kind '" + cfg.kind + "' does not match subcommand '" + kind + "'");
  } else {
    cfg.kind = kind;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out_dir = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.format) cfg.format = *f.format;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized BBM experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const auto& kind : bbm::experiment_kinds()) {
    CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    add_flags(sub, flags);
    sub->callback([&chosen, kind] { chosen = kind; });
  }
  CLI::App* val = app.add_subcommand("validate", "check a config and report its parameter regime");
  add_flags(val, flags);
  std::string val_kind;
  val->add_option("--kind", val_kind, "experiment kind when the config omits it");
  val->callback([&chosen] { chosen = "validate"; });
  CLI::App* list = app.add_subcommand("list", "list experiment kinds and their default parameters");
  list->callback([&chosen] { chosen = "list"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (chosen == "list") {
    for (const auto& k : bbm::experiment_kinds())
      std::cout << k << " " << bbm::default_params(k).dump() << "\n";
    return 0;
  }
  try {
    bbm::ExperimentConfig cfg = load(chosen == "validate" ? val_kind : chosen, flags);
    if (flags.dump) {
      nlohmann::json j = cfg.to_json();
      j["params"] = cfg.resolved_params();
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (chosen == "validate") {
      bbm::Diagnostics d = bbm::validate(cfg);
      std::cout << d.render();
      return d.ok() ? 0 : 2;
    }
    return bbm::run(cfg, std::cout);
  } catch (const bbm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
}

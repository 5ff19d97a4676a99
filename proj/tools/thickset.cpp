// thickset: run an experiment described by a JSON config and write CSV.
//
// Exit codes: 0 all contracts held, 1 a contract failed (manifest on stderr),
// 2 usage or configuration error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "thickset/error.hpp"
#include "thickset/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Evaluate and stress-test uncertainty inequalities for band-limited functions"};
  std::string config_path;
  std::string out_path;
  int jobs = 1;
  bool verbose = false;
  app.add_option("--config", config_path, "experiment definition (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "CSV destination (stdout when omitted)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "progress on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  thickset::ExperimentConfig config;
  thickset::ExperimentTable table({});
  try {
    std::ifstream in(config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw thickset::Error(thickset::ErrorCode::Config, config_path + ": " + e.what());
    }
    config = thickset::ExperimentConfig::from_json(doc);
    config.jobs = jobs;
    config.verbose = verbose;
    if (const char* env = std::getenv("THICKSET_SEED")) {
      try {
        std::size_t used = 0;
        config.seed_override = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw thickset::Error(thickset::ErrorCode::Config, std::string("THICKSET_SEED is not an integer: ") + env);
      }
    }
    table = thickset::run(config);
  } catch (const thickset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (out_path.empty()) {
      std::cout << thickset::emit_csv(table);
    } else {
      thickset::write_csv(table, out_path);
    }
  } catch (const thickset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (!table.ok()) {
    std::cerr << table.failures().size() << " contract failure(s):\n";
    for (const auto& failure : table.failures()) std::cerr << "  " << failure << '\n';
  }
  return thickset::exit_status(table);
}

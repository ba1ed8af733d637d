#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "raspen/harness.hpp"

#ifndef RASPEN_DATA_DIR
#define RASPEN_DATA_DIR "data"
#endif

namespace fs = std::filesystem;

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, int threads) {
  raspen::ExperimentConfig config = raspen::load_config(config_path);
  if (seed) config.random.seed = *seed;
  const fs::path out = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
  const auto result = raspen::run_experiment(config, threads);
  raspen::write_outputs(config, result, out);
  std::cout << raspen::results_csv(result.rows);
  for (const auto& r : result.rows) {
    if (!r.reason.empty()) {
      std::cerr << r.method << " I=" << r.I << " k=" << r.k << " beta=" << r.beta << ": "
                << r.reason << '\n';
    }
  }
  std::cerr << "wrote " << out.string() << '\n';
  return 0;
}

int compare_command(const std::string& results, const std::string& reference) {
  const auto rows = raspen::read_summary_csv(results);
  const auto report = raspen::compare_table(rows, fs::path(reference));
  std::cout << report.format();
  return report.all_pass() ? 0 : 1;
}

int reference_tables_command(const std::string& data_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no reference tables in " << data_dir << '\n';
    return 1;
  }
  for (const auto& f : files) {
    std::cout << "== " << f.filename().string() << '\n';
    std::ifstream in(f);
    std::cout << in.rdbuf() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear restricted additive Schwarz experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_flag;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  app.add_option("--config", config_flag, "experiment config file");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "seed of the random field (overrides the config)");
  app.add_option("--threads", threads, "concurrent combinations")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config_pos;
  run->add_option("config", config_pos, "experiment config file");

  auto* compare = app.add_subcommand("compare", "compare results.csv with a reference table");
  std::string results;
  std::string reference;
  compare->add_option("results", results, "results.csv of a run")->required();
  compare->add_option("reference", reference, "reference table")->required();

  auto* tables = app.add_subcommand("reference-tables", "print the shipped reference tables");
  std::string data_dir = RASPEN_DATA_DIR;
  tables->add_option("--data", data_dir, "directory of reference tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const std::string path = config_pos.empty() ? config_flag : config_pos;
      if (path.empty()) {
        std::cerr << "run: no config given\n";
        return 2;
      }
      return run_command(path, out_dir, seed, threads);
    }
    if (compare->parsed()) return compare_command(results, reference);
    if (tables->parsed()) return reference_tables_command(data_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

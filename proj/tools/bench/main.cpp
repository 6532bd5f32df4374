// plgp-bench: runs the e1, e2, e3 and spectra experiment grids.
//
// Exit status: 0 when every asserted check holds, 1 when one fails,
// 2 on usage, configuration or IO errors.

#include "plgp/experiments.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected-likelihood GP experiments"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, seeds;
  int jobs = 1;
  bool full_scale = false, quiet = false, print_config = false;
  app.add_option("--config", config_path, "JSON file merged into the experiment defaults")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seeds", seeds, "seed list, e.g. 0-9 or 0,3,7");
  app.add_option("--jobs", jobs, "concurrent training cells")->check(CLI::PositiveNumber);
  app.add_flag("--full-scale", full_scale, "use the full-size grids");
  app.add_flag("--quiet", quiet, "no progress lines");
  app.add_flag("--print-config", print_config, "print the merged config and exit");

  for (const char* name : {"e1", "e2", "e3", "spectra"}) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  plgp::experiments::RunOptions options;
  try {
    options.out_dir = out_dir;
    options.jobs = jobs;
    options.full_scale = full_scale;
    options.verbose = !quiet;
    if (!seeds.empty()) options.seeds = plgp::experiments::parse_seed_list(seeds);
    if (!config_path.empty()) options.overrides = read_json(config_path);
    if (print_config) {
      auto cfg = plgp::experiments::default_config(experiment, full_scale);
      cfg.merge_patch(options.overrides);
      std::cout << cfg.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  plgp::experiments::ExperimentResult result;
  try {
    result = plgp::experiments::run_experiment(experiment, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& check : result.checks) {
    const char* status = check.skipped ? "SKIP" : check.passed ? "PASS" : "FAIL";
    std::cout << status << " " << check.name << ": " << check.detail << "\n";
  }
  if (!out_dir.empty()) std::cout << "outputs in " << out_dir << "\n";
  return result.all_passed() ? 0 : 1;
}

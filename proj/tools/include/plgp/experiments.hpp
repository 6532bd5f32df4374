#pragma once

#include "plgp/optim.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace plgp::experiments {

struct RunOptions {
  std::filesystem::path out_dir;        ///< empty: nothing is written
  std::vector<std::uint64_t> seeds;     ///< empty: the experiment default
  int jobs = 1;                         ///< concurrent training cells
  bool full_scale = false;              ///< paper-scale sizes instead of desk scale
  nlohmann::json overrides = nlohmann::json::object();  ///< merged into the defaults
  bool verbose = false;                 ///< progress lines on stderr
};

/// One training run of the grid.
struct Cell {
  std::string method;     ///< ML, VFE or PL
  std::string optimiser;  ///< Adam or BFGS
  std::string kernel;
  Eigen::Index n = 0;
  Eigen::Index size = 0;  ///< m for VFE, k for PL, 0 for ML
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  TrainResult result;
  double exact_nll = std::numeric_limits<double>::quiet_NaN();  ///< nll_exact at the learnt spec
  double metric = std::numeric_limits<double>::quiet_NaN();     ///< mean variance (E1) or RMSE (E3)
};

/// An asserted ordering. Skipped checks do not affect the exit status.
struct Check {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct ExperimentResult {
  std::string name;
  nlohmann::json config;  ///< defaults merged with overrides
  std::vector<Cell> cells;
  std::vector<Check> checks;
  nlohmann::json summary;

  bool all_passed() const;
  const Check* find_check(const std::string& name) const;
};

/// Default configuration of each experiment, before overrides.
nlohmann::json default_config(const std::string& experiment, bool full_scale);

ExperimentResult run_e1(const RunOptions& options);
ExperimentResult run_e2(const RunOptions& options);
ExperimentResult run_e3(const RunOptions& options);
ExperimentResult run_spectra(const RunOptions& options);

/// Dispatch by name: e1, e2, e3 or spectra.
ExperimentResult run_experiment(const std::string& name, const RunOptions& options);

// Helpers shared by the runners, exposed for tests.

/// Runs fn(0..count-1) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

double median(std::vector<double> values);

nlohmann::json to_json(const Cell& cell);
nlohmann::json to_json(const Check& check);

/// Parses "0,1,5-9" into a seed list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string colour;
  bool markers = false;  ///< scatter instead of a polyline
};

struct SvgAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<double> horizontal_lines;  ///< dashed reference levels
};

/// A self-contained SVG line/scatter plot.
std::string svg_plot(const SvgAxes& axes, const std::vector<SvgSeries>& series);

}  // namespace plgp::experiments

#include "runner.hpp"

#include "plgp/error.hpp"
#include "plgp/io.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifndef PLGP_DATA_DIR
#define PLGP_DATA_DIR "data"
#endif
#ifndef PLGP_VERSION
#define PLGP_VERSION "unknown"
#endif

namespace plgp::experiments {

using json = nlohmann::json;

bool ExperimentResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.skipped || c.passed; });
}

const Check* ExperimentResult::find_check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

json kernel_json(const KernelSpec& spec) { return plgp::to_json(spec); }

json seed_range(std::uint64_t count) {
  json s = json::array();
  for (std::uint64_t i = 0; i < count; ++i) s.push_back(i);
  return s;
}

json optimiser_sections() {
  return {{"adam", {{"learning_rate", 0.1}, {"max_iters", 2000}}},
          {"bfgs", {{"learning_rate", 5e-3}, {"max_iters", 50}}}};
}

}  // namespace

json default_config(const std::string& experiment, bool full_scale) {
  json c = optimiser_sections();
  c["stop_window"] = 5;
  c["stop_delta"] = 1e-2;
  if (experiment == "e1") {
    c["n"] = 1000;
    c["kernel"] = kernel_json(KernelSpec::se(1.0, 20.0, 0.1));
    c["k"] = 100;
    c["m"] = 100;
    c["projection"] = "Sphere";
    c["optimisers"] = {"Adam", "BFGS"};
    c["grid_points"] = 400;
    c["seeds"] = seed_range(10);
    c["variance_win_fraction"] = 0.7;
    c["reference"] = {{"Adam", {{"ML", 337.4}, {"VFE", 358.1}, {"PL", 347.0}}},
                      {"BFGS", {{"ML", 337.4}, {"VFE", 358.5}, {"PL", 349.4}}}};
    c["reference_time_s"] = {{"Adam", {{"ML", 3.66}, {"VFE", 1.57}, {"PL", 0.574}}},
                             {"BFGS", {{"ML", 26.5}, {"VFE", 4.95}, {"PL", 3.76}}}};
  } else if (experiment == "e2") {
    c["n_list"] = full_scale ? json{500, 1000, 1500, 2000, 3000, 4000} : json{500, 1000, 1500};
    c["sizes"] = {50, 100, 150};
    c["kernel"] = kernel_json(KernelSpec::se(1.0, 20.0, 0.1));
    c["projection"] = "Sphere";
    c["optimiser"] = "Adam";
    c["seeds"] = seed_range(1);
    c["check_size"] = 150;
    c["tolerance"] = 0.01;
  } else if (experiment == "e3") {
    c["sunspots_csv"] = std::string(PLGP_DATA_DIR) + "/sunspots_monthly.csv";
    c["sunspots_column"] = "sunspots";
    c["limit_n"] = nullptr;
    c["kernels"] = {"SE", "Laplace", "RQ", "LocPer"};
    c["k"] = 100;
    c["m"] = 100;
    c["projection"] = "Sphere";
    c["optimiser"] = "Adam";
    c["skip_ml"] = false;
    c["min_pl_wins"] = 3;
    c["seeds"] = seed_range(1);
    c["eeg_csv"] = nullptr;
    c["eeg_column"] = 0;
    c["eeg_limit"] = 10000;
    c["eeg_train_fraction"] = 0.8;
    c["eeg_split"] = "Random";
    c["eeg_normalise"] = true;
    c["reference_sunspots"] = {{"SE", {{"ML", 1549.120}, {"VFE", 1691.999}, {"PL", 1584.565}}},
                               {"Laplace", {{"ML", 1432.688}, {"VFE", 1944.358}, {"PL", 1675.062}}},
                               {"RQ", {{"ML", 1531.909}, {"VFE", 1765.050}, {"PL", 1588.746}}},
                               {"LocPer", {{"ML", 1510.357}, {"VFE", 1769.835}, {"PL", 1547.013}}}};
    c["reference_eeg_rmse"] = {{"SE", {{"VFE", 0.303}, {"PL", 0.194}}},
                               {"Laplace", {{"VFE", 0.270}, {"PL", 0.145}}},
                               {"RQ", {{"VFE", 0.285}, {"PL", 0.192}}},
                               {"LocPer", {{"VFE", 0.289}, {"PL", 0.170}}}};
  } else if (experiment == "spectra") {
    c = json::object();
    c["n"] = full_scale ? 2000 : 500;
    c["k_list"] = {50, 100, 200};
    c["families"] = {"Sphere", "Repulsive", "Localised", "OneHot"};
    c["kernel"] = kernel_json(KernelSpec::se(5.0, 10.0, 0.1));
    c["seeds"] = seed_range(1);
    c["repulsive_steps"] = 200;
    c["repulsive_step_size"] = 0.1;
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  return c;
}

ExperimentResult run_experiment(const std::string& name, const RunOptions& options) {
  if (name == "e1") return run_e1(options);
  if (name == "e2") return run_e2(options);
  if (name == "e3") return run_e3(options);
  if (name == "spectra") return run_spectra(options);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double median(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

json to_json(const Cell& cell) {
  json j{{"method", cell.method},   {"optimiser", cell.optimiser}, {"kernel", cell.kernel},
         {"n", cell.n},             {"size", cell.size},           {"seed", cell.seed},
         {"ok", cell.ok},           {"error", cell.error}};
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  j["exact_nll"] = finite_or_null(cell.exact_nll);
  j["metric"] = finite_or_null(cell.metric);
  if (cell.ok) j["result"] = plgp::to_json(cell.result);
  return j;
}

json to_json(const Check& check) {
  return {{"name", check.name}, {"passed", check.passed}, {"skipped", check.skipped},
          {"detail", check.detail}};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("bad seed list entry '" + item + "'");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

namespace detail {

json merged_config(const std::string& name, const RunOptions& options) {
  json c = default_config(name, options.full_scale);
  if (!options.overrides.is_null()) c.merge_patch(options.overrides);
  return c;
}

std::vector<std::uint64_t> resolve_seeds(const RunOptions& options, const json& config) {
  if (!options.seeds.empty()) return options.seeds;
  std::vector<std::uint64_t> seeds = config.at("seeds").get<std::vector<std::uint64_t>>();
  if (seeds.empty()) throw std::invalid_argument("config has no seeds");
  return seeds;
}

KernelSpec kernel_from_config(const json& config) { return kernel_spec_from_json(config.at("kernel")); }

TrainConfig train_config(const json& config, Objective objective, Optimiser optimiser,
                         std::uint64_t seed, Eigen::Index size) {
  TrainConfig c = optimiser == Optimiser::Adam ? TrainConfig::adam_defaults(objective)
                                               : TrainConfig::bfgs_defaults(objective);
  const char* section = optimiser == Optimiser::Adam ? "adam" : "bfgs";
  if (config.contains(section)) c = train_config_from_json(config[section], c);
  c.objective = objective;
  c.optimiser = optimiser;
  c.stop_window = config.value("stop_window", c.stop_window);
  c.stop_delta = config.value("stop_delta", c.stop_delta);
  c.seed = seed;
  if (config.contains("projection")) {
    c.projection = projection_kind_from_string(config["projection"].get<std::string>());
  }
  if (objective == Objective::VFE) c.num_inducing = size;
  if (objective == Objective::PL) c.num_projections = size;
  c.validate();
  return c;
}

Cell train_cell(const std::string& kernel_label, const KernelSpec& init, const Dataset& data,
                const TrainConfig& config, std::uint64_t seed) {
  Cell cell;
  cell.method = std::string(to_string(config.objective));
  cell.optimiser = std::string(to_string(config.optimiser));
  cell.kernel = kernel_label;
  cell.n = data.size();
  cell.seed = seed;
  if (config.objective == Objective::VFE) cell.size = config.num_inducing;
  if (config.objective == Objective::PL) cell.size = config.num_projections;
  try {
    cell.result = train(init, data, config);
    cell.exact_nll = config.objective == Objective::ExactML ? cell.result.final_objective
                                                            : nll_exact(cell.result.learnt_spec, data);
    cell.ok = std::isfinite(cell.exact_nll);
    if (!cell.ok) cell.error = "non-finite exact NLL at the learnt hyperparameters";
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

std::string cell_stem(const Cell& cell) {
  std::ostringstream s;
  s << cell.optimiser << "_" << cell.method << "_" << cell.kernel << "_n" << cell.n;
  if (cell.size > 0) s << "_s" << cell.size;
  s << "_seed" << cell.seed;
  return s.str();
}

void log(const RunOptions& options, const std::string& line) {
  if (!options.verbose) return;
  static std::mutex mutex;
  const std::lock_guard<std::mutex> lock(mutex);
  std::cerr << line << std::endl;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
  out << "\n";
}

void write_common_outputs(const RunOptions& options, const ExperimentResult& result,
                          const std::string& started_at) {
  if (options.out_dir.empty()) return;
  namespace fs = std::filesystem;
  const fs::path cells_dir = options.out_dir / "cells";
  fs::create_directories(cells_dir);
  write_text(options.out_dir / "config.json", result.config.dump(2) + "\n");
  for (const auto& cell : result.cells) {
    write_text(cells_dir / (cell_stem(cell) + ".json"), to_json(cell).dump(2) + "\n");
    if (cell.ok) {
      std::ofstream trace(cells_dir / (cell_stem(cell) + "_trace.csv"));
      write_trace_csv(trace, cell.result);
    }
  }
  json checks = json::array();
  for (const auto& c : result.checks) checks.push_back(to_json(c));
  json summary = result.summary;
  summary["checks"] = checks;
  summary["all_passed"] = result.all_passed();
  write_text(options.out_dir / "summary.json", summary.dump(2) + "\n");

  json seeds = json::array();
  for (const auto& cell : result.cells) seeds.push_back(cell.seed);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  const json manifest{
      {"experiment", result.name},
      {"config", result.config},
      {"seeds", seeds},
      {"jobs", options.jobs},
      {"full_scale", options.full_scale},
      {"versions",
       {{"plgp", PLGP_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", __VERSION__}}},
      {"started_at", started_at},
      {"finished_at", utc_timestamp()},
      {"cells", result.cells.size()}};
  write_text(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace detail
}  // namespace plgp::experiments

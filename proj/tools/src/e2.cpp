#include "runner.hpp"

#include "plgp/data.hpp"
#include "plgp/io.hpp"

#include <cmath>
#include <sstream>

namespace plgp::experiments {

using json = nlohmann::json;
using namespace detail;

ExperimentResult run_e2(const RunOptions& options) {
  const std::string started = utc_timestamp();
  ExperimentResult out;
  out.name = "e2";
  out.config = merged_config("e2", options);
  const json& cfg = out.config;
  const auto seeds = resolve_seeds(options, cfg);
  const auto truth = kernel_from_config(cfg);
  const auto n_list = cfg.at("n_list").get<std::vector<Eigen::Index>>();
  const auto sizes = cfg.at("sizes").get<std::vector<Eigen::Index>>();
  const auto opt = optimiser_from_string(cfg.at("optimiser").get<std::string>());
  const auto check_size = cfg.at("check_size").get<Eigen::Index>();
  const double tolerance = cfg.at("tolerance").get<double>();

  struct Job {
    std::size_t n_index, seed_index;
    Objective obj;
    Eigen::Index size;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < n_list.size(); ++i)
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      jobs.push_back({i, s, Objective::ExactML, 0});
      for (auto size : sizes) {
        jobs.push_back({i, s, Objective::VFE, size});
        jobs.push_back({i, s, Objective::PL, size});
      }
    }

  out.cells.resize(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const Eigen::Index n = n_list[job.n_index];
    const auto seed = seeds[job.seed_index];
    Dataset data = synthetic(truth, n, {0.0, static_cast<double>(n - 1)}, seed);
    centre(data);
    const auto config = train_config(cfg, job.obj, opt, seed, job.size);
    Cell cell = train_cell("SE", default_init(KernelFamily::SE, data), data, config, seed);
    cell.size = job.size;
    log(options, "e2 " + cell_stem(cell) + " nll=" + num(cell.exact_nll) + " time=" + num(cell.result.wall_time_s));
    out.cells[j] = std::move(cell);
  });

  bool all_ok = true;
  for (const auto& c : out.cells) all_ok = all_ok && c.ok;
  out.checks.push_back({"cells_ok", all_ok, false, all_ok ? "all cells trained" : "some cells failed"});

  std::ostringstream csv;
  write_csv_row(csv, {"n", "method", "size", "seed", "exact_nll", "objective", "time_s", "iterations"});
  for (const auto& c : out.cells) {
    write_csv_row(csv, {std::to_string(c.n), c.method, std::to_string(c.size), std::to_string(c.seed),
                        num(c.exact_nll), c.ok ? num(c.result.final_objective) : "nan",
                        c.ok ? num(c.result.wall_time_s) : "nan", std::to_string(c.result.iterations)});
  }

  auto median_of = [&](Eigen::Index n, const std::string& method, Eigen::Index size, bool time) {
    std::vector<double> v;
    for (const auto& c : out.cells)
      if (c.ok && c.n == n && c.method == method && c.size == size)
        v.push_back(time ? c.result.wall_time_s : c.exact_nll);
    return median(v);
  };

  json per_n = json::array();
  for (auto n : n_list) {
    const double ml = median_of(n, "ML", 0, false);
    const double vfe = median_of(n, "VFE", check_size, false);
    const double pl = median_of(n, "PL", check_size, false);
    const double rel_vfe = std::abs(vfe - ml) / std::abs(ml);
    const double rel_pl = std::abs(pl - ml) / std::abs(ml);
    const bool pass = rel_vfe <= tolerance && rel_pl <= tolerance;
    std::ostringstream d;
    d << "n=" << n << " size " << check_size << ": ML " << num(ml) << ", VFE " << num(vfe) << " (rel "
      << num(rel_vfe) << "), PL " << num(pl) << " (rel " << num(rel_pl) << "), tolerance " << num(tolerance);
    out.checks.push_back({"within_tolerance_n" + std::to_string(n), pass, false, d.str()});
    per_n.push_back({{"n", n}, {"ml", ml}, {"vfe", vfe}, {"pl", pl}});

    if (!options.out_dir.empty()) {
      std::vector<SvgSeries> series{{"VFE", {}, {}, "#d62728", true}, {"PL", {}, {}, "#1f77b4", true}};
      for (auto size : sizes) {
        series[0].x.push_back(median_of(n, "VFE", size, true));
        series[0].y.push_back(median_of(n, "VFE", size, false));
        series[1].x.push_back(median_of(n, "PL", size, true));
        series[1].y.push_back(median_of(n, "PL", size, false));
      }
      SvgAxes axes{"NLL vs time, n = " + std::to_string(n), "time [s]", "exact NLL", true, true, {ml}};
      std::filesystem::create_directories(options.out_dir);
      write_text(options.out_dir / ("fig3_n" + std::to_string(n) + ".svg"), svg_plot(axes, series));
    }
  }
  out.summary = {{"experiment", "e2"}, {"per_n", per_n}, {"check_size", check_size}};
  if (!options.out_dir.empty()) write_text(options.out_dir / "e2_cells.csv", csv.str());
  write_common_outputs(options, out, started);
  return out;
}

}  // namespace plgp::experiments

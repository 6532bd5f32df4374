#include "runner.hpp"

#include "plgp/data.hpp"
#include "plgp/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace plgp::experiments {

using json = nlohmann::json;
using namespace detail;

namespace {

const Objective kMethods[] = {Objective::ExactML, Objective::VFE, Objective::PL};

// Posterior variance on the grid at the learnt hyperparameters. VFE uses its
// own sparse predictive, ML and PL the exact one.
Eigen::VectorXd posterior_variance(const Cell& cell, const Dataset& data, const Eigen::VectorXd& grid) {
  const auto& spec = cell.result.learnt_spec;
  if (cell.method == "VFE") return predict_sparse(spec, *cell.result.learnt_inducing, data, grid).variance;
  return predict(spec, data, grid).variance;
}

}  // namespace

ExperimentResult run_e1(const RunOptions& options) {
  const std::string started = utc_timestamp();
  ExperimentResult out;
  out.name = "e1";
  out.config = merged_config("e1", options);
  const json& cfg = out.config;
  const auto seeds = resolve_seeds(options, cfg);
  const Eigen::Index n = cfg.at("n").get<Eigen::Index>();
  const auto truth = kernel_from_config(cfg);
  const std::pair<double, double> x_range =
      cfg.contains("x_range") ? cfg["x_range"].get<std::pair<double, double>>()
                              : std::pair<double, double>{0.0, static_cast<double>(n - 1)};
  const Eigen::VectorXd grid =
      Eigen::VectorXd::LinSpaced(cfg.at("grid_points").get<Eigen::Index>(), x_range.first, x_range.second);
  std::vector<Optimiser> optimisers;
  for (const auto& o : cfg.at("optimisers")) optimisers.push_back(optimiser_from_string(o.get<std::string>()));

  std::vector<Dataset> datasets;
  for (auto seed : seeds) {
    Dataset d = synthetic(truth, n, x_range, seed);
    centre(d);
    datasets.push_back(std::move(d));
  }

  struct Job {
    std::size_t seed_index;
    Optimiser opt;
    Objective obj;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < seeds.size(); ++s)
    for (auto opt : optimisers)
      for (auto obj : kMethods) jobs.push_back({s, opt, obj});

  out.cells.resize(jobs.size());
  std::vector<Eigen::VectorXd> variances(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Dataset& data = datasets[job.seed_index];
    const auto seed = seeds[job.seed_index];
    const Eigen::Index size = job.obj == Objective::VFE ? cfg.at("m").get<Eigen::Index>()
                                                         : cfg.at("k").get<Eigen::Index>();
    const auto config = train_config(cfg, job.obj, job.opt, seed, size);
    Cell cell = train_cell("SE", default_init(KernelFamily::SE, data), data, config, seed);
    if (job.obj == Objective::ExactML) cell.size = 0;
    if (cell.ok) {
      try {
        variances[i] = posterior_variance(cell, data, grid);
        cell.metric = variances[i].mean();
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = std::string("prediction failed: ") + e.what();
      }
    }
    log(options, "e1 " + cell_stem(cell) + " nll=" + num(cell.exact_nll) + " iters=" +
                     std::to_string(cell.result.iterations) + " time=" + num(cell.result.wall_time_s));
    out.cells[i] = std::move(cell);
  });

  // cells[index(s, o, m)]
  const std::size_t per_seed = optimisers.size() * std::size(kMethods);
  auto at = [&](std::size_t s, std::size_t o, std::size_t m) -> const Cell& {
    return out.cells[s * per_seed + o * std::size(kMethods) + m];
  };

  bool all_ok = true;
  for (const auto& c : out.cells) all_ok = all_ok && c.ok;
  out.checks.push_back({"cells_ok", all_ok, false, all_ok ? "all cells trained" : "some cells failed"});

  json table = json::array();
  std::ostringstream table_csv, variance_csv;
  write_csv_row(table_csv, {"optimiser", "method", "size", "median_exact_nll", "median_objective",
                            "median_time_s", "median_iterations", "reference_nll", "reference_time_s"});
  write_csv_row(variance_csv, {"optimiser", "seed", "var_ML", "var_VFE", "var_PL", "pl_closer"});

  const std::size_t need = static_cast<std::size_t>(
      std::ceil(cfg.at("variance_win_fraction").get<double>() * static_cast<double>(seeds.size()) - 1e-12));

  for (std::size_t o = 0; o < optimisers.size(); ++o) {
    const std::string opt_name(to_string(optimisers[o]));
    std::map<std::string, double> med_nll, med_time, med_iters;
    for (std::size_t m = 0; m < std::size(kMethods); ++m) {
      std::vector<double> nll, obj, time, iters;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const Cell& c = at(s, o, m);
        if (!c.ok) continue;
        nll.push_back(c.exact_nll);
        obj.push_back(c.result.final_objective);
        time.push_back(c.result.wall_time_s);
        iters.push_back(c.result.iterations);
      }
      const std::string method(to_string(kMethods[m]));
      med_nll[method] = median(nll);
      med_time[method] = median(time);
      med_iters[method] = median(iters);
      const double ref_nll = cfg["reference"].value(opt_name, json::object()).value(method, kNaN);
      const double ref_time = cfg["reference_time_s"].value(opt_name, json::object()).value(method, kNaN);
      const Eigen::Index size = kMethods[m] == Objective::VFE  ? cfg["m"].get<Eigen::Index>()
                                : kMethods[m] == Objective::PL ? cfg["k"].get<Eigen::Index>()
                                                               : 0;
      write_csv_row(table_csv, {opt_name, method, std::to_string(size), num(med_nll[method]), num(median(obj)),
                                num(med_time[method]), num(med_iters[method]), num(ref_nll), num(ref_time)});
      table.push_back({{"optimiser", opt_name}, {"method", method}, {"median_exact_nll", med_nll[method]},
                       {"median_time_s", med_time[method]}, {"median_iterations", med_iters[method]},
                       {"reference_nll", ref_nll}});
    }

    const bool order = med_nll["ML"] <= med_nll["PL"] && med_nll["PL"] <= med_nll["VFE"];
    std::ostringstream d;
    d << "median exact NLL ML " << num(med_nll["ML"]) << ", PL " << num(med_nll["PL"]) << ", VFE "
      << num(med_nll["VFE"]) << " (reference " << num(cfg["reference"][opt_name].value("ML", kNaN)) << " / "
      << num(cfg["reference"][opt_name].value("PL", kNaN)) << " / "
      << num(cfg["reference"][opt_name].value("VFE", kNaN)) << ")";
    out.checks.push_back({"nll_order_" + opt_name, order, false, d.str()});

    if (optimisers[o] == Optimiser::Adam) {
      std::ostringstream t;
      t << "median time PL " << num(med_time["PL"]) << " s, VFE " << num(med_time["VFE"]) << " s";
      out.checks.push_back({"pl_time_lt_vfe_Adam", med_time["PL"] < med_time["VFE"], false, t.str()});
      std::ostringstream it;
      it << "median iterations PL " << num(med_iters["PL"]) << ", VFE " << num(med_iters["VFE"]);
      out.checks.push_back({"pl_iters_lt_vfe_Adam", med_iters["PL"] < med_iters["VFE"], false, it.str()});
    }

    std::size_t wins = 0, counted = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const Cell &ml = at(s, o, 0), &vfe = at(s, o, 1), &pl = at(s, o, 2);
      if (!(ml.ok && vfe.ok && pl.ok)) continue;
      ++counted;
      const bool closer = std::abs(pl.metric - ml.metric) < std::abs(vfe.metric - ml.metric);
      wins += closer ? 1 : 0;
      write_csv_row(variance_csv, {opt_name, std::to_string(seeds[s]), num(ml.metric), num(vfe.metric),
                                   num(pl.metric), closer ? "1" : "0"});
    }
    std::ostringstream v;
    v << "PL variance closer to ML in " << wins << " of " << counted << " seeds (need " << need << ")";
    out.checks.push_back({"variance_closer_" + opt_name, wins >= need, false, v.str()});
  }
  out.summary = {{"experiment", "e1"}, {"table", table}, {"seeds", seeds}};

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    write_text(options.out_dir / "table1.csv", table_csv.str());
    write_text(options.out_dir / "variance.csv", variance_csv.str());
    // Curves of the first seed.
    for (std::size_t o = 0; o < optimisers.size(); ++o) {
      const std::string opt_name(to_string(optimisers[o]));
      std::ostringstream curve;
      write_csv_row(curve, {"x_star", "var_ML", "var_VFE", "var_PL"});
      std::vector<SvgSeries> series;
      const char* colours[] = {"#e6a700", "#d62728", "#1f77b4"};
      for (std::size_t m = 0; m < std::size(kMethods); ++m) {
        const auto& v = variances[o * std::size(kMethods) + m];
        SvgSeries s{std::string(to_string(kMethods[m])), {}, {}, colours[m], false};
        for (Eigen::Index g = 0; g < v.size(); ++g) {
          s.x.push_back(grid[g]);
          s.y.push_back(v[g]);
        }
        series.push_back(std::move(s));
      }
      for (Eigen::Index g = 0; g < grid.size(); ++g) {
        std::vector<std::string> row{num(grid[g])};
        for (const auto& s : series) row.push_back(s.y.empty() ? "nan" : num(s.y[static_cast<std::size_t>(g)]));
        write_csv_row(curve, row);
      }
      write_text(options.out_dir / ("posterior_variance_" + opt_name + ".csv"), curve.str());
      write_text(options.out_dir / ("fig2_variance_" + opt_name + ".svg"),
                 svg_plot({"Posterior variance, " + opt_name + ", seed " + std::to_string(seeds[0]), "x",
                           "variance", false, false, {}},
                          series));
    }
  }
  write_common_outputs(options, out, started);
  return out;
}

}  // namespace plgp::experiments

#include "runner.hpp"

#include "plgp/data.hpp"
#include "plgp/io.hpp"

#include <cmath>
#include <sstream>

namespace plgp::experiments {

using json = nlohmann::json;
using namespace detail;

namespace {

ColumnSelector column_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.get<std::size_t>();
}

std::optional<std::size_t> limit_from_json(const json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg[key].is_null()) return std::nullopt;
  return cfg[key].get<std::size_t>();
}

}  // namespace

ExperimentResult run_e3(const RunOptions& options) {
  const std::string started = utc_timestamp();
  ExperimentResult out;
  out.name = "e3";
  out.config = merged_config("e3", options);
  const json& cfg = out.config;
  const auto seeds = resolve_seeds(options, cfg);
  const auto seed = seeds.front();
  const auto opt = optimiser_from_string(cfg.at("optimiser").get<std::string>());
  const auto k = cfg.at("k").get<Eigen::Index>();
  const auto m = cfg.at("m").get<Eigen::Index>();
  const bool skip_ml = cfg.value("skip_ml", false);
  std::vector<KernelFamily> families;
  for (const auto& name : cfg.at("kernels")) families.push_back(kernel_family_from_string(name.get<std::string>()));

  Dataset sunspots = load_series_csv(cfg.at("sunspots_csv").get<std::string>(),
                                     column_from_json(cfg.at("sunspots_column")), limit_from_json(cfg, "limit_n"));
  centre(sunspots);

  // EEG-style held-out protocol, only when a file is configured.
  const bool have_eeg = cfg.contains("eeg_csv") && !cfg["eeg_csv"].is_null();
  Dataset eeg_train, eeg_valid;
  if (have_eeg) {
    const Dataset eeg = load_series_csv(cfg["eeg_csv"].get<std::string>(), column_from_json(cfg.at("eeg_column")),
                                        limit_from_json(cfg, "eeg_limit"));
    const auto mode = cfg.value("eeg_split", std::string("Random")) == "Prefix" ? SplitMode::Prefix : SplitMode::Random;
    std::tie(eeg_train, eeg_valid) = split(eeg, cfg.at("eeg_train_fraction").get<double>(), seed, mode);
    eeg_valid.y.array() -= centre(eeg_train);
  }

  struct Job {
    std::size_t family_index;
    Objective obj;
    bool eeg;
  };
  std::vector<Job> jobs;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (!skip_ml) jobs.push_back({f, Objective::ExactML, false});
    jobs.push_back({f, Objective::VFE, false});
    jobs.push_back({f, Objective::PL, false});
    if (have_eeg) {
      jobs.push_back({f, Objective::VFE, true});
      jobs.push_back({f, Objective::PL, true});
    }
  }

  const bool normalise = cfg.value("eeg_normalise", true);
  out.cells.resize(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const Dataset& data = job.eeg ? eeg_train : sunspots;
    const auto family = families[job.family_index];
    const Eigen::Index size = job.obj == Objective::VFE ? m : job.obj == Objective::PL ? k : 0;
    const auto config = train_config(cfg, job.obj, opt, seed, size);
    const std::string label = std::string(to_string(family)) + (job.eeg ? "-eeg" : "");
    Cell cell = train_cell(label, default_init(family, data), data, config, seed);
    cell.size = size;
    if (cell.ok && job.eeg) {
      try {
        const auto& spec = cell.result.learnt_spec;
        const Predictive pred = job.obj == Objective::VFE
                                    ? predict_sparse(spec, *cell.result.learnt_inducing, data, eeg_valid.x)
                                    : predict(spec, data, eeg_valid.x);
        cell.metric = rmse(pred, eeg_valid.y, normalise);
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = std::string("prediction failed: ") + e.what();
      }
    }
    log(options, "e3 " + cell_stem(cell) + " nll=" + num(cell.exact_nll) + " rmse=" + num(cell.metric) +
                     " time=" + num(cell.result.wall_time_s));
    out.cells[j] = std::move(cell);
  });

  bool all_ok = true;
  for (const auto& c : out.cells) all_ok = all_ok && c.ok;
  out.checks.push_back({"cells_ok", all_ok, false, all_ok ? "all cells trained" : "some cells failed"});

  auto find = [&](const std::string& kernel, const std::string& method) -> const Cell* {
    for (const auto& c : out.cells)
      if (c.kernel == kernel && c.method == method) return &c;
    return nullptr;
  };

  std::ostringstream table2, table3;
  write_csv_row(table2, {"kernel", "method", "size", "exact_nll", "objective", "time_s", "iterations", "reference_nll"});
  write_csv_row(table3, {"kernel", "method", "size", "rmse", "normalised", "time_s", "iterations", "reference_rmse"});

  int wins = 0;
  std::ostringstream win_detail;
  for (auto family : families) {
    const std::string name(to_string(family));
    for (const char* method : {"ML", "VFE", "PL"}) {
      if (const Cell* c = find(name, method)) {
        const double ref = cfg["reference_sunspots"].value(name, json::object()).value(method, kNaN);
        write_csv_row(table2, {name, method, std::to_string(c->size), num(c->exact_nll),
                               c->ok ? num(c->result.final_objective) : "nan",
                               c->ok ? num(c->result.wall_time_s) : "nan", std::to_string(c->result.iterations),
                               num(ref)});
      }
      if (const Cell* c = find(name + "-eeg", method)) {
        const double ref = cfg["reference_eeg_rmse"].value(name, json::object()).value(method, kNaN);
        write_csv_row(table3, {name, method, std::to_string(c->size), num(c->metric), normalise ? "1" : "0",
                               c->ok ? num(c->result.wall_time_s) : "nan", std::to_string(c->result.iterations),
                               num(ref)});
      }
    }
    const Cell *ml = find(name, "ML"), *vfe = find(name, "VFE"), *pl = find(name, "PL");
    if (ml && vfe && pl && ml->ok && vfe->ok && pl->ok) {
      const double gap_pl = std::abs(pl->exact_nll - ml->exact_nll);
      const double gap_vfe = std::abs(vfe->exact_nll - ml->exact_nll);
      wins += gap_pl < gap_vfe ? 1 : 0;
      win_detail << name << ": |PL-ML| " << num(gap_pl) << " vs |VFE-ML| " << num(gap_vfe) << "; ";
    }
  }
  const int need = cfg.value("min_pl_wins", 3);
  win_detail << "PL closer for " << wins << " of " << families.size() << " kernels (need " << need << ")";
  out.checks.push_back({"sunspots_pl_closer", wins >= need, skip_ml,
                        skip_ml ? "ML baseline skipped" : win_detail.str()});

  if (have_eeg) {
    bool every = true;
    std::ostringstream d;
    for (auto family : families) {
      const std::string name(to_string(family));
      const Cell *vfe = find(name + "-eeg", "VFE"), *pl = find(name + "-eeg", "PL");
      const bool ok = vfe && pl && vfe->ok && pl->ok && pl->metric < vfe->metric;
      every = every && ok;
      d << name << ": PL " << (pl ? num(pl->metric) : "nan") << " vs VFE " << (vfe ? num(vfe->metric) : "nan") << "; ";
    }
    out.checks.push_back({"eeg_pl_rmse_lt_vfe", every, false, d.str()});
  } else {
    out.checks.push_back({"eeg_pl_rmse_lt_vfe", false, true, "no eeg_csv configured"});
  }

  out.summary = {{"experiment", "e3"}, {"sunspots_n", sunspots.size()}, {"pl_wins", wins}, {"eeg", have_eeg}};
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    write_text(options.out_dir / "table2_sunspots.csv", table2.str());
    if (have_eeg) write_text(options.out_dir / "table3_eeg.csv", table3.str());
  }
  write_common_outputs(options, out, started);
  return out;
}

}  // namespace plgp::experiments

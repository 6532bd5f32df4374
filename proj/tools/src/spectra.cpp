#include "runner.hpp"

#include "plgp/infoloss.hpp"
#include "plgp/io.hpp"

#include <sstream>

namespace plgp::experiments {

using json = nlohmann::json;
using namespace detail;

ExperimentResult run_spectra(const RunOptions& options) {
  const std::string started = utc_timestamp();
  ExperimentResult out;
  out.name = "spectra";
  out.config = merged_config("spectra", options);
  const json& cfg = out.config;
  const auto seed = resolve_seeds(options, cfg).front();
  const auto n = cfg.at("n").get<Eigen::Index>();
  const auto k_list = cfg.at("k_list").get<std::vector<Eigen::Index>>();
  const auto families = cfg.at("families").get<std::vector<std::string>>();
  const auto spec = kernel_from_config(cfg);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  RepulsiveOptions rep;
  rep.steps = cfg.value("repulsive_steps", rep.steps);
  rep.step_size = cfg.value("repulsive_step_size", rep.step_size);

  std::vector<SpectraReport> reports(k_list.size());
  parallel_for(k_list.size(), options.jobs, [&](std::size_t i) {
    const Eigen::Index k = k_list[i];
    std::vector<ProjectionMatrix> omegas;
    for (const auto& family : families) {
      switch (projection_kind_from_string(family)) {
        case ProjectionKind::Sphere: omegas.push_back(sphere(n, k, seed)); break;
        case ProjectionKind::Repulsive: omegas.push_back(repulsive(n, k, seed, rep)); break;
        case ProjectionKind::Localised: omegas.push_back(localised(x, k)); break;
        case ProjectionKind::OneHot: omegas.push_back(one_hot(n, k, seed)); break;
        default: throw std::invalid_argument("spectra: unsupported family '" + family + "'");
      }
    }
    reports[i] = spectra_report(spec, x, omegas, families);
    log(options, "spectra k=" + std::to_string(k) + " done");
  });

  json per_k = json::array();
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    const auto k = k_list[i];
    const auto& report = reports[i];
    const auto bounds = trace_bounds(report.gram_spectrum, k);
    const double slack = 1e-8 * report.gram_trace;

    double sphere_trace = kNaN, onehot_trace = kNaN;
    bool within = true;
    std::ostringstream bd;
    bd << "bounds [" << num(bounds.lower) << ", " << num(bounds.upper) << "]";
    json traces = json::object();
    for (const auto& p : report.projections) {
      if (p.label == "Sphere") sphere_trace = p.sigma_trace;
      if (p.label == "OneHot") onehot_trace = p.sigma_trace;
      within = within && p.sigma_trace >= bounds.lower - slack && p.sigma_trace <= bounds.upper + slack;
      bd << "; " << p.label << " " << num(p.sigma_trace);
      traces[p.label] = p.sigma_trace;
    }
    out.checks.push_back({"trace_bounds_k" + std::to_string(k), within, false, bd.str()});
    const bool both = !std::isnan(sphere_trace) && !std::isnan(onehot_trace);
    std::ostringstream od;
    od << "tr Sigma Sphere " << num(sphere_trace) << " vs OneHot " << num(onehot_trace);
    out.checks.push_back({"sphere_lt_onehot_k" + std::to_string(k), both && sphere_trace < onehot_trace, !both,
                          both ? od.str() : "Sphere or OneHot not configured"});
    per_k.push_back({{"k", k}, {"gram_trace", report.gram_trace}, {"traces", traces},
                     {"bounds", {bounds.lower, bounds.upper}}});

    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      const std::string stem = "spectra_k" + std::to_string(k);
      std::ostringstream csv;
      write_spectra_csv(csv, report);
      write_text(options.out_dir / (stem + ".csv"), csv.str());
      write_text(options.out_dir / (stem + "_summary.json"), spectra_summary_json(report).dump(2) + "\n");

      auto as_series = [](const std::string& label, const Eigen::VectorXd& v, const char* colour) {
        SvgSeries s{label, {}, {}, colour, false};
        for (Eigen::Index j = 0; j < v.size(); ++j) {
          s.x.push_back(static_cast<double>(j + 1));
          s.y.push_back(v[j]);
        }
        return s;
      };
      const char* colours[] = {"#1f77b4", "#9467bd", "#2ca02c", "#d62728", "#ff7f0e", "#8c564b"};
      std::vector<SvgSeries> series{as_series("K", report.gram_spectrum, "#000000")};
      for (std::size_t p = 0; p < report.projections.size(); ++p)
        series.push_back(as_series(report.projections[p].label, report.projections[p].sigma_spectrum,
                                   colours[p % std::size(colours)]));
      SvgAxes axes{"Eigenspectra, n = " + std::to_string(n) + ", k = " + std::to_string(k), "index",
                   "eigenvalue", false, true, {}};
      write_text(options.out_dir / ("fig1_k" + std::to_string(k) + ".svg"), svg_plot(axes, series));
    }
  }
  out.summary = {{"experiment", "spectra"}, {"n", n}, {"per_k", per_k}};
  write_common_outputs(options, out, started);
  return out;
}

}  // namespace plgp::experiments

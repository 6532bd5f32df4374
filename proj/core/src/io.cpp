#include "plgp/io.hpp"

#include "plgp/error.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace plgp {

using nlohmann::json;

json to_json(const KernelSpec& spec) {
  json params = json::object();
  const auto& names = param_names(spec.family);
  for (std::size_t i = 0; i < spec.params.size(); ++i) params[names[i]] = spec.params[i];
  return {{"family", std::string(to_string(spec.family))},
          {"params", params},
          {"noise_variance", spec.noise_variance}};
}

KernelSpec kernel_spec_from_json(const json& j) {
  KernelSpec s;
  s.family = kernel_family_from_string(j.at("family").get<std::string>());
  const auto& params = j.at("params");
  for (const auto& name : param_names(s.family)) {
    if (!params.contains(name)) {
      throw std::invalid_argument("kernel spec JSON is missing parameter '" + name + "'");
    }
    s.params.push_back(params.at(name).get<double>());
  }
  if (params.size() != s.params.size()) {
    throw std::invalid_argument("kernel spec JSON has unexpected parameters");
  }
  s.noise_variance = j.at("noise_variance").get<double>();
  s.validate();
  return s;
}

json to_json(const TrainConfig& c) {
  return {{"objective", std::string(to_string(c.objective))},
          {"optimiser", std::string(to_string(c.optimiser))},
          {"learning_rate", c.learning_rate},
          {"max_iters", c.max_iters},
          {"stop_window", c.stop_window},
          {"stop_delta", c.stop_delta},
          {"seed", c.seed},
          {"num_inducing", c.num_inducing},
          {"freeze_inducing", c.freeze_inducing},
          {"projection", std::string(to_string(c.projection))},
          {"num_projections", c.num_projections},
          {"localised_width", c.localised_width},
          {"repulsive_steps", c.repulsive.steps},
          {"repulsive_step_size", c.repulsive.step_size},
          {"max_halvings", c.max_halvings},
          {"max_step", c.max_step},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  if (j.contains("objective")) c.objective = objective_from_string(j["objective"].get<std::string>());
  if (j.contains("optimiser")) c.optimiser = optimiser_from_string(j["optimiser"].get<std::string>());
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.stop_window = j.value("stop_window", c.stop_window);
  c.stop_delta = j.value("stop_delta", c.stop_delta);
  c.seed = j.value("seed", c.seed);
  c.num_inducing = j.value("num_inducing", c.num_inducing);
  c.freeze_inducing = j.value("freeze_inducing", c.freeze_inducing);
  if (j.contains("projection")) c.projection = projection_kind_from_string(j["projection"].get<std::string>());
  c.num_projections = j.value("num_projections", c.num_projections);
  c.localised_width = j.value("localised_width", c.localised_width);
  c.repulsive.steps = j.value("repulsive_steps", c.repulsive.steps);
  c.repulsive.step_size = j.value("repulsive_step_size", c.repulsive.step_size);
  c.max_halvings = j.value("max_halvings", c.max_halvings);
  c.max_step = j.value("max_step", c.max_step);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.validate();
  return c;
}

json to_json(const TrainResult& r) {
  json j{{"learnt_spec", to_json(r.learnt_spec)},
         {"final_objective", r.final_objective},
         {"iterations", r.iterations},
         {"wall_time_s", r.wall_time_s},
         {"stop_reason", std::string(to_string(r.reason))},
         {"trace", r.trace}};
  if (r.learnt_inducing) {
    const auto& z = r.learnt_inducing->locations;
    j["learnt_inducing"] = std::vector<double>(z.data(), z.data() + z.size());
  } else {
    j["learnt_inducing"] = nullptr;
  }
  return j;
}

void write_trace_csv(std::ostream& out, const TrainResult& r) {
  out << "iter,objective,elapsed_s\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    out << i << ',' << r.trace[i] << ',' << (i < r.trace_elapsed.size() ? r.trace_elapsed[i] : 0.0)
        << '\n';
  }
}

void write_predictive_csv(std::ostream& out, const Eigen::VectorXd& x_star, const Predictive& pred) {
  out << "x_star,mean,var\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    out << x_star[i] << ',' << pred.mean[i] << ',' << pred.variance[i] << '\n';
  }
}

void write_projection_csv(std::ostream& out, const ProjectionMatrix& omega) {
  out << "kind,seed,n,k\n"
      << to_string(omega.kind()) << ',' << omega.seed() << ',' << omega.n() << ',' << omega.k()
      << '\n'
      << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index j = 0; j < omega.k(); ++j) {
    for (Eigen::Index i = 0; i < omega.n(); ++i) {
      if (i) out << ',';
      out << omega.omega()(i, j);
    }
    out << '\n';
  }
}

ProjectionMatrix read_projection_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("kind,seed,n,k", 0) != 0) {
    throw IoError("projection dump: missing 'kind,seed,n,k' header");
  }
  if (!std::getline(in, line)) throw IoError("projection dump: missing metadata line");
  std::istringstream meta(line);
  std::string kind, field;
  std::getline(meta, kind, ',');
  std::uint64_t seed = 0;
  Eigen::Index n = 0, k = 0;
  try {
    std::getline(meta, field, ',');
    seed = std::stoull(field);
    std::getline(meta, field, ',');
    n = std::stol(field);
    std::getline(meta, field, ',');
    k = std::stol(field);
  } catch (const std::exception&) {
    throw IoError("projection dump: malformed metadata line");
  }
  if (n < 1 || k < 1) throw IoError("projection dump: bad dimensions");
  Eigen::MatrixXd w(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!std::getline(in, line)) throw IoError("projection dump: truncated at column " + std::to_string(j));
    std::istringstream row(line);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::getline(row, field, ',')) throw IoError("projection dump: short column " + std::to_string(j));
      try {
        w(i, j) = std::stod(field);
      } catch (const std::exception&) {
        throw IoError("projection dump: unparsable value in column " + std::to_string(j));
      }
    }
  }
  return {std::move(w), projection_kind_from_string(kind), seed};
}

void write_spectra_csv(std::ostream& out, const SpectraReport& report) {
  out << "index,K";
  for (const auto& p : report.projections) out << ',' << p.label;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < report.gram_spectrum.size(); ++i) {
    out << i << ',' << report.gram_spectrum[i];
    for (const auto& p : report.projections) out << ',' << p.sigma_spectrum[i];
    out << '\n';
  }
}

json spectra_summary_json(const SpectraReport& report) {
  json j{{"n", report.gram_spectrum.size()}, {"gram_trace", report.gram_trace}};
  json projections = json::array();
  for (const auto& p : report.projections) {
    json hyper = json::array();
    for (const auto& h : p.hyper) {
      hyper.push_back({{"name", h.name},
                       {"fisher_full", h.fisher_full},
                       {"fisher_proj", h.fisher_proj},
                       {"delta_i", h.delta_i}});
    }
    projections.push_back({{"label", p.label},
                           {"kind", std::string(to_string(p.kind))},
                           {"k", p.k},
                           {"sigma_trace", p.sigma_trace},
                           {"hyper", hyper}});
  }
  j["projections"] = projections;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace plgp

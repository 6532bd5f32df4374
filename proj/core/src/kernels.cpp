#include "plgp/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plgp {

namespace {

void require_finite(const Eigen::VectorXd& x, const char* what) {
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SE: return "SE";
    case KernelFamily::Laplace: return "Laplace";
    case KernelFamily::RQ: return "RQ";
    case KernelFamily::LocPer: return "LocPer";
    case KernelFamily::White: return "White";
  }
  return "?";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  for (auto f : {KernelFamily::SE, KernelFamily::Laplace, KernelFamily::RQ,
                 KernelFamily::LocPer, KernelFamily::White}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

const std::vector<std::string>& param_names(KernelFamily family) {
  static const std::vector<std::string> se{"variance", "lengthscale"};
  static const std::vector<std::string> rq{"variance", "lengthscale", "alpha"};
  static const std::vector<std::string> locper{"variance", "period", "periodic_lengthscale",
                                               "decay_lengthscale"};
  static const std::vector<std::string> white{};
  switch (family) {
    case KernelFamily::SE:
    case KernelFamily::Laplace: return se;
    case KernelFamily::RQ: return rq;
    case KernelFamily::LocPer: return locper;
    case KernelFamily::White: return white;
  }
  return white;
}

std::size_t arity(KernelFamily family) { return param_names(family).size(); }

void KernelSpec::validate() const {
  if (params.size() != arity(family)) {
    throw std::invalid_argument("kernel " + std::string(to_string(family)) + " expects " +
                                std::to_string(arity(family)) + " parameters, got " +
                                std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i] > 0.0) || !std::isfinite(params[i])) {
      throw std::invalid_argument("hyperparameter '" + param_names(family)[i] +
                                  "' must be positive and finite");
    }
  }
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise_variance must be positive and finite");
  }
}

Eigen::VectorXd KernelSpec::packed() const {
  Eigen::VectorXd v(num_hyper());
  for (std::size_t i = 0; i < params.size(); ++i) v[i] = params[i];
  v[params.size()] = noise_variance;
  return v;
}

KernelSpec KernelSpec::from_packed(KernelFamily family, const Eigen::VectorXd& packed) {
  const auto a = arity(family);
  if (static_cast<std::size_t>(packed.size()) != a + 1) {
    throw std::invalid_argument("packed hyperparameter vector has wrong length");
  }
  KernelSpec s;
  s.family = family;
  s.params.assign(packed.data(), packed.data() + a);
  s.noise_variance = packed[a];
  return s;
}

Eigen::VectorXd KernelSpec::log_packed() const { return packed().array().log(); }

KernelSpec KernelSpec::from_log_packed(KernelFamily family, const Eigen::VectorXd& log_packed) {
  return from_packed(family, log_packed.array().exp());
}

KernelSpec KernelSpec::se(double variance, double lengthscale, double noise) {
  return {KernelFamily::SE, {variance, lengthscale}, noise};
}
KernelSpec KernelSpec::laplace(double variance, double lengthscale, double noise) {
  return {KernelFamily::Laplace, {variance, lengthscale}, noise};
}
KernelSpec KernelSpec::rq(double variance, double lengthscale, double alpha, double noise) {
  return {KernelFamily::RQ, {variance, lengthscale, alpha}, noise};
}
KernelSpec KernelSpec::locper(double variance, double period, double periodic_lengthscale,
                              double decay_lengthscale, double noise) {
  return {KernelFamily::LocPer, {variance, period, periodic_lengthscale, decay_lengthscale},
          noise};
}
KernelSpec KernelSpec::white(double noise) { return {KernelFamily::White, {}, noise}; }

Kernel::Kernel(const KernelSpec& spec) : family_(spec.family), p_(spec.params) {
  spec.validate();
}

double Kernel::value(double d) const {
  switch (family_) {
    case KernelFamily::SE: {
      const double l = p_[1];
      return p_[0] * std::exp(-0.5 * d * d / (l * l));
    }
    case KernelFamily::Laplace:
      return p_[0] * std::exp(-std::abs(d) / p_[1]);
    case KernelFamily::RQ: {
      const double l = p_[1], alpha = p_[2];
      return p_[0] * std::pow(1.0 + d * d / (2.0 * alpha * l * l), -alpha);
    }
    case KernelFamily::LocPer: {
      const double period = p_[1], lp = p_[2], ld = p_[3];
      const double s = std::sin(std::numbers::pi * d / period);
      return p_[0] * std::exp(-2.0 * s * s / (lp * lp) - 0.5 * d * d / (ld * ld));
    }
    case KernelFamily::White:
      return 0.0;
  }
  return 0.0;
}

void Kernel::param_gradient(double d, std::span<double> out) const {
  switch (family_) {
    case KernelFamily::SE: {
      const double l = p_[1];
      const double e = std::exp(-0.5 * d * d / (l * l));
      out[0] = e;
      out[1] = p_[0] * e * d * d / (l * l * l);
      return;
    }
    case KernelFamily::Laplace: {
      const double l = p_[1];
      const double a = std::abs(d);
      const double e = std::exp(-a / l);
      out[0] = e;
      out[1] = p_[0] * e * a / (l * l);
      return;
    }
    case KernelFamily::RQ: {
      const double l = p_[1], alpha = p_[2];
      const double r = d * d / (2.0 * alpha * l * l);
      const double u = 1.0 + r;
      const double base = std::pow(u, -alpha);
      out[0] = base;
      out[1] = p_[0] * base / u * d * d / (l * l * l);
      out[2] = p_[0] * base * (-std::log1p(r) + r / u);
      return;
    }
    case KernelFamily::LocPer: {
      const double period = p_[1], lp = p_[2], ld = p_[3];
      const double arg = std::numbers::pi * d / period;
      const double s = std::sin(arg), c = std::cos(arg);
      const double e = std::exp(-2.0 * s * s / (lp * lp) - 0.5 * d * d / (ld * ld));
      const double k = p_[0] * e;
      out[0] = e;
      out[1] = k * 4.0 * s * c * arg / (period * lp * lp);
      out[2] = k * 4.0 * s * s / (lp * lp * lp);
      out[3] = k * d * d / (ld * ld * ld);
      return;
    }
    case KernelFamily::White:
      return;
  }
}

double Kernel::lag_derivative(double d) const {
  switch (family_) {
    case KernelFamily::SE: {
      const double l2 = p_[1] * p_[1];
      return -p_[0] * std::exp(-0.5 * d * d / l2) * d / l2;
    }
    case KernelFamily::Laplace: {
      if (d == 0.0) return 0.0;
      const double l = p_[1];
      return -p_[0] * std::exp(-std::abs(d) / l) * (d > 0 ? 1.0 : -1.0) / l;
    }
    case KernelFamily::RQ: {
      const double l2 = p_[1] * p_[1], alpha = p_[2];
      const double u = 1.0 + d * d / (2.0 * alpha * l2);
      return -p_[0] * std::pow(u, -alpha - 1.0) * d / l2;
    }
    case KernelFamily::LocPer: {
      const double period = p_[1], lp = p_[2], ld = p_[3];
      const double w = std::numbers::pi / period;
      const double s = std::sin(w * d), c = std::cos(w * d);
      const double k = p_[0] * std::exp(-2.0 * s * s / (lp * lp) - 0.5 * d * d / (ld * ld));
      return k * (-4.0 * s * c * w / (lp * lp) - d / (ld * ld));
    }
    case KernelFamily::White:
      return 0.0;
  }
  return 0.0;
}

GramMatrix gram(const KernelSpec& spec, const Eigen::VectorXd& x, bool with_noise) {
  if (x.size() == 0) throw std::invalid_argument("gram: empty input");
  require_finite(x, "gram");
  const Kernel k(spec);
  const Eigen::Index n = x.size();
  GramMatrix g{Eigen::MatrixXd(n, n), with_noise};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = k.value(x[i] - x[j]);
      g.values(i, j) = v;
      g.values(j, i) = v;
    }
  }
  if (with_noise) g.values.diagonal().array() += spec.noise_variance;
  return g;
}

Eigen::MatrixXd gram_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                          std::size_t param_index) {
  require_finite(x, "gram_grad");
  if (param_index >= spec.num_hyper()) {
    throw std::invalid_argument("gram_grad: parameter index out of range");
  }
  const Eigen::Index n = x.size();
  if (param_index == spec.noise_index()) return Eigen::MatrixXd::Identity(n, n);
  const Kernel k(spec);
  std::vector<double> buf(k.arity());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      k.param_gradient(x[i] - x[j], buf);
      out(i, j) = buf[param_index];
      out(j, i) = buf[param_index];
    }
  }
  return out;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
  require_finite(a, "cross_gram");
  require_finite(b, "cross_gram");
  const Kernel k(spec);
  Eigen::MatrixXd out(a.size(), b.size());
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    for (Eigen::Index i = 0; i < a.size(); ++i) out(i, j) = k.value(a[i] - b[j]);
  }
  return out;
}

Eigen::VectorXd contract_gram_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& weights) {
  const Kernel k(spec);
  const std::size_t p = k.arity();
  const Eigen::Index n = x.size();
  std::vector<double> buf(p);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p) + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.param_gradient(0.0, buf);
    for (std::size_t q = 0; q < p; ++q) acc[q] += weights(j, j) * buf[q];
    for (Eigen::Index i = j + 1; i < n; ++i) {
      k.param_gradient(x[i] - x[j], buf);
      const double w = weights(i, j) + weights(j, i);
      for (std::size_t q = 0; q < p; ++q) acc[q] += w * buf[q];
    }
  }
  acc[static_cast<Eigen::Index>(p)] = weights.trace();
  return acc;
}

}  // namespace plgp

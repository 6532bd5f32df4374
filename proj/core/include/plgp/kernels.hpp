#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plgp {

// Stationary 1-D covariance families. White is the pure-noise model
// (k = 0 off the noise diagonal) used for the white-noise special cases.
enum class KernelFamily { SE, Laplace, RQ, LocPer, White };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Number of kernel hyperparameters, excluding the noise variance.
std::size_t arity(KernelFamily family);
const std::vector<std::string>& param_names(KernelFamily family);

/// Kernel family, positive hyperparameters and noise variance.
///
/// Parameter order per family:
///   SE, Laplace: variance, lengthscale
///   RQ:          variance, lengthscale, alpha
///   LocPer:      variance, period, periodic_lengthscale, decay_lengthscale
///   White:       (none)
///
/// Wherever a flat parameter vector is used ("packed" layout), the noise
/// variance follows the kernel parameters, so it sits at index arity().
struct KernelSpec {
  KernelFamily family = KernelFamily::SE;
  std::vector<double> params;
  double noise_variance = 1.0;

  /// Throws std::invalid_argument on arity mismatch or a non-positive value.
  void validate() const;

  std::size_t num_hyper() const { return params.size() + 1; }
  std::size_t noise_index() const { return params.size(); }

  Eigen::VectorXd packed() const;
  static KernelSpec from_packed(KernelFamily family, const Eigen::VectorXd& packed);

  Eigen::VectorXd log_packed() const;
  static KernelSpec from_log_packed(KernelFamily family, const Eigen::VectorXd& log_packed);

  static KernelSpec se(double variance, double lengthscale, double noise);
  static KernelSpec laplace(double variance, double lengthscale, double noise);
  static KernelSpec rq(double variance, double lengthscale, double alpha, double noise);
  static KernelSpec locper(double variance, double period, double periodic_lengthscale,
                           double decay_lengthscale, double noise);
  static KernelSpec white(double noise);
};

/// Evaluator for k(a, b) as a function of the lag d = a - b. Holds the
/// hyperparameters of one KernelSpec (noise excluded).
class Kernel {
 public:
  explicit Kernel(const KernelSpec& spec);

  KernelFamily family() const { return family_; }
  std::size_t arity() const { return p_.size(); }

  double value(double lag) const;
  /// Writes dk/dtheta_j for each kernel hyperparameter into out (size arity()).
  void param_gradient(double lag, std::span<double> out) const;
  /// dk/d(lag); the derivative with respect to the first input.
  double lag_derivative(double lag) const;
  /// k(x, x).
  double variance() const { return value(0.0); }

 private:
  KernelFamily family_;
  std::vector<double> p_;
};

/// K(x, x), plus noise_variance on the diagonal when with_noise is set.
struct GramMatrix {
  Eigen::MatrixXd values;
  bool includes_noise = false;
};

GramMatrix gram(const KernelSpec& spec, const Eigen::VectorXd& x, bool with_noise);

/// Elementwise derivative of gram(spec, x, true) with respect to hyperparameter
/// param_index in packed order. The noise index returns the identity.
Eigen::MatrixXd gram_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                          std::size_t param_index);

/// K(a, b) without noise.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b);

/// Sum over i,j of weights(i,j) * dk(x_i, x_j)/dtheta for every packed
/// hyperparameter, without materialising the derivative matrices. weights
/// must be symmetric. The noise entry is the trace of weights.
Eigen::VectorXd contract_gram_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& weights);

}  // namespace plgp

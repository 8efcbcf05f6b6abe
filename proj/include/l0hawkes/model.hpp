#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "l0hawkes/kernel.hpp"

namespace l0hawkes {

/// Multivariate Hawkes model with intensity
///   lambda_d(t) = mu_d + sum_i impact(d, d_i) * phi_{beta_d}(t - t_i).
/// impact(k, l) is the integrated influence of a type-l event on type k.
struct HawkesModel {
  Eigen::VectorXd mu;
  Eigen::VectorXd beta;
  Eigen::MatrixXd impact;
  KernelFamily kernel = KernelFamily::exponential();
  double epsilon = 0.01;

  std::size_t num_types() const { return static_cast<std::size_t>(mu.size()); }

  /// Throws InputError on shape mismatch or out-of-domain parameters.
  void validate() const;
};

enum class Regularizer { L0, L1, L21 };

std::string to_string(Regularizer r);
Regularizer parse_regularizer(const std::string& text);

struct Hyperparams {
  double tau = 1.0;
  double nu_a = 0.1;
  double nu_mu = 0.1;
  double nu_beta = 0.1;
  int max_iter = 500;
  double tol = 1e-6;
  Regularizer regularizer = Regularizer::L0;

  void validate() const;
};

/// Sufficient statistics of one MM iteration.
struct SuffStats {
  Eigen::MatrixXd Q;  // expected cause-effect pair counts
  Eigen::MatrixXd H;  // integrated kernel exposure per type pair
  Eigen::VectorXd n_mu, d_mu;
  Eigen::VectorXd n_beta, d_beta;
};

struct FitReport {
  std::vector<double> objective_trace;
  double final_log_likelihood = 0.0;
  std::size_t cardinality = 0;
  double aic = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||A||_{0,eps}: entries strictly greater than eps.
std::size_t epsilon_cardinality(const Eigen::MatrixXd& a, double epsilon);

/// tau = ln(gamma / (1 - gamma)) for 0.5 < gamma < 1.
double tau_from_gamma(double gamma);

}  // namespace l0hawkes

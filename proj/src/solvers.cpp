#include "l0hawkes/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l0hawkes {

double positive_quadratic_root(double n, double d, double nu) {
  if (!(n > 0.0)) return d >= 0.0 ? 0.0 : -d / nu;
  const double disc = std::sqrt(d * d + 4.0 * nu * n);
  if (d >= 0.0) return 2.0 * n / (d + disc);
  return (disc - d) / (2.0 * nu);
}

double xbar(double g, double h, double nu) {
  if (!(g > 0.0)) return 0.0;
  return 2.0 * g / (h + std::sqrt(h * h + 4.0 * nu * g));
}

double coordinate_objective(double g, double h, double nu, double x) {
  if (x <= 0.0) return g > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
  const double log_term = g > 0.0 ? g * std::log(x) : 0.0;
  return log_term - h * x - 0.5 * nu * x * x;
}

double l0_gain(double g, double h, double nu, double x_bar, double eps) {
  return g * std::log(x_bar / eps) - h * (x_bar - eps) - 0.5 * nu * (x_bar - eps) * (x_bar + eps);
}

double solve_l0_coordinate(double g, double h, double nu, double tau, double eps) {
  const double x_bar = xbar(g, h, nu);
  // Equality in the membership test resolves to "off".
  if (x_bar > eps && l0_gain(g, h, nu, x_bar, eps) > tau) return x_bar;
  return std::min(eps, x_bar);
}

Eigen::MatrixXd solve_impact_l0(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                double tau, double eps) {
  Eigen::MatrixXd a(q.rows(), q.cols());
  for (Eigen::Index k = 0; k < q.rows(); ++k)
    for (Eigen::Index l = 0; l < q.cols(); ++l) a(k, l) = solve_l0_coordinate(q(k, l), h(k, l), nu, tau, eps);
  return a;
}

Eigen::MatrixXd solve_impact_l1(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                double tau) {
  Eigen::MatrixXd a(q.rows(), q.cols());
  for (Eigen::Index k = 0; k < q.rows(); ++k)
    for (Eigen::Index l = 0; l < q.cols(); ++l) a(k, l) = positive_quadratic_root(q(k, l), tau + h(k, l), nu);
  return a;
}

Eigen::MatrixXd solve_impact_l21(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                 double tau, const L21Options& opts) {
  constexpr double kRowNormFloor = 1e-12;
  Eigen::MatrixXd a(q.rows(), q.cols());
  for (Eigen::Index k = 0; k < q.rows(); ++k)
    for (Eigen::Index l = 0; l < q.cols(); ++l) a(k, l) = xbar(q(k, l), h(k, l), nu);
  if (tau == 0.0) return a;

  Eigen::MatrixXd next(a.rows(), a.cols());
  for (int sweep = 0; sweep < opts.inner_max; ++sweep) {
    for (Eigen::Index k = 0; k < q.rows(); ++k) {
      const double r = std::max(a.row(k).norm(), kRowNormFloor);
      const double ridge = nu + tau / r;
      for (Eigen::Index l = 0; l < q.cols(); ++l) next(k, l) = positive_quadratic_root(q(k, l), h(k, l), ridge);
    }
    const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double change = (next - a).cwiseAbs().maxCoeff() / scale;
    a.swap(next);
    if (change < opts.inner_tol) break;
  }
  return a;
}

Eigen::MatrixXd solve_impact(const SuffStats& stats, const Hyperparams& hp, double eps) {
  switch (hp.regularizer) {
    case Regularizer::L0: return solve_impact_l0(stats.Q, stats.H, hp.nu_a, hp.tau, eps);
    case Regularizer::L1: return solve_impact_l1(stats.Q, stats.H, hp.nu_a, hp.tau);
    case Regularizer::L21: return solve_impact_l21(stats.Q, stats.H, hp.nu_a, hp.tau);
  }
  return {};
}

Eigen::VectorXd update_mu(const SuffStats& stats, const Hyperparams& hp) {
  Eigen::VectorXd mu(stats.n_mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) mu[k] = positive_quadratic_root(stats.n_mu[k], stats.d_mu[k], hp.nu_mu);
  return mu;
}

}  // namespace l0hawkes

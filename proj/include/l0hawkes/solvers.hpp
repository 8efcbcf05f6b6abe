#pragma once

#include <Eigen/Dense>

#include "l0hawkes/model.hpp"

namespace l0hawkes {

/// Unique nonnegative root of nu x^2 + h x - g = 0, i.e. the maximizer of
/// psi(x) = g ln x - h x - nu x^2 / 2, in cancellation-free form.
double xbar(double g, double h, double nu);

/// psi(x) = g ln x - h x - nu x^2 / 2, with psi(0) = 0 when g = 0.
double coordinate_objective(double g, double h, double nu, double x);

/// Maximizer of psi(x) - tau * I(x > eps).
double solve_l0_coordinate(double g, double h, double nu, double tau, double eps);

/// Gain psi(xbar) - psi(eps) evaluated without subtracting two large logs.
double l0_gain(double g, double h, double nu, double x_bar, double eps);

Eigen::MatrixXd solve_impact_l0(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                double tau, double eps);
Eigen::MatrixXd solve_impact_l1(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                double tau);

struct L21Options {
  double inner_tol = 1e-8;
  int inner_max = 500;
};

/// Row-reweighted fixed point for the group penalty tau * sum_k ||A_k.||_2.
Eigen::MatrixXd solve_impact_l21(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, double nu,
                                 double tau, const L21Options& opts = {});

/// Dispatches on hp.regularizer.
Eigen::MatrixXd solve_impact(const SuffStats& stats, const Hyperparams& hp, double eps);

/// Closed-form baseline update from the mu accumulators.
Eigen::VectorXd update_mu(const SuffStats& stats, const Hyperparams& hp);

/// Positive root of nu x^2 + d x - n = 0 without cancellation for either sign of d.
double positive_quadratic_root(double n, double d, double nu);

}  // namespace l0hawkes

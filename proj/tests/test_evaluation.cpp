#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "l0hawkes/error.hpp"
#include "l0hawkes/evaluation.hpp"
#include "l0hawkes/simulator.hpp"
#include "l0hawkes/solvers.hpp"

using namespace l0hawkes;
using doctest::Approx;

namespace {

Eigen::MatrixXi sparse5_truth() { return (sparse5_config(1).adjacency.array() > 0.0).cast<int>(); }

CapCurve two_point(double tp0, double tp1, double tn0, double tn1) {
  CapCurve c;
  c.axis = ThresholdAxis::Linear;
  c.raw_thresholds = c.thresholds = {0.0, 1.0};
  c.tp = {tp0, tp1};
  c.tn = {tn0, tn1};
  return c;
}

}  // namespace

TEST_CASE("TP and TN accuracy") {
  const auto truth = sparse5_truth();
  const auto perfect = tp_tn_accuracy(truth.cast<double>(), 0.5, truth);
  CHECK(*perfect.tp == 1.0);
  CHECK(*perfect.tn == 1.0);
  const auto zero = tp_tn_accuracy(Eigen::MatrixXd::Zero(5, 5), 0.01, truth);
  CHECK(*zero.tp == 0.0);
  CHECK(*zero.tn == 1.0);
  CHECK(zero.positives == 2);
  CHECK(zero.negatives == 18);
  const auto full = tp_tn_accuracy(Eigen::MatrixXd::Ones(5, 5), 0.01, truth);
  CHECK(*full.tp == 1.0);
  CHECK(*full.tn == 0.0);
  const auto diag = tp_tn_accuracy(Eigen::MatrixXd::Zero(5, 5), 0.01, truth, false);
  CHECK(diag.positives == 3);
}

TEST_CASE("undefined rates") {
  const auto acc = tp_tn_accuracy(Eigen::MatrixXd::Zero(3, 3), 0.01, Eigen::MatrixXi::Zero(3, 3));
  CHECK_FALSE(acc.tp.has_value());
  CHECK(*acc.tn == 1.0);
}

TEST_CASE("accuracy is permutation invariant") {
  const auto truth = sparse5_truth();
  Eigen::MatrixXd est = Eigen::MatrixXd::Random(5, 5).cwiseAbs();
  Eigen::PermutationMatrix<5> p;
  p.indices() << 3, 0, 4, 1, 2;
  const auto a = tp_tn_accuracy(est, 0.4, truth);
  const Eigen::MatrixXd pest = p * est * p.transpose();
  const Eigen::MatrixXi ptruth = p * truth * p.transpose();
  const auto b = tp_tn_accuracy(pest, 0.4, ptruth);
  CHECK(*a.tp == *b.tp);
  CHECK(*a.tn == *b.tn);
}

TEST_CASE("break-even") {
  auto be = break_even(two_point(1.0, 0.0, 0.0, 1.0));
  CHECK(be.accuracy == Approx(0.5));
  CHECK(be.threshold == Approx(0.5));
  CHECK(be.crossing);

  be = break_even(two_point(0.9, 0.3, 0.2, 0.8));
  CHECK(be.threshold == Approx(7.0 / 12.0));
  CHECK(be.accuracy == Approx(0.55));

  be = break_even(two_point(1.0, 1.0, 0.6, 1.0));
  CHECK(be.accuracy == Approx(1.0));
  CHECK(be.crossing);

  be = break_even(two_point(1.0, 1.0, 0.2, 0.6));
  CHECK_FALSE(be.crossing);
  CHECK(be.threshold == Approx(1.0));
  CHECK(be.accuracy == Approx(0.8));

  CapCurve gap = two_point(1.0, 0.0, 0.0, 1.0);
  gap.tp[1].reset();
  CHECK_THROWS_AS(break_even(gap), InputError);
}

TEST_CASE("several crossings pick the most accurate one") {
  CapCurve c;
  c.axis = ThresholdAxis::Linear;
  c.raw_thresholds = c.thresholds = {0.0, 1.0, 2.0, 3.0};
  c.tp = {1.0, 0.2, 0.9, 0.9};
  c.tn = {0.0, 0.8, 0.8, 1.0};
  const auto be = break_even(c);
  CHECK(be.crossing);
  CHECK(be.accuracy > 0.8);
  CHECK(be.accuracy <= 0.9);
}

TEST_CASE("CAP curve construction") {
  const auto truth = sparse5_truth();
  std::vector<CapCell> cells;
  cells.push_back({2.0, {truth.cast<double>(), Eigen::MatrixXd::Ones(5, 5)}});
  cells.push_back({0.5, {truth.cast<double>(), std::nullopt}});
  const auto curve = cap_curve(cells, {truth}, 0.5);
  CHECK(curve.axis == ThresholdAxis::Log);
  CHECK(curve.raw_thresholds == std::vector<double>{0.5, 2.0});
  CHECK(curve.thresholds[0] == Approx(std::log(0.5)));
  CHECK(*curve.tp[0] == 1.0);
  CHECK(*curve.tn[0] == 1.0);
  CHECK(*curve.tn[1] == Approx(0.5));

  cells.push_back({0.0, {truth.cast<double>(), truth.cast<double>()}});
  CHECK(cap_curve(cells, {truth}, 0.5).axis == ThresholdAxis::Linear);
}

TEST_CASE("an exactly correct fit gives break-even 1") {
  const auto truth = sparse5_truth();
  std::vector<CapCell> cells{{0.5, {truth.cast<double>()}}, {1.0, {truth.cast<double>()}}, {2.0, {truth.cast<double>()}}};
  const auto be = break_even(cap_curve(cells, {truth}, 0.1));
  CHECK(be.accuracy == 1.0);
}

TEST_CASE("TN grows with tau for a single frozen solve") {
  const auto b = gen_dense10(2);
  Eigen::MatrixXd q = Eigen::MatrixXd::Random(10, 10).cwiseAbs() * 6.0;
  const Eigen::MatrixXd h = Eigen::MatrixXd::Random(10, 10).cwiseAbs() * 20.0 + Eigen::MatrixXd::Constant(10, 10, 1.0);
  std::vector<CapCell> cells;
  for (int j = 0; j < 30; ++j) {
    const double tau = 0.1 * j;
    cells.push_back({tau, {solve_impact_l0(q, h, 1e-9, tau, 0.01)}});
  }
  const auto curve = cap_curve(cells, {b.truth}, 0.01);
  for (std::size_t j = 1; j < curve.tn.size(); ++j) CHECK(*curve.tn[j] >= *curve.tn[j - 1]);
}

TEST_CASE("sparsity report") {
  const auto zero = sparsity_report(Eigen::MatrixXd::Zero(3, 3), 0.01);
  CHECK(zero.cardinality == 0);
  CHECK(zero.max_entry == 0.0);
  CHECK(zero.pattern.isZero());
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(3, 3);
  one(1, 2) = 1.0;
  const auto r = sparsity_report(one, 0.01);
  CHECK(r.cardinality == 1);
  CHECK(r.pattern(1, 2) == 1);
  CHECK(r.max_entry == 1.0);
}

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

namespace l0hawkes {

/// A rate is nullopt when its denominator (positives or negatives) is zero.
struct Accuracy {
  std::optional<double> tp;
  std::optional<double> tn;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// Predicted positive iff estimate(k, l) > epsilon.
Accuracy tp_tn_accuracy(const Eigen::MatrixXd& estimate, double epsilon, const Eigen::MatrixXi& truth,
                        bool exclude_diagonal = true);

enum class ThresholdAxis { Log, Linear };

/// One regularization strength with the estimate from every seed; a missing
/// estimate marks a failed fit.
struct CapCell {
  double threshold;
  std::vector<std::optional<Eigen::MatrixXd>> per_seed;
};

struct CapCurve {
  ThresholdAxis axis = ThresholdAxis::Log;
  std::vector<double> raw_thresholds;  // ascending
  std::vector<double> thresholds;      // on `axis`
  std::vector<std::optional<double>> tp, tn;
  std::vector<std::vector<std::optional<double>>> tp_seed, tn_seed;  // [threshold][seed]
};

/// Seed-averaged TP/TN per threshold. `truths` holds one ground truth per
/// seed, or a single one shared by all seeds. Without an explicit axis the
/// log axis is used when every threshold is positive.
CapCurve cap_curve(std::vector<CapCell> cells, const std::vector<Eigen::MatrixXi>& truths, double epsilon,
                   bool exclude_diagonal = true, std::optional<ThresholdAxis> axis = std::nullopt);

struct BreakEven {
  double accuracy;
  double threshold;  // on the curve's axis
  bool crossing;     // false: closest approach, accuracy is the mean of tp and tn there
};

/// Intersection of the piecewise-linear TP and TN mean curves. Among several
/// crossings the most accurate wins (ties: smallest threshold).
BreakEven break_even(const CapCurve& curve);

struct SparsityReport {
  std::size_t cardinality;
  Eigen::MatrixXi pattern;
  double max_entry;
};

SparsityReport sparsity_report(const Eigen::MatrixXd& estimate, double epsilon);

}  // namespace l0hawkes

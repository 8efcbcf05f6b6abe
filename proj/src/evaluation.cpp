#include "l0hawkes/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l0hawkes/error.hpp"

namespace l0hawkes {

Accuracy tp_tn_accuracy(const Eigen::MatrixXd& estimate, double epsilon, const Eigen::MatrixXi& truth,
                        bool exclude_diagonal) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw InputError("estimate and ground truth differ in shape");
  Accuracy acc;
  std::size_t hits_pos = 0, hits_neg = 0;
  for (Eigen::Index k = 0; k < truth.rows(); ++k) {
    for (Eigen::Index l = 0; l < truth.cols(); ++l) {
      if (exclude_diagonal && k == l) continue;
      const bool predicted = estimate(k, l) > epsilon;
      if (truth(k, l) != 0) {
        ++acc.positives;
        hits_pos += predicted ? 1 : 0;
      } else {
        ++acc.negatives;
        hits_neg += predicted ? 0 : 1;
      }
    }
  }
  if (acc.positives > 0) acc.tp = static_cast<double>(hits_pos) / static_cast<double>(acc.positives);
  if (acc.negatives > 0) acc.tn = static_cast<double>(hits_neg) / static_cast<double>(acc.negatives);
  return acc;
}

namespace {

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

struct Series {
  std::vector<double> x, y;

  double at(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    if (it == x.begin()) return y.front();
    if (it == x.end()) return y.back();
    const auto j = static_cast<std::size_t>(it - x.begin());
    const double w = (t - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + w * (y[j] - y[j - 1]);
  }
};

Series valid_points(const std::vector<double>& x, const std::vector<std::optional<double>>& y) {
  Series s;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!y[j]) continue;
    // Duplicate abscissae keep the first value.
    if (!s.x.empty() && x[j] == s.x.back()) continue;
    s.x.push_back(x[j]);
    s.y.push_back(*y[j]);
  }
  return s;
}

}  // namespace

CapCurve cap_curve(std::vector<CapCell> cells, const std::vector<Eigen::MatrixXi>& truths, double epsilon,
                   bool exclude_diagonal, std::optional<ThresholdAxis> axis) {
  if (cells.size() < 2) throw InputError("a CAP curve needs at least 2 thresholds");
  if (truths.empty()) throw InputError("a CAP curve needs a ground truth");
  std::stable_sort(cells.begin(), cells.end(),
                   [](const CapCell& a, const CapCell& b) { return a.threshold < b.threshold; });
  const bool all_positive =
      std::all_of(cells.begin(), cells.end(), [](const CapCell& c) { return c.threshold > 0.0; });
  CapCurve curve;
  curve.axis = axis.value_or(all_positive ? ThresholdAxis::Log : ThresholdAxis::Linear);
  if (curve.axis == ThresholdAxis::Log && !all_positive)
    throw InputError("log threshold axis requires positive thresholds");

  for (const auto& cell : cells) {
    if (cell.per_seed.empty()) throw InputError("a CAP curve needs at least one seed");
    if (truths.size() != 1 && truths.size() != cell.per_seed.size())
      throw InputError("one ground truth per seed (or a single shared one) is required");
    std::vector<std::optional<double>> tp, tn;
    for (std::size_t s = 0; s < cell.per_seed.size(); ++s) {
      if (!cell.per_seed[s]) {
        tp.emplace_back();
        tn.emplace_back();
        continue;
      }
      const auto& truth = truths.size() == 1 ? truths.front() : truths[s];
      const Accuracy a = tp_tn_accuracy(*cell.per_seed[s], epsilon, truth, exclude_diagonal);
      tp.push_back(a.tp);
      tn.push_back(a.tn);
    }
    curve.raw_thresholds.push_back(cell.threshold);
    curve.thresholds.push_back(curve.axis == ThresholdAxis::Log ? std::log(cell.threshold) : cell.threshold);
    curve.tp.push_back(mean_of(tp));
    curve.tn.push_back(mean_of(tn));
    curve.tp_seed.push_back(std::move(tp));
    curve.tn_seed.push_back(std::move(tn));
  }
  return curve;
}

BreakEven break_even(const CapCurve& curve) {
  const Series tp = valid_points(curve.thresholds, curve.tp);
  const Series tn = valid_points(curve.thresholds, curve.tn);
  if (tp.x.size() < 2 || tn.x.size() < 2)
    throw InputError("break-even needs at least 2 defined points on both curves");
  const double lo = std::max(tp.x.front(), tn.x.front());
  const double hi = std::min(tp.x.back(), tn.x.back());
  if (!(lo < hi)) throw InputError("TP and TN curves do not overlap in threshold");

  std::vector<double> xs{lo, hi};
  for (const auto* s : {&tp, &tn})
    for (double x : s->x)
      if (x > lo && x < hi) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::optional<BreakEven> best;
  const auto offer = [&](double x, double acc) {
    if (!best || acc > best->accuracy) best = BreakEven{acc, x, true};
  };
  std::vector<double> diff(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) diff[j] = tp.at(xs[j]) - tn.at(xs[j]);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (diff[j] == 0.0) offer(xs[j], tp.at(xs[j]));
    if (j + 1 < xs.size() && diff[j] * diff[j + 1] < 0.0) {
      const double x = xs[j] + (xs[j + 1] - xs[j]) * diff[j] / (diff[j] - diff[j + 1]);
      offer(x, tp.at(x));
    }
  }
  if (best) return *best;

  std::size_t closest = 0;
  for (std::size_t j = 1; j < xs.size(); ++j)
    if (std::abs(diff[j]) < std::abs(diff[closest])) closest = j;
  const double x = xs[closest];
  return BreakEven{0.5 * (tp.at(x) + tn.at(x)), x, false};
}

SparsityReport sparsity_report(const Eigen::MatrixXd& estimate, double epsilon) {
  SparsityReport r;
  r.pattern = (estimate.array() > epsilon).cast<int>();
  r.cardinality = static_cast<std::size_t>(r.pattern.sum());
  r.max_entry = estimate.size() > 0 ? estimate.maxCoeff() : 0.0;
  return r;
}

}  // namespace l0hawkes

#include "l0hawkes/model.hpp"

#include <algorithm>
#include <cmath>

#include "l0hawkes/error.hpp"
#include "l0hawkes/triggering.hpp"

namespace l0hawkes {

void HawkesModel::validate() const {
  const auto d = mu.size();
  if (d == 0) throw InputError("model has no types");
  if (beta.size() != d || impact.rows() != d || impact.cols() != d)
    throw InputError("model shapes disagree: mu, beta and impact must all have D entries per axis");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(mu[k] >= 0.0) || !std::isfinite(mu[k])) throw InputError("mu must be finite and nonnegative");
    if (!(beta[k] > 0.0) || !std::isfinite(beta[k])) throw InputError("beta must be finite and positive");
  }
  if (!impact.allFinite() || (impact.array() < 0.0).any())
    throw InputError("impact matrix must be finite and nonnegative");
}

std::string to_string(Regularizer r) {
  switch (r) {
    case Regularizer::L0: return "l0";
    case Regularizer::L1: return "l1";
    case Regularizer::L21: return "l21";
  }
  return "l0";
}

Regularizer parse_regularizer(const std::string& text) {
  if (text == "l0") return Regularizer::L0;
  if (text == "l1") return Regularizer::L1;
  if (text == "l21") return Regularizer::L21;
  throw InputError("unknown regularizer '" + text + "' (expected l0, l1 or l21)");
}

void Hyperparams::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InputError("tau must be finite and nonnegative");
  if (!(nu_a > 0.0) || !(nu_mu > 0.0) || !(nu_beta > 0.0))
    throw InputError("ridge strengths nu_a, nu_mu, nu_beta must be positive");
  if (max_iter <= 0) throw InputError("max_iter must be positive");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
}

std::size_t epsilon_cardinality(const Eigen::MatrixXd& a, double epsilon) {
  return static_cast<std::size_t>((a.array() > epsilon).count());
}

double tau_from_gamma(double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0))
    throw InputError("gamma must lie strictly between 0.5 and 1, got " + std::to_string(gamma));
  return std::log(gamma / (1.0 - gamma));
}

void TriggeringMatrix::append_row(std::vector<TriggerEntry> entries) {
  const std::size_t n = num_events() + 1;
  double sum = 0.0;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const auto& e = entries[j];
    if (e.cause > n) throw InputError("triggering entry with cause index after its effect");
    if (j > 0 && e.cause <= entries[j - 1].cause) throw InputError("triggering row not sorted by cause");
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) throw InputError("triggering probability outside [0, 1]");
    sum += e.prob;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance)
    throw InputError("triggering row " + std::to_string(n) + " sums to " + std::to_string(sum));
  entries_.insert(entries_.end(), entries.begin(), entries.end());
  offsets_.push_back(entries_.size());
}

std::span<const TriggerEntry> TriggeringMatrix::row(std::size_t n) const {
  if (n == 0 || n > num_events()) throw std::out_of_range("triggering row out of range");
  return std::span<const TriggerEntry>(entries_).subspan(offsets_[n - 1], offsets_[n] - offsets_[n - 1]);
}

double TriggeringMatrix::at(std::size_t n, std::size_t i) const {
  const auto r = row(n);
  auto it = std::lower_bound(r.begin(), r.end(), i,
                             [](const TriggerEntry& e, std::size_t key) { return e.cause < key; });
  return (it != r.end() && it->cause == i) ? it->prob : 0.0;
}

}  // namespace l0hawkes

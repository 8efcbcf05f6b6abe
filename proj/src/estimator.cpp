#include "l0hawkes/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l0hawkes/error.hpp"
#include "l0hawkes/solvers.hpp"

namespace l0hawkes {

namespace {

using Index = Eigen::Index;

Index idx(int d) { return static_cast<Index>(d); }

}  // namespace

std::vector<std::size_t> interaction_start(const HawkesModel& model, const EventSequence& seq) {
  std::vector<std::size_t> start(seq.size(), 0);
  if (model.kernel.kind() != KernelKind::Exponential) return start;
  const auto ts = seq.timestamps();
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const double reach = kExpCutoff / model.beta[idx(seq.type(n))];
    const double earliest = ts[n - 1] - reach;
    start[n] = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(n), earliest) - ts.begin());
  }
  return start;
}

double compute_intensity(const HawkesModel& model, const EventSequence& seq, int d, double t,
                         std::size_t history_end) {
  const double beta = model.beta[idx(d)];
  double lambda = model.mu[idx(d)];
  for (std::size_t i = 0; i <= history_end && i < seq.size(); ++i)
    lambda += model.impact(idx(d), idx(seq.type(i))) * model.kernel.phi(beta, t - seq.time(i));
  return lambda;
}

std::vector<TriggerEntry> q_row(const HawkesModel& model, const EventSequence& seq, std::size_t n) {
  if (n == 0 || n >= seq.size()) throw InputError("instance index " + std::to_string(n) + " out of range 1.." + std::to_string(seq.num_events()));
  const int d = seq.type(n);
  const double beta = model.beta[idx(d)];
  std::size_t first = 0;
  if (model.kernel.kind() == KernelKind::Exponential) {
    const auto ts = seq.timestamps();
    first = static_cast<std::size_t>(
        std::lower_bound(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(n), ts[n - 1] - kExpCutoff / beta) - ts.begin());
  }
  std::vector<TriggerEntry> row;
  double lambda = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double phi = model.impact(idx(d), idx(seq.type(i))) * model.kernel.phi(beta, seq.time(n) - seq.time(i));
    if (phi > 0.0) {
      row.push_back({i, phi});
      lambda += phi;
    }
  }
  const double mu = model.mu[idx(d)];
  if (mu > 0.0) row.push_back({n, mu});
  lambda += mu;
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw NumericalError("model assigns zero (or non-finite) intensity to observed instance " + std::to_string(n));
  for (auto& e : row) e.prob /= lambda;
  return row;
}

TriggeringMatrix q_step(const HawkesModel& model, const EventSequence& seq) {
  TriggeringMatrix q;
  for (std::size_t n = 1; n < seq.size(); ++n) q.append_row(q_row(model, seq, n));
  return q;
}

double pair_integral(const HawkesModel& model, const EventSequence& seq, std::size_t n, std::size_t i) {
  const double beta = model.beta[idx(seq.type(n))];
  return model.kernel.interval_integral(beta, seq.delta(n - 1, i), seq.delta(n, i));
}

Eigen::VectorXd beta_linear_terms(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q) {
  const auto D = static_cast<Index>(model.num_types());
  Eigen::VectorXd terms = Eigen::VectorXd::Zero(D);
  const auto start = interaction_start(model, seq);
  const bool power = model.kernel.kind() == KernelKind::Power;
  const double eta = model.kernel.eta();
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const int k = seq.type(n);
    const double beta = model.beta[idx(k)];
    double acc = 0.0;
    for (const auto& e : q.row(n)) {
      if (e.cause == n) continue;
      const double lag = seq.delta(n, e.cause);
      acc += power ? (eta + 1.0) * e.prob * lag / (1.0 + beta * lag) : e.prob * lag;
    }
    for (std::size_t i = start[n]; i < n; ++i) {
      const double a = model.impact(idx(k), idx(seq.type(i)));
      if (a == 0.0) continue;
      acc += a * model.kernel.d_interval_d_beta(beta, seq.delta(n - 1, i), seq.delta(n, i));
    }
    terms[idx(k)] += acc;
  }
  return terms;
}

SuffStats accumulate_stats(const TriggeringMatrix& q, const EventSequence& seq, const HawkesModel& model) {
  const auto D = static_cast<Index>(model.num_types());
  SuffStats s;
  s.Q = Eigen::MatrixXd::Zero(D, D);
  s.H = Eigen::MatrixXd::Zero(D, D);
  s.n_mu = Eigen::VectorXd::Zero(D);
  s.d_mu = Eigen::VectorXd::Zero(D);
  s.n_beta = Eigen::VectorXd::Zero(D);
  const auto start = interaction_start(model, seq);
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const Index k = idx(seq.type(n));
    double triggered = 0.0;
    for (const auto& e : q.row(n)) {
      if (e.cause == n) {
        s.n_mu[k] += e.prob;
      } else {
        s.Q(k, idx(seq.type(e.cause))) += e.prob;
        triggered += e.prob;
      }
    }
    s.n_beta[k] += triggered;
    s.d_mu[k] += seq.delta(n, n - 1);
    for (std::size_t i = start[n]; i < n; ++i) s.H(k, idx(seq.type(i))) += pair_integral(model, seq, n, i);
  }
  s.d_beta = beta_linear_terms(model, seq, q);
  return s;
}

double base_log_likelihood(const HawkesModel& model, const EventSequence& seq) {
  const auto start = interaction_start(model, seq);
  double total = 0.0;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const int d = seq.type(n);
    const double beta = model.beta[idx(d)];
    double lambda = model.mu[idx(d)];
    double compensator = model.mu[idx(d)] * seq.delta(n, n - 1);
    for (std::size_t i = start[n]; i < n; ++i) {
      const double a = model.impact(idx(d), idx(seq.type(i)));
      if (a == 0.0) continue;
      lambda += a * model.kernel.phi(beta, seq.delta(n, i));
      compensator += a * model.kernel.interval_integral(beta, seq.delta(n - 1, i), seq.delta(n, i));
    }
    if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(lambda) - compensator;
  }
  return total;
}

double lower_bound(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q) {
  const auto start = interaction_start(model, seq);
  double total = 0.0;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const int d = seq.type(n);
    const double beta = model.beta[idx(d)];
    double term = -model.mu[idx(d)] * seq.delta(n, n - 1);
    for (const auto& e : q.row(n)) {
      if (e.prob == 0.0) continue;
      double log_phi = 0.0;
      if (e.cause == n) {
        log_phi = std::log(model.mu[idx(d)]);
      } else {
        log_phi = std::log(model.impact(idx(d), idx(seq.type(e.cause)))) +
                  model.kernel.log_phi(beta, seq.delta(n, e.cause));
      }
      term += e.prob * (log_phi - std::log(e.prob));
    }
    for (std::size_t i = start[n]; i < n; ++i) {
      const double a = model.impact(idx(d), idx(seq.type(i)));
      if (a != 0.0) term -= a * pair_integral(model, seq, n, i);
    }
    total += term;
  }
  return total;
}

double penalty(const HawkesModel& model, const Hyperparams& hp) {
  double sparsity = 0.0;
  switch (hp.regularizer) {
    case Regularizer::L0: sparsity = static_cast<double>(epsilon_cardinality(model.impact, model.epsilon)); break;
    case Regularizer::L1: sparsity = model.impact.cwiseAbs().sum(); break;
    case Regularizer::L21: sparsity = model.impact.rowwise().norm().sum(); break;
  }
  const double ridge = hp.nu_mu * model.mu.squaredNorm() + hp.nu_beta * model.beta.squaredNorm() +
                       hp.nu_a * model.impact.squaredNorm();
  return hp.tau * sparsity + 0.5 * ridge;
}

double surrogate_objective(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q,
                           const Hyperparams& hp) {
  return lower_bound(model, seq, q) - penalty(model, hp);
}

double beta_objective(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q,
                      const Hyperparams& hp, std::size_t k, double b) {
  HawkesModel probe = model;
  probe.beta[static_cast<Index>(k)] = b;
  const auto start = interaction_start(probe, seq);
  double total = -0.5 * hp.nu_beta * b * b;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    if (seq.type(n) != static_cast<int>(k)) continue;
    for (const auto& e : q.row(n)) {
      if (e.cause == n || e.prob == 0.0) continue;
      total += e.prob * model.kernel.log_phi(b, seq.delta(n, e.cause));
    }
    for (std::size_t i = start[n]; i < n; ++i) {
      const double a = model.impact(static_cast<Index>(k), idx(seq.type(i)));
      if (a != 0.0) total -= a * model.kernel.interval_integral(b, seq.delta(n - 1, i), seq.delta(n, i));
    }
  }
  return total;
}

Eigen::VectorXd update_beta(const SuffStats& stats, const HawkesModel& model, const EventSequence& seq,
                            const TriggeringMatrix& q, const Hyperparams& hp) {
  constexpr int kMaxHalvings = 40;
  Eigen::VectorXd next = model.beta;
  for (Index k = 0; k < next.size(); ++k) {
    if (!(stats.n_beta[k] > 0.0)) continue;
    const double old_beta = model.beta[k];
    const double target =
        std::clamp(positive_quadratic_root(stats.n_beta[k], stats.d_beta[k], hp.nu_beta), kBetaMin, kBetaMax);
    if (target == old_beta) continue;
    const auto kk = static_cast<std::size_t>(k);
    const double base = beta_objective(model, seq, q, hp, kk, old_beta);
    // Geometric backtracking toward the old value until the step is an ascent.
    const double log_ratio = std::log(target / old_beta);
    double step = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      const double candidate = old_beta * std::exp(step * log_ratio);
      if (beta_objective(model, seq, q, hp, kk, candidate) >= base) {
        next[k] = candidate;
        break;
      }
    }
  }
  return next;
}

double aic_from(double log_likelihood, std::size_t cardinality, std::size_t num_types) {
  const double k = static_cast<double>(cardinality + 2 * num_types);
  return 2.0 * k - 2.0 * log_likelihood;
}

double aic(const HawkesModel& model, const EventSequence& seq) {
  return aic_from(base_log_likelihood(model, seq), epsilon_cardinality(model.impact, model.epsilon),
                  model.num_types());
}

}  // namespace l0hawkes

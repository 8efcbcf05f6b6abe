#include "l0hawkes/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "l0hawkes/error.hpp"
#include "l0hawkes/solvers.hpp"

namespace l0hawkes {

HawkesModel initial_model(const EventSequence& seq, const KernelFamily& kernel, double epsilon) {
  const auto D = static_cast<Eigen::Index>(seq.num_types());
  const double span = seq.span() > 0.0 ? seq.span() : 1.0;
  const auto counts = seq.type_counts();
  HawkesModel m;
  m.kernel = kernel;
  m.epsilon = epsilon;
  m.mu.resize(D);
  for (Eigen::Index k = 0; k < D; ++k) m.mu[k] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / span;
  // A global 1/span scale is a fixed point of the beta update on bursty data, so start
  // from the burst time scale instead.
  std::vector<double> gaps;
  for (std::size_t n = 1; n <= seq.num_events(); ++n)
    if (const double g = seq.time(n) - seq.time(n - 1); g > 0.0) gaps.push_back(g);
  double beta0 = static_cast<double>(D) / span;
  if (!gaps.empty()) {
    auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    beta0 = 1.0 / *mid;
  }
  m.beta = Eigen::VectorXd::Constant(D, std::clamp(beta0, kBetaMin, kBetaMax));
  m.impact = Eigen::MatrixXd::Constant(D, D, 0.1);
  return m;
}

FitResult fit(const EventSequence& seq, const Hyperparams& hp, const KernelFamily& kernel, double epsilon,
              const std::optional<HawkesModel>& init, std::uint64_t /*seed*/, const IterationObserver& observer) {
  hp.validate();
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  HawkesModel model = init ? *init : initial_model(seq, kernel, epsilon);
  model.kernel = kernel;
  model.epsilon = epsilon;
  model.validate();
  if (model.num_types() != seq.num_types())
    throw InputError("initial model and event sequence disagree on the number of types");

  FitReport report;
  TriggeringMatrix q;
  for (int it = 0;; ++it) {
    q = q_step(model, seq);
    const double objective = surrogate_objective(model, seq, q, hp);
    report.objective_trace.push_back(objective);
    if (observer) observer(IterationInfo{it, model, q, objective});
    if (it > 0) {
      const double prev = report.objective_trace[report.objective_trace.size() - 2];
      if (std::abs(objective - prev) <= hp.tol * std::max(1.0, std::abs(prev))) {
        report.converged = true;
        break;
      }
    }
    if (it == hp.max_iter) break;

    SuffStats stats = accumulate_stats(q, seq, model);
    model.impact = solve_impact(stats, hp, epsilon);
    model.mu = update_mu(stats, hp);
    stats.d_beta = beta_linear_terms(model, seq, q);
    model.beta = update_beta(stats, model, seq, q, hp);
    report.iterations = it + 1;
  }

  report.final_log_likelihood = base_log_likelihood(model, seq);
  report.cardinality = epsilon_cardinality(model.impact, epsilon);
  report.aic = aic_from(report.final_log_likelihood, report.cardinality, model.num_types());
  return FitResult{std::move(model), std::move(q), std::move(report)};
}

}  // namespace l0hawkes

#pragma once

#include <cstddef>

#include "l0hawkes/events.hpp"
#include "l0hawkes/model.hpp"
#include "l0hawkes/triggering.hpp"

namespace l0hawkes {

/// lambda_d(t | instances 0..history_end).
double compute_intensity(const HawkesModel& model, const EventSequence& seq, int d, double t,
                         std::size_t history_end);

/// E-like step: q_{n,i} proportional to mu (i = n) or A phi (i < n).
/// Throws NumericalError naming the instance when its intensity is zero.
TriggeringMatrix q_step(const HawkesModel& model, const EventSequence& seq);

/// Recomputes row n only; matches row n of q_step.
std::vector<TriggerEntry> q_row(const HawkesModel& model, const EventSequence& seq, std::size_t n);

/// Q, H and the mu/beta accumulators. d_beta is evaluated at model.beta
/// with model.impact.
SuffStats accumulate_stats(const TriggeringMatrix& q, const EventSequence& seq, const HawkesModel& model);

/// h_{n,i} = integral of phi_{beta_{d_n}} over [t_{n-1} - t_i, t_n - t_i].
double pair_integral(const HawkesModel& model, const EventSequence& seq, std::size_t n, std::size_t i);

/// Exact log-likelihood sum_n { ln lambda(t_n) - integral of lambda over (t_{n-1}, t_n] }.
/// Returns -infinity when some observed instance has zero intensity.
double base_log_likelihood(const HawkesModel& model, const EventSequence& seq);

/// Jensen lower bound L_1(model, q); 0 ln 0 := 0.
double lower_bound(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q);

/// tau * R(A) + ridge terms, R per hp.regularizer (epsilon-cardinality for L0).
double penalty(const HawkesModel& model, const Hyperparams& hp);

/// L_1 - penalty.
double surrogate_objective(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q,
                           const Hyperparams& hp);

/// Beta-dependent part of the surrogate for type k, evaluated at beta_k = b.
double beta_objective(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q,
                      const Hyperparams& hp, std::size_t k, double b);

/// D_k^beta for every type at the model's current beta and impact.
Eigen::VectorXd beta_linear_terms(const HawkesModel& model, const EventSequence& seq, const TriggeringMatrix& q);

inline constexpr double kBetaMin = 1e-8;
inline constexpr double kBetaMax = 1e8;

/// One damped quadratic-formula step on beta; types with N_k^beta = 0 keep
/// their previous value.
Eigen::VectorXd update_beta(const SuffStats& stats, const HawkesModel& model, const EventSequence& seq,
                            const TriggeringMatrix& q, const Hyperparams& hp);

/// 2 k - 2 L_0 with k = ||A||_{0,eps} + 2 D.
double aic(const HawkesModel& model, const EventSequence& seq);
double aic_from(double log_likelihood, std::size_t cardinality, std::size_t num_types);

}  // namespace l0hawkes

namespace l0hawkes {

/// For each n (index 0 unused), the smallest cause index i whose kernel mass
/// over (t_{n-1}, t_n] is not below exp(-kExpCutoff) relative to phi(0).
/// Exponential kernels only; the power kernel's tail never vanishes, so all
/// pairs are kept there.
std::vector<std::size_t> interaction_start(const HawkesModel& model, const EventSequence& seq);

inline constexpr double kExpCutoff = 60.0;

}  // namespace l0hawkes

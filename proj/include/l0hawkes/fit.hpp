#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "l0hawkes/estimator.hpp"

namespace l0hawkes {

struct IterationInfo {
  int iteration;
  const HawkesModel& model;
  const TriggeringMatrix& q;  // tight for `model`
  double objective;           // penalized surrogate at (model, q)
};

using IterationObserver = std::function<void(const IterationInfo&)>;

struct FitResult {
  HawkesModel model;
  TriggeringMatrix q;
  FitReport report;
};

/// mu_k = count_k / (t_N - t_0), uniform impact 0.1, beta_k = 1 / (median positive gap
/// between consecutive events). Falls back to D / (t_N - t_0) when all timestamps tie.
HawkesModel initial_model(const EventSequence& seq, const KernelFamily& kernel, double epsilon);

/// Alternates q_step with the closed-form M-step until the relative change of
/// the penalized surrogate drops below hp.tol or hp.max_iter M-steps ran.
/// The seed is recorded only; the procedure itself is deterministic.
FitResult fit(const EventSequence& seq, const Hyperparams& hp, const KernelFamily& kernel, double epsilon,
              const std::optional<HawkesModel>& init = std::nullopt, std::uint64_t seed = 0,
              const IterationObserver& observer = {});

}  // namespace l0hawkes

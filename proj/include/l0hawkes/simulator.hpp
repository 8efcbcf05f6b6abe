#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "l0hawkes/events.hpp"
#include "l0hawkes/kernel.hpp"

namespace l0hawkes {

struct SimConfig {
  Eigen::VectorXd baseline;
  Eigen::MatrixXd adjacency;  // expected direct offspring of a column-type event in the row type
  Eigen::MatrixXd decays;     // per (receiver, source) decay rates
  KernelFamily kernel = KernelFamily::exponential();
  std::optional<double> horizon;
  std::optional<std::size_t> target_events;
  std::optional<std::pair<std::size_t, std::size_t>> target_band;  // defaults to +-20% of target
  std::uint64_t seed = 1;
  std::vector<std::string> type_names;  // defaults to e0..e{D-1}

  std::size_t num_types() const { return static_cast<std::size_t>(baseline.size()); }
  std::vector<std::string> resolved_type_names() const;
  std::pair<std::size_t, std::size_t> resolved_band() const;
  void validate() const;
};

/// Decays given per receiver type, broadcast across sources.
Eigen::MatrixXd broadcast_row_decays(const Eigen::VectorXd& per_row, Eigen::Index cols);

/// Largest eigenvalue modulus of a square nonnegative matrix, by power
/// iteration on A + I (same Perron vector, no periodic oscillation).
/// Throws NumericalError after 1e5 iterations without reaching 1e-10.
double spectral_radius(const Eigen::MatrixXd& adjacency);

/// (I - A)^{-1} baseline; requires spectral radius < 1.
Eigen::VectorXd stationary_rates(const Eigen::VectorXd& baseline, const Eigen::MatrixXd& adjacency);

/// Exact multivariate Hawkes sampler by Ogata thinning. Each call to next()
/// returns the next accepted event, so a path is the same prefix no matter
/// where the caller stops.
class ThinningSampler {
 public:
  explicit ThinningSampler(const SimConfig& config);

  struct Event {
    double time;
    int type;
  };

  /// nullopt once the total intensity is identically zero.
  std::optional<Event> next();

  static constexpr double kIntensityLimit = 1e12;

 private:
  double uniform();
  void advance(double t);
  double intensity(Eigen::VectorXd& per_type) const;
  void record(const Event& e);

  const SimConfig* config_;
  std::mt19937_64 rng_;
  double now_ = 0.0;
  Eigen::MatrixXd excitation_;  // exponential state, receiver x source
  std::vector<Event> history_;  // power kernel only
};

/// Samples a sequence per the horizon or target-count rule. With a target,
/// the horizon doubles until the count reaches the band's lower edge and the
/// path is cut at its upper edge.
EventSequence simulate(const SimConfig& config);

struct Benchmark {
  SimConfig config;
  EventSequence events;
  Eigen::MatrixXi truth;  // 1 where the generating adjacency is nonzero
};

SimConfig sparse5_config(std::uint64_t seed);
/// Also returns the binary mask the adjacency was drawn from.
std::pair<SimConfig, Eigen::MatrixXi> dense10_config(std::uint64_t seed);

Benchmark gen_sparse5(std::uint64_t seed);
Benchmark gen_dense10(std::uint64_t seed);

}  // namespace l0hawkes

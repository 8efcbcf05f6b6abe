#include "l0hawkes/simulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "l0hawkes/error.hpp"

namespace l0hawkes {

namespace {

using Index = Eigen::Index;

double canonical(std::mt19937_64& rng) {
  // 53 random bits, open interval (0, 1).
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::vector<std::string> SimConfig::resolved_type_names() const {
  if (!type_names.empty()) return type_names;
  std::vector<std::string> names;
  for (std::size_t d = 0; d < num_types(); ++d) names.push_back("e" + std::to_string(d));
  return names;
}

std::pair<std::size_t, std::size_t> SimConfig::resolved_band() const {
  if (target_band) return *target_band;
  const double t = static_cast<double>(target_events.value_or(0));
  return {static_cast<std::size_t>(std::ceil(0.8 * t)), static_cast<std::size_t>(std::floor(1.2 * t))};
}

void SimConfig::validate() const {
  const auto D = baseline.size();
  if (D == 0) throw InputError("simulation config has no types");
  if (adjacency.rows() != D || adjacency.cols() != D) throw InputError("adjacency must be D x D");
  if (decays.rows() != D || decays.cols() != D) throw InputError("decays must be D x D (or a D-vector)");
  if ((baseline.array() < 0.0).any() || !baseline.allFinite()) throw InputError("baseline must be nonnegative");
  if ((adjacency.array() < 0.0).any() || !adjacency.allFinite()) throw InputError("adjacency must be nonnegative");
  if (!(decays.array() > 0.0).all() || !decays.allFinite()) throw InputError("decays must be positive");
  if (!type_names.empty() && type_names.size() != static_cast<std::size_t>(D))
    throw InputError("type_names must have D entries");
  if (!horizon && !target_events) throw InputError("simulation config needs a horizon or target_events");
  if (horizon && !(*horizon > 0.0)) throw InputError("horizon must be positive");
  if (target_events) {
    if (*target_events < 2) throw InputError("target_events must be at least 2");
    const auto [lo, hi] = resolved_band();
    if (lo > hi || hi < 2) throw InputError("target band is empty");
  }
}

Eigen::MatrixXd broadcast_row_decays(const Eigen::VectorXd& per_row, Index cols) {
  return per_row.replicate(1, cols);
}

double spectral_radius(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw InputError("spectral radius needs a square matrix");
  if ((adjacency.array() < 0.0).any() || !adjacency.allFinite())
    throw InputError("spectral radius expects a finite nonnegative matrix");
  const Index n = adjacency.rows();
  if (n == 0) return 0.0;
  const Eigen::MatrixXd shifted = adjacency + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double prev = 0.0;
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd y = shifted * x;
    const double r = y.norm();
    x = y / r;
    if (it > 0 && std::abs(r - prev) <= 1e-10 * r) return std::max(0.0, r - 1.0);
    prev = r;
  }
  throw NumericalError("spectral radius power iteration did not converge");
}

Eigen::VectorXd stationary_rates(const Eigen::VectorXd& baseline, const Eigen::MatrixXd& adjacency) {
  const double rho = spectral_radius(adjacency);
  if (!(rho < 1.0)) throw NumericalError("stationary rates need spectral radius < 1");
  const Index n = adjacency.rows();
  return (Eigen::MatrixXd::Identity(n, n) - adjacency).partialPivLu().solve(baseline);
}

ThinningSampler::ThinningSampler(const SimConfig& config) : config_(&config), rng_(config.seed) {
  const auto D = static_cast<Index>(config.num_types());
  excitation_ = Eigen::MatrixXd::Zero(D, D);
}

double ThinningSampler::uniform() { return canonical(rng_); }

void ThinningSampler::advance(double t) {
  if (config_->kernel.kind() == KernelKind::Exponential)
    excitation_.array() *= (-(config_->decays.array()) * (t - now_)).exp();
  now_ = t;
}

double ThinningSampler::intensity(Eigen::VectorXd& per_type) const {
  const auto& cfg = *config_;
  if (cfg.kernel.kind() == KernelKind::Exponential) {
    per_type = cfg.baseline + excitation_.rowwise().sum();
  } else {
    per_type = cfg.baseline;
    for (const auto& e : history_) {
      const double lag = now_ - e.time;
      for (Index d = 0; d < per_type.size(); ++d) {
        const double a = cfg.adjacency(d, e.type);
        if (a != 0.0) per_type[d] += a * cfg.kernel.phi(cfg.decays(d, e.type), lag);
      }
    }
  }
  return per_type.sum();
}

void ThinningSampler::record(const Event& e) {
  const auto& cfg = *config_;
  if (cfg.kernel.kind() == KernelKind::Exponential) {
    // phi(0) = beta for the exponential density.
    excitation_.col(e.type) += cfg.adjacency.col(e.type).cwiseProduct(cfg.decays.col(e.type));
  } else {
    history_.push_back(e);
  }
}

std::optional<ThinningSampler::Event> ThinningSampler::next() {
  Eigen::VectorXd per_type;
  for (;;) {
    // Both kernel families are nonincreasing, so the current total intensity
    // bounds it until the next accepted event.
    const double bound = intensity(per_type);
    if (!(bound > 0.0)) return std::nullopt;
    if (bound > kIntensityLimit || !std::isfinite(bound)) {
      std::ostringstream msg;
      msg << "intensity bound " << bound << " exceeds " << kIntensityLimit << " at t=" << now_;
      throw NumericalError(msg.str());
    }
    advance(now_ - std::log(uniform()) / bound);
    const double total = intensity(per_type);
    if (uniform() * bound > total) continue;
    double pick = uniform() * total;
    int type = static_cast<int>(per_type.size()) - 1;
    for (Index d = 0; d < per_type.size(); ++d) {
      pick -= per_type[d];
      if (pick < 0.0) {
        type = static_cast<int>(d);
        break;
      }
    }
    const Event e{now_, type};
    record(e);
    return e;
  }
}

EventSequence simulate(const SimConfig& config) {
  config.validate();
  double rho = 0.0;
  try {
    rho = spectral_radius(config.adjacency);
  } catch (const NumericalError&) {
    rho = 1.0;
  }
  if (!config.target_events && !(rho < 1.0)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "spectral radius " << rho << " >= 1: horizon-driven simulation would be nonstationary";
    throw NumericalError(msg.str());
  }

  ThinningSampler sampler(config);
  std::vector<double> ts;
  std::vector<int> types;
  std::optional<ThinningSampler::Event> pending;
  bool exhausted = false;
  const auto run_until = [&](double horizon, std::size_t cap) {
    while (ts.size() < cap) {
      if (!pending) {
        pending = sampler.next();
        if (!pending) {
          exhausted = true;
          return;
        }
      }
      if (pending->time > horizon) return;
      ts.push_back(pending->time);
      types.push_back(pending->type);
      pending.reset();
    }
  };

  if (!config.target_events) {
    run_until(*config.horizon, std::numeric_limits<std::size_t>::max());
  } else {
    const auto [lo, hi] = config.resolved_band();
    double horizon = 0.0;
    if (config.horizon) {
      horizon = *config.horizon;
    } else {
      const double rate = rho < 1.0 ? stationary_rates(config.baseline, config.adjacency).sum() : config.baseline.sum();
      horizon = static_cast<double>(*config.target_events) / std::max(rate, 1e-300);
    }
    for (;;) {
      run_until(horizon, hi);
      if (ts.size() >= lo || exhausted) break;
      horizon *= 2.0;
    }
  }
  if (ts.size() < 2) throw NumericalError("simulation produced fewer than 2 events");
  return EventSequence(std::move(ts), std::move(types), config.resolved_type_names());
}

SimConfig sparse5_config(std::uint64_t seed) {
  SimConfig c;
  c.baseline = Eigen::VectorXd::Constant(5, 0.001);
  Eigen::VectorXd decay(5);
  decay << 0.5, 0.5, 0.1, 0.1, 0.1;
  c.decays = broadcast_row_decays(decay, 5);
  c.adjacency = Eigen::MatrixXd::Zero(5, 5);
  c.adjacency(1, 0) = 1.5;
  c.adjacency(3, 2) = 1.5;
  c.adjacency(4, 4) = 0.75;
  c.kernel = KernelFamily::exponential();
  c.target_events = 1000;
  c.target_band = std::pair<std::size_t, std::size_t>{800, 1200};
  c.seed = seed;
  return c;
}

std::pair<SimConfig, Eigen::MatrixXi> dense10_config(std::uint64_t seed) {
  constexpr Index D = 10;
  // Separate stream for the matrix so it does not share draws with the sampler.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Eigen::MatrixXi mask(D, D);
  for (Index k = 0; k < D; ++k)
    for (Index l = 0; l < D; ++l) mask(k, l) = canonical(rng) < 0.5 ? 1 : 0;
  const auto dense_row = static_cast<Index>(canonical(rng) * D);
  mask.row(dense_row).setOnes();
  Eigen::MatrixXd adjacency = mask.cast<double>();
  // Shape-1, scale-1 gamma noise is a unit exponential.
  for (Index k = 0; k < D; ++k)
    for (Index l = 0; l < D; ++l) adjacency(k, l) += -std::log(canonical(rng));
  const double rho = spectral_radius(adjacency);
  if (rho >= 0.95) adjacency *= 0.8 / rho;

  SimConfig c;
  c.baseline = Eigen::VectorXd::Ones(D);
  c.decays = Eigen::MatrixXd::Constant(D, D, 10.0);
  c.adjacency = adjacency;
  c.kernel = KernelFamily::exponential();
  c.target_events = 1100;
  c.target_band = std::pair<std::size_t, std::size_t>{900, 1300};
  c.seed = seed;
  return {c, mask};
}

Benchmark gen_sparse5(std::uint64_t seed) {
  SimConfig c = sparse5_config(seed);
  EventSequence events = simulate(c);
  Eigen::MatrixXi truth = (c.adjacency.array() > 0.0).cast<int>();
  return Benchmark{std::move(c), std::move(events), std::move(truth)};
}

Benchmark gen_dense10(std::uint64_t seed) {
  auto [c, mask] = dense10_config(seed);
  EventSequence events = simulate(c);
  return Benchmark{std::move(c), std::move(events), std::move(mask)};
}

}  // namespace l0hawkes

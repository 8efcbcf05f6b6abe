#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "l0hawkes/error.hpp"
#include "l0hawkes/estimator.hpp"
#include "l0hawkes/fit.hpp"
#include "l0hawkes/simulator.hpp"

using namespace l0hawkes;
using doctest::Approx;

namespace {

HawkesModel make_model(int D, double mu, double beta, double a, KernelFamily k = KernelFamily::exponential()) {
  HawkesModel m;
  m.mu = Eigen::VectorXd::Constant(D, mu);
  m.beta = Eigen::VectorXd::Constant(D, beta);
  m.impact = Eigen::MatrixXd::Constant(D, D, a);
  m.kernel = k;
  return m;
}

EventSequence random_sequence(std::mt19937_64& rng, int n, int D) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> ts{0.0};
  std::vector<int> types{0};
  for (int j = 1; j < n; ++j) {
    ts.push_back(ts.back() + 1.5 * u01(rng));
    types.push_back(static_cast<int>(D * u01(rng)) % D);
  }
  std::vector<std::string> names;
  for (int d = 0; d < D; ++d) names.push_back("t" + std::to_string(d));
  return EventSequence(ts, types, names);
}

HawkesModel random_model(std::mt19937_64& rng, int D, KernelFamily k) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  HawkesModel m = make_model(D, 0.0, 0.0, 0.0, k);
  for (int d = 0; d < D; ++d) {
    m.mu[d] = 0.1 + u01(rng);
    m.beta[d] = 0.2 + 2.0 * u01(rng);
    for (int l = 0; l < D; ++l) m.impact(d, l) = u01(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("intensity") {
  const EventSequence seq({0.0, 1.0, 2.0}, {0, 1, 0}, {"a", "b"});
  CHECK(compute_intensity(make_model(2, 0.3, 1.0, 0.0), seq, 1, 5.0, 2) == 0.3);

  HawkesModel m = make_model(2, 0.5, 1.0, 0.0);
  m.impact(0, 1) = 1.0;
  CHECK(compute_intensity(m, seq, 0, 1.0, 1) == Approx(1.5));

  // Contributions 0.5 and 0.25 from two past events.
  const EventSequence one({0.0, std::log(2.0), 2.0}, {0, 0, 0}, {"x"});
  HawkesModel m1 = make_model(1, 1.0, 1.0, 1.0);
  CHECK(compute_intensity(m1, one, 0, 2.0 * std::log(2.0), 1) == Approx(1.75));
}

TEST_CASE("q-step") {
  const EventSequence seq({0.0, 0.0}, {0, 0}, {"x"});
  const auto q = q_step(make_model(1, 1.0, 1.0, 1.0), seq);
  CHECK(q.at(1, 1) == Approx(0.5));
  CHECK(q.at(1, 0) == Approx(0.5));

  std::mt19937_64 rng(11);
  const auto s = random_sequence(rng, 30, 3);
  const auto q0 = q_step(make_model(3, 0.4, 1.0, 0.0), s);
  for (std::size_t n = 1; n <= s.num_events(); ++n) CHECK(q0.self_probability(n) == 1.0);

  const auto b = gen_sparse5(2);
  const auto qr = q_step(random_model(rng, 5, KernelFamily::exponential()), b.events);
  for (std::size_t n = 1; n <= b.events.num_events(); ++n) {
    double sum = 0.0;
    for (const auto& e : qr.row(n)) sum += e.prob;
    CHECK(sum == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("q_row matches the full q-step") {
  std::mt19937_64 rng(12);
  const auto s = random_sequence(rng, 40, 3);
  const auto m = random_model(rng, 3, KernelFamily::power(2.0));
  const auto q = q_step(m, s);
  for (std::size_t n : {1ul, 7ul, 39ul}) {
    for (const auto& e : q_row(m, s, n)) CHECK(e.prob == q.at(n, e.cause));
  }
}

TEST_CASE("zero intensity names the instance") {
  const EventSequence seq({0.0, 1.0}, {0, 0}, {"x"});
  try {
    q_step(make_model(1, 0.0, 1.0, 0.0), seq);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("instance 1") != std::string::npos);
  }
}

TEST_CASE("sufficient statistics") {
  std::mt19937_64 rng(13);
  const auto s = random_sequence(rng, 11, 2);
  for (const auto& k : {KernelFamily::exponential(), KernelFamily::power(2.5)}) {
    const auto m = random_model(rng, 2, k);
    const auto q = q_step(m, s);
    const auto st = accumulate_stats(q, s, m);
    CHECK(st.Q.sum() + st.n_mu.sum() == Approx(static_cast<double>(s.num_events())).epsilon(1e-12));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    for (std::size_t n = 1; n < s.size(); ++n)
      for (std::size_t i = 0; i < n; ++i)
        h(s.type(n), s.type(i)) += k.interval_integral(m.beta[s.type(n)], s.time(n - 1) - s.time(i), s.time(n) - s.time(i));
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(st.H(j) == Approx(h(j)).epsilon(1e-12));
  }

  const auto m0 = make_model(2, 0.5, 1.0, 0.0);
  const auto st0 = accumulate_stats(q_step(m0, s), s, m0);
  CHECK(st0.Q.isZero());
  const auto counts = s.type_counts();
  CHECK(st0.n_mu[0] == Approx(static_cast<double>(counts[0])));
  CHECK(st0.n_mu[1] == Approx(static_cast<double>(counts[1])));
}

TEST_CASE("log-likelihood") {
  const EventSequence seq({0.0, 1.0, 2.0}, {0, 0, 0}, {"x"});
  CHECK(base_log_likelihood(make_model(1, 1.0, 1.0, 0.0), seq) == Approx(-2.0));

  // Appending an event with tiny intensity lowers the likelihood.
  const EventSequence longer({0.0, 1.0, 2.0, 2.5}, {0, 0, 0, 1}, {"x", "y"});
  HawkesModel m = make_model(2, 1.0, 1.0, 0.0);
  m.mu[1] = 1e-9;
  const EventSequence base({0.0, 1.0, 2.0}, {0, 0, 0}, {"x", "y"});
  CHECK(base_log_likelihood(m, longer) < base_log_likelihood(m, base));
}

TEST_CASE("Jensen bound and tightness") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u01(0.01, 1.0);
  for (const auto& k : {KernelFamily::exponential(), KernelFamily::power(2.0)}) {
    const auto s = random_sequence(rng, 25, 3);
    const auto m = random_model(rng, 3, k);
    const auto qt = q_step(m, s);
    CHECK(lower_bound(m, s, qt) == Approx(base_log_likelihood(m, s)).epsilon(1e-13));
    // A different q gives a looser bound.
    const auto q_other = q_step(random_model(rng, 3, k), s);
    CHECK(lower_bound(m, s, q_other) <= base_log_likelihood(m, s) + 1e-12);
    Hyperparams hp;
    CHECK(surrogate_objective(m, s, q_other, hp) <= base_log_likelihood(m, s) - penalty(m, hp) + 1e-12);
    hp.tau = 0.0;
    hp.nu_a = hp.nu_mu = hp.nu_beta = 1e-300;
    CHECK(surrogate_objective(m, s, qt, hp) == Approx(lower_bound(m, s, qt)).epsilon(1e-14));
  }
}

TEST_CASE("beta objective tracks the surrogate") {
  std::mt19937_64 rng(15);
  for (const auto& k : {KernelFamily::exponential(), KernelFamily::power(2.0)}) {
    const auto s = random_sequence(rng, 30, 2);
    const auto m = random_model(rng, 2, k);
    const auto q = q_step(m, s);
    Hyperparams hp;
    for (std::size_t d = 0; d < 2; ++d) {
      HawkesModel moved = m;
      moved.beta[static_cast<Eigen::Index>(d)] *= 1.3;
      const double via_surrogate = surrogate_objective(moved, s, q, hp) - surrogate_objective(m, s, q, hp);
      const double via_beta = beta_objective(m, s, q, hp, d, moved.beta[static_cast<Eigen::Index>(d)]) -
                              beta_objective(m, s, q, hp, d, m.beta[static_cast<Eigen::Index>(d)]);
      CHECK(via_beta == Approx(via_surrogate).epsilon(1e-9));
    }
  }
}

TEST_CASE("beta update moves uphill") {
  std::mt19937_64 rng(16);
  const auto s = random_sequence(rng, 21, 1);
  for (double beta0 : {0.05, 0.5, 5.0, 50.0}) {
    HawkesModel m = make_model(1, 0.3, beta0, 0.6);
    const auto q = q_step(m, s);
    Hyperparams hp;
    const auto st = accumulate_stats(q, s, m);
    const double updated = update_beta(st, m, s, q, hp)[0];
    const double h = 1e-6 * beta0;
    const double grad = (beta_objective(m, s, q, hp, 0, beta0 + h) - beta_objective(m, s, q, hp, 0, beta0 - h)) / (2 * h);
    CHECK((updated - beta0) * grad > 0.0);
    CHECK(beta_objective(m, s, q, hp, 0, updated) >= beta_objective(m, s, q, hp, 0, beta0));
  }
}

TEST_CASE("beta update keeps types without offspring") {
  const EventSequence seq({0.0, 1.0, 2.0}, {0, 0, 0}, {"x", "y"});
  HawkesModel m = make_model(2, 1.0, 0.7, 0.0);
  const auto q = q_step(m, seq);
  const auto st = accumulate_stats(q, seq, m);
  const auto b = update_beta(st, m, seq, q, Hyperparams{});
  CHECK(b[1] == 0.7);
}

TEST_CASE("AIC") {
  const EventSequence seq({0.0, 1.0, 2.0}, {0, 0, 0}, {"x"});
  const auto m = make_model(1, 1.0, 1.0, 0.0);
  CHECK(aic(m, seq) == Approx(2.0 * 2.0 + 4.0));
  CHECK(aic_from(-10.0, 3, 2) > aic_from(-10.0, 2, 2));
}

TEST_CASE("fit on pure Poisson data") {
  SimConfig c;
  c.baseline = Eigen::Vector3d(0.5, 0.5, 0.5);
  c.adjacency = Eigen::Matrix3d::Zero();
  c.decays = Eigen::Matrix3d::Ones();
  c.horizon = 300.0;
  c.seed = 3;
  const auto seq = simulate(c);
  Hyperparams hp;
  hp.max_iter = 60;
  const auto r = fit(seq, hp, KernelFamily::exponential(), 0.01);
  const auto& t = r.report.objective_trace;
  for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] >= t[j - 1] - 1e-8);
  const auto st = accumulate_stats(r.q, seq, r.model);
  CHECK(st.Q.sum() + st.n_mu.sum() == Approx(static_cast<double>(seq.num_events())).epsilon(1e-12));
}

TEST_CASE("fit on Sparse5 recovers the generating support") {
  const auto b = gen_sparse5(1);
  Hyperparams hp;
  hp.tau = 1.0;
  const auto r = fit(b.events, hp, KernelFamily::exponential(), 0.2);
  CHECK(r.report.converged);
  const Eigen::MatrixXi support = (r.model.impact.array() > 0.2).cast<int>();
  CHECK(support == b.truth);
  const auto& t = r.report.objective_trace;
  for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] >= t[j - 1] - 1e-8);
  CHECK(std::isfinite(r.report.aic));
  const auto again = fit(b.events, hp, KernelFamily::exponential(), 0.2);
  CHECK(again.report.aic == r.report.aic);
  CHECK(again.model.impact == r.model.impact);
}

TEST_CASE("power kernel fit is monotone") {
  const auto b = gen_sparse5(3);
  Hyperparams hp;
  hp.max_iter = 40;
  const auto r = fit(b.events, hp, KernelFamily::power(2.0), 0.05);
  const auto& t = r.report.objective_trace;
  for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] >= t[j - 1] - 1e-8);
}

TEST_CASE("gamma and tau give the same fit") {
  const auto b = gen_sparse5(4);
  Hyperparams a, g;
  a.tau = 1.0;
  g.tau = tau_from_gamma(std::exp(1.0) / (1.0 + std::exp(1.0)));
  const auto ra = fit(b.events, a, KernelFamily::exponential(), 0.1);
  const auto rg = fit(b.events, g, KernelFamily::exponential(), 0.1);
  CHECK(ra.report.cardinality == rg.report.cardinality);
  CHECK((ra.model.impact - rg.model.impact).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("L1 fits are dense") {
  const auto b = gen_sparse5(1);
  Hyperparams hp;
  hp.regularizer = Regularizer::L1;
  hp.max_iter = 30;
  const auto r = fit(b.events, hp, KernelFamily::exponential(), 0.01);
  const double eps = 0.5 * r.model.impact.minCoeff();
  CHECK(epsilon_cardinality(r.model.impact, eps) == 25);
}

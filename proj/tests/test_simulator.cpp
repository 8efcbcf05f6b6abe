#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "l0hawkes/error.hpp"
#include "l0hawkes/simulator.hpp"

using namespace l0hawkes;
using doctest::Approx;

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(sparse5_config(1).adjacency) == Approx(0.75).epsilon(1e-8));
  CHECK(spectral_radius(Eigen::MatrixXd::Zero(3, 3)) == Approx(0.0).epsilon(1e-12));
  CHECK(spectral_radius(0.5 * Eigen::MatrixXd::Identity(4, 4)) == Approx(0.5));
  Eigen::Matrix2d a;
  a << 0.0, 0.8, 0.5, 0.0;
  CHECK(spectral_radius(a) == Approx(std::sqrt(0.4)).epsilon(1e-8));
}

TEST_CASE("stationary rates") {
  Eigen::Matrix2d a;
  a << 0.5, 0.0, 0.0, 0.0;
  const auto r = stationary_rates(Eigen::Vector2d(1.0, 2.0), a);
  CHECK(r[0] == Approx(2.0));
  CHECK(r[1] == Approx(2.0));
}

TEST_CASE("Poisson counts") {
  SimConfig c;
  c.baseline = Eigen::Vector2d(0.5, 1.5);
  c.adjacency = Eigen::Matrix2d::Zero();
  c.decays = Eigen::Matrix2d::Ones();
  c.horizon = 100.0;
  double total = 0.0;
  constexpr int seeds = 200;
  for (int s = 1; s <= seeds; ++s) {
    c.seed = static_cast<std::uint64_t>(s);
    total += static_cast<double>(simulate(c).size());
  }
  const double expected = 2.0 * 100.0;
  const double se = std::sqrt(expected / seeds);
  CHECK(std::abs(total / seeds - expected) < 3.0 * se);
}

TEST_CASE("determinism and seed sensitivity") {
  const auto a = gen_sparse5(1), b = gen_sparse5(1), c = gen_sparse5(2);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t n = 0; n < a.events.size(); ++n) {
    CHECK(a.events.time(n) == b.events.time(n));
    CHECK(a.events.type(n) == b.events.type(n));
  }
  CHECK((a.events.size() != c.events.size() || a.events.time(5) != c.events.time(5)));
}

TEST_CASE("Sparse5 benchmark") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto b = gen_sparse5(s);
    CHECK(b.events.num_events() >= 800);
    CHECK(b.events.num_events() <= 1200);
    int pos = 0, neg = 0;
    for (int k = 0; k < 5; ++k)
      for (int l = 0; l < 5; ++l)
        if (k != l) (b.truth(k, l) ? pos : neg)++;
    CHECK(pos == 2);
    CHECK(neg == 18);
    CHECK(b.truth(4, 4) == 1);
  }
}

TEST_CASE("Dense10 benchmark") {
  double ones = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto b = gen_dense10(s);
    CHECK(spectral_radius(b.config.adjacency) < 0.95);
    CHECK(b.events.num_events() >= 900);
    CHECK(b.events.num_events() <= 1300);
    CHECK(b.truth.rowwise().sum().maxCoeff() == 10);
    ones += b.truth.sum();
  }
  // About half of the mask is set, plus one dense row per draw.
  const double frac = ones / 1000.0;
  CHECK(frac > 0.45);
  CHECK(frac < 0.65);
}

TEST_CASE("unstable horizon runs are refused") {
  SimConfig c;
  c.baseline = Eigen::VectorXd::Constant(1, 1.0);
  c.adjacency = Eigen::MatrixXd::Constant(1, 1, 1.2);
  c.decays = Eigen::MatrixXd::Ones(1, 1);
  c.horizon = 10.0;
  CHECK_THROWS_AS(simulate(c), NumericalError);
}

TEST_CASE("power kernel simulation") {
  SimConfig c;
  c.baseline = Eigen::Vector2d(0.5, 0.5);
  c.adjacency = Eigen::Matrix2d::Constant(0.2);
  c.decays = Eigen::Matrix2d::Constant(2.0);
  c.kernel = KernelFamily::power(2.0);
  c.horizon = 200.0;
  const auto seq = simulate(c);
  CHECK(seq.num_events() > 100);
  for (std::size_t n = 1; n < seq.size(); ++n) CHECK(seq.time(n) >= seq.time(n - 1));
}

TEST_CASE("config validation") {
  SimConfig c;
  c.baseline = Eigen::Vector2d(0.5, -0.1);
  c.adjacency = Eigen::Matrix2d::Zero();
  c.decays = Eigen::Matrix2d::Ones();
  c.horizon = 1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.baseline[1] = 0.1;
  c.horizon.reset();
  CHECK_THROWS_AS(c.validate(), InputError);
}

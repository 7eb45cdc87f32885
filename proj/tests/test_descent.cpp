#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "landscape/construct.hpp"
#include "landscape/descent.hpp"
#include "landscape/exactcalc.hpp"

using namespace landscape;

namespace {

AffineTarget<double> unit_target() { return {1.0, 0.0, 0.0, 1.0}; }

SimConfig quick_config() {
  SimConfig config;
  config.step_size = 0.02;
  config.max_iters = 200000;
  config.stop_grad_norm = 1e-9;
  config.record_every = 1000;
  return config;
}

}  // namespace

TEST_CASE("simulation configs reject bad parameters") {
  SimConfig config;
  config.step_size = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimConfig{};
  config.step_size = -0.1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimConfig{};
  config.max_iters = -1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimConfig{};
  config.stop_grad_norm = -1e-9;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = SimConfig{};
  config.record_every = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  SimConfig{}.validate();
}

TEST_CASE("descent halts immediately at an exact critical point") {
  auto target = unit_target();
  auto net = make_relu_local_min<double>(2, target);
  TrajectoryRecord rec = run_gd(net, target, quick_config());
  CHECK(rec.converged);
  CHECK_FALSE(rec.diverged);
  CHECK(rec.iterations == 0);
  REQUIRE(rec.iterates.size() == 1);
  CHECK(rec.steps.back() == 0);
  CHECK(rec.losses.back() == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(rec.grad_norms.back() <= 1e-15);
  CHECK(rec.terminal_classification.verdict == Verdict::NonGlobalLocalMinimum);
}

TEST_CASE("descent recovers the flat level from a perturbed start") {
  auto target = unit_target();
  auto net = make_relu_local_min<double>(1, target);
  net.c += 0.05;
  TrajectoryRecord rec = run_gd(net, target, quick_config());
  CHECK(rec.converged);
  CHECK(rec.iterations > 0);
  CHECK(rec.losses.back() == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
  CHECK(rec.terminal_classification.verdict == Verdict::NonGlobalLocalMinimum);
  // losses decrease along this convex path
  for (std::size_t i = 1; i < rec.losses.size(); ++i)
    CHECK(rec.losses[i] <= rec.losses[i - 1] + 1e-15);
}

TEST_CASE("trajectories are recorded on the configured grid") {
  auto target = unit_target();
  auto net = make_relu_local_min<double>(1, target);
  net.c += 0.05;
  SimConfig config = quick_config();
  config.record_every = 7;
  TrajectoryRecord rec = run_gd(net, target, config);
  REQUIRE(!rec.steps.empty());
  CHECK(rec.steps.front() == 0);
  CHECK(rec.steps.back() == rec.iterations);
  REQUIRE(rec.iterates.size() == rec.steps.size());
  REQUIRE(rec.losses.size() == rec.steps.size());
  REQUIRE(rec.grad_norms.size() == rec.steps.size());
  for (std::size_t i = 0; i + 1 < rec.steps.size(); ++i) {
    CHECK(rec.steps[i] % 7 == 0);
    CHECK(rec.steps[i] < rec.steps[i + 1]);
  }
}

TEST_CASE("repeated runs from one start are identical") {
  auto target = unit_target();
  Network<double> net;
  net.activation = {ActivationKind::Relu, 0.0};
  net.w = {1.0, -0.8};
  net.b = {-0.3, 0.6};
  net.v = {0.5, -0.4};
  net.c = 0.1;
  SimConfig config = quick_config();
  config.max_iters = 5000;
  TrajectoryRecord a = run_gd(net, target, config);
  TrajectoryRecord b = run_gd(net, target, config);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.losses.size() == b.losses.size());
  for (std::size_t i = 0; i < a.losses.size(); ++i) {
    CHECK(a.losses[i] == b.losses[i]);
    CHECK(a.grad_norms[i] == b.grad_norms[i]);
  }
}

TEST_CASE("oversized steps are reported as divergence") {
  auto target = unit_target();
  Network<double> net;
  net.activation = {ActivationKind::Relu, 0.0};
  net.w = {1.0};
  net.b = {-0.5};
  net.v = {2.0};
  net.c = 0.0;
  SimConfig config;
  config.step_size = 1e6;
  config.max_iters = 1000;
  TrajectoryRecord rec = run_gd(net, target, config);
  CHECK(rec.diverged);
  CHECK_FALSE(rec.converged);
  CHECK(rec.iterations < 1000);
}

TEST_CASE("the loss ladder lists the reachable critical levels") {
  auto target = unit_target();
  auto relu = loss_ladder(ActivationKind::Relu, 4, target);
  REQUIRE(relu.size() == 4);
  CHECK(relu[0].label == "zero");
  CHECK(relu[0].value == 0.0);
  CHECK(relu[1].label == "n=0");
  CHECK(relu[1].value == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(relu[2].label == "n=2");
  CHECK(relu[2].value == doctest::Approx(1.0 / 972.0).epsilon(1e-14));
  CHECK(relu[3].label == "n=4");
  CHECK(relu[3].value == doctest::Approx(1.0 / 7500.0).epsilon(1e-14));
  for (const auto& bin : relu) CHECK(bin.count == 0);

  // only the hard kink has interior-knot levels
  CHECK(loss_ladder(ActivationKind::LeakyRelu, 4, target).size() == 2);
  CHECK(loss_ladder(ActivationKind::Quadratic, 4, target).size() == 2);

  AffineTarget<double> skew{-2.0, 3.0, -1.0, 2.0};
  auto scaled = loss_ladder(ActivationKind::Relu, 2, skew);
  CHECK(scaled[1].value == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(scaled[2].value == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("sweeps merge per-start results into the level histogram") {
  auto target = unit_target();
  std::vector<Network<double>> inits;
  inits.push_back(make_relu_local_min<double>(2, target));
  inits.push_back(make_relu_saddle<double>(2, target, 2));
  Network<double> nudged = make_relu_local_min<double>(2, target);
  nudged.c += 0.05;
  inits.push_back(nudged);

  SweepSummary summary = sweep(inits, target, quick_config());
  REQUIRE(summary.entries.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(summary.entries[i].index == i);
  CHECK(summary.unconverged == 0);
  CHECK(summary.entries[0].terminal_verdict == "NonGlobalLocalMinimum");
  CHECK(summary.entries[1].terminal_verdict == "Saddle");
  CHECK(summary.entries[1].terminal_loss == doctest::Approx(1.0 / 972.0));

  REQUIRE(summary.histogram.size() == 3);  // width-2 draws: zero, n=0, n=2
  CHECK(summary.histogram[1].count == 2);
  CHECK(summary.histogram[2].count == 1);
  CHECK(summary.histogram[0].count == 0);
}

TEST_CASE("an empty starting set produces an empty summary") {
  auto target = unit_target();
  SweepSummary summary = sweep(std::vector<Network<double>>{}, target, quick_config());
  CHECK(summary.entries.empty());
  CHECK(summary.histogram.empty());
  CHECK(summary.unconverged == 0);
}

TEST_CASE("seeded random sweeps are reproducible") {
  auto target = unit_target();
  RandomInitSpec spec;
  spec.width = 2;
  spec.count = 6;
  spec.scale = 0.5;
  SimConfig config = quick_config();
  config.max_iters = 20000;
  config.seed = 42;

  SweepSummary a = sweep(spec, target, config);
  SweepSummary b = sweep(spec, target, config);
  REQUIRE(a.entries.size() == 6);
  REQUIRE(b.entries.size() == 6);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].terminal_loss == b.entries[i].terminal_loss);
    CHECK(a.entries[i].iterations == b.entries[i].iterations);
    CHECK(a.entries[i].converged == b.entries[i].converged);
  }

  SweepSummary c = sweep(spec, target, quick_config());
  int total = c.unconverged;
  for (const auto& bin : c.histogram) total += bin.count;
  CHECK(total == 6);
}

TEST_CASE("random init specs reject bad parameters") {
  auto target = unit_target();
  SimConfig config = quick_config();
  RandomInitSpec spec;
  spec.width = 0;
  CHECK_THROWS_AS(sweep(spec, target, config), std::invalid_argument);
  spec = RandomInitSpec{};
  spec.count = -1;
  CHECK_THROWS_AS(sweep(spec, target, config), std::invalid_argument);
  spec = RandomInitSpec{};
  spec.scale = 0.0;
  CHECK_THROWS_AS(sweep(spec, target, config), std::invalid_argument);
}

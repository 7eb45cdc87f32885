#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "landscape/classifier.hpp"
#include "landscape/construct.hpp"
#include "landscape/exactcalc.hpp"

using namespace landscape;

namespace {

ExactScalar frac(long long n, long long d) { return ExactScalar::from_fraction(n, d); }

using ExactTarget = AffineTarget<ExactScalar>;
using ExactNet = Network<ExactScalar>;

ExactTarget unit_target() {
  return {ExactScalar(1), ExactScalar(0), ExactScalar(0), ExactScalar(1)};
}

ExactTarget skew_target() {
  return {ExactScalar(-2), ExactScalar(3), ExactScalar(-1), ExactScalar(2)};
}

ExactTarget shallow_target() {
  return {frac(1, 2), ExactScalar(0), ExactScalar(0), ExactScalar(4)};
}

std::vector<ExactTarget> all_targets() {
  return {unit_target(), skew_target(), shallow_target()};
}

bool gradient_vanishes(const ExactNet& net, const ExactTarget& target) {
  Gradient<ExactScalar> g = generalized_gradient(net, target);
  bool zero = g.dc.sign() == 0;
  for (const ExactScalar& x : g.dw) zero = zero && x.sign() == 0;
  for (const ExactScalar& x : g.db) zero = zero && x.sign() == 0;
  for (const ExactScalar& x : g.dv) zero = zero && x.sign() == 0;
  return zero;
}

// alpha^2 (t1-t0)^3 / 12, the loss of any centered flat configuration
ExactScalar flat_level(const ExactTarget& t) {
  const ExactScalar length = t.t1 - t.t0;
  return t.alpha * t.alpha * length * length * length / ExactScalar(12);
}

ExactScalar ladder_level(const ExactTarget& t, int n) {
  const long long m = n + 1;
  return flat_level(t) / ExactScalar(m * m * m * m);
}

bool nets_equal(const ExactNet& a, const ExactNet& b) {
  if (a.size() != b.size() || !(a.c == b.c)) return false;
  for (int j = 0; j < a.size(); ++j) {
    if (!(a.w[j] == b.w[j]) || !(a.b[j] == b.b[j]) || !(a.v[j] == b.v[j]))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("predicted loss levels reduce to literal fractions") {
  CHECK(predicted_loss_value(ActivationKind::Relu, unit_target(), 0) == frac(1, 12));
  CHECK(predicted_loss_value(ActivationKind::Relu, unit_target(), 2) == frac(1, 972));
  CHECK(predicted_loss_value(ActivationKind::Relu, unit_target(), 4) == frac(1, 7500));
  CHECK(predicted_loss_value(ActivationKind::Relu, unit_target(), 6) == frac(1, 28812));
  CHECK(predicted_loss_value(ActivationKind::Relu, unit_target(), 8) == frac(1, 78732));
  CHECK(predicted_loss_value(ActivationKind::Relu, skew_target(), 0) == ExactScalar(9));
  CHECK(predicted_loss_value(ActivationKind::Relu, skew_target(), 2) == frac(1, 9));
  CHECK(predicted_loss_value(ActivationKind::Quadratic, shallow_target(), 0) == frac(4, 3));
  CHECK(predicted_loss_value(ActivationKind::Relu, shallow_target(), 4) == frac(4, 1875));
}

TEST_CASE("flat local minima carry exact zero gradients on every target") {
  const std::vector<LocalMinNeuronKind> mixed = {
      LocalMinNeuronKind::Inactive, LocalMinNeuronKind::SemiInactiveLeft,
      LocalMinNeuronKind::SemiInactiveRight, LocalMinNeuronKind::Inactive,
      LocalMinNeuronKind::SemiInactiveLeft};
  for (const ExactTarget& target : all_targets()) {
    for (int N : {1, 5, 8}) {
      std::vector<LocalMinNeuronKind> menu;
      if (N >= 5) menu = mixed;
      ExactNet net = make_relu_local_min<ExactScalar>(N, target, menu);
      CHECK(gradient_vanishes(net, target));
      CHECK(loss(net, target) == flat_level(target));
    }
  }
}

TEST_CASE("breakpoint saddles sit exactly on the loss ladder") {
  for (const ExactTarget& target : all_targets()) {
    for (int n : {2, 4, 6, 8}) {
      ExactNet net = make_relu_saddle<ExactScalar>(n, target, n);
      CHECK(gradient_vanishes(net, target));
      CHECK(loss(net, target) == ladder_level(target, n));
    }
  }
  // splitting a breakpoint's outer mass and padding with fillers changes
  // nothing about the level
  ExactNet split = make_relu_saddle<ExactScalar>(8, unit_target(), 2, {3, 2});
  REQUIRE(split.size() == 8);
  CHECK(gradient_vanishes(split, unit_target()));
  CHECK(loss(split, unit_target()) == frac(1, 972));
}

TEST_CASE("every trivial saddle kind is exactly critical at the flat level") {
  const TrivialSaddleKind kinds[] = {
      TrivialSaddleKind::FlatSemiActive, TrivialSaddleKind::SemiInactiveLeftWrongSign,
      TrivialSaddleKind::SemiInactiveRightWrongSign, TrivialSaddleKind::FlatDegenerate};
  for (const ExactTarget& target : all_targets()) {
    for (TrivialSaddleKind kind : kinds) {
      ExactNet net = make_relu_trivial_saddle<ExactScalar>(2, target, kind);
      CHECK(gradient_vanishes(net, target));
      CHECK(loss(net, target) == flat_level(target));
    }
  }
}

TEST_CASE("leaky families are exactly critical for every leak and parity") {
  const ExactScalar leaks[] = {frac(1, 100), frac(1, 25), frac(1, 4)};
  for (const ExactTarget& target : all_targets()) {
    for (const ExactScalar& gamma : leaks) {
      for (int sigma : {1, -1}) {
        for (int n = 1; n <= 4; ++n) {
          auto made = make_leaky_saddle<ExactScalar>(n, target, gamma, n, sigma);
          CHECK(gradient_vanishes(made.network, target));
          const ExactScalar value = loss(made.network, target);
          CHECK(value.sign() > 0);
          CHECK(value < flat_level(target));
        }
      }
    }
  }
}

TEST_CASE("leaky losses transport across targets by the flat-level ratio") {
  const ExactScalar gamma = frac(1, 100);
  for (int sigma : {1, -1}) {
    for (int n : {1, 2, 3}) {
      auto on_unit = make_leaky_saddle<ExactScalar>(n, unit_target(), gamma, n, sigma);
      auto on_skew = make_leaky_saddle<ExactScalar>(n, skew_target(), gamma, n, sigma);
      const ExactScalar scale = flat_level(skew_target()) / flat_level(unit_target());
      CHECK(loss(on_skew.network, skew_target()) == scale * loss(on_unit.network, unit_target()));
    }
  }
  // one fully reduced literal: the single-breakpoint ascending family at
  // leak 1/100 lands on 27/484, which transports to 729/121 on the skew target
  auto unit_case = make_leaky_saddle<ExactScalar>(1, unit_target(), gamma, 1, 1);
  CHECK(loss(unit_case.network, unit_target()) == frac(27, 484));
  auto skew_case = make_leaky_saddle<ExactScalar>(1, skew_target(), gamma, 1, 1);
  CHECK(loss(skew_case.network, skew_target()) == frac(729, 121));
}

TEST_CASE("quadratic families are exactly critical and the global family is exact zero") {
  const std::vector<QuadraticSaddleKind> menu = {
      QuadraticSaddleKind::FlatShiftedBias, QuadraticSaddleKind::ZeroPreactivation,
      QuadraticSaddleKind::MidpointRoot, QuadraticSaddleKind::FlatDegenerate};
  for (const ExactTarget& target : all_targets()) {
    ExactNet saddle = make_quadratic_saddle<ExactScalar>(4, target, menu);
    CHECK(gradient_vanishes(saddle, target));
    CHECK(loss(saddle, target) == flat_level(target));

    for (int N : {2, 5}) {
      ExactNet best = make_quadratic_global_min<ExactScalar>(N, target);
      CHECK(gradient_vanishes(best, target));
      CHECK(loss(best, target).sign() == 0);
    }
  }
}

TEST_CASE("slope rescaling changes the loss by exactly alpha squared") {
  for (const ExactTarget& target : {skew_target(), shallow_target()}) {
    const ExactTarget plain{ExactScalar(1), ExactScalar(0), target.t0, target.t1};
    ExactNet net = make_relu_saddle<ExactScalar>(2, target, 2);
    ExactNet scaled = to_unit_slope(net, target);
    CHECK(loss(net, target) == target.alpha * target.alpha * loss(scaled, plain));
    CHECK(nets_equal(from_unit_slope(scaled, target), net));
  }
}

TEST_CASE("interval rescaling changes the loss by exactly the length") {
  for (const ExactTarget& target : {skew_target(), shallow_target()}) {
    const ExactScalar length = target.t1 - target.t0;
    const ExactTarget squeezed{length * target.alpha,
                               target.alpha * target.t0 + target.beta,
                               ExactScalar(0), ExactScalar(1)};
    ExactNet net = make_relu_saddle<ExactScalar>(4, target, 4);
    ExactNet moved = to_unit_interval(net, target);
    CHECK(loss(net, target) == length * loss(moved, squeezed));
    CHECK(nets_equal(from_unit_interval(moved, target), net));
  }
}

TEST_CASE("doubling leaky neurons into plain ones preserves the function exactly") {
  auto made = make_leaky_saddle<ExactScalar>(2, skew_target(), frac(1, 100), 2, 1);
  ExactNet twin = make_leaky_duplication(made.network);
  REQUIRE(twin.size() == 2 * made.network.size());
  CHECK(twin.activation.kind == ActivationKind::Relu);
  const ExactScalar samples[] = {ExactScalar(-1), frac(-1, 3), ExactScalar(0),
                                 frac(1, 2), ExactScalar(2)};
  for (const ExactScalar& x : samples) {
    CHECK(twin.evaluate(x) == made.network.evaluate(x));
  }
  CHECK(loss(twin, skew_target()) == loss(made.network, skew_target()));
}

TEST_CASE("exact classification agrees with the construction families") {
  ClassificationResult<ExactScalar> saddle =
      classify(make_relu_saddle<ExactScalar>(4, skew_target(), 4), skew_target());
  CHECK(saddle.verdict == Verdict::Saddle);
  REQUIRE(saddle.predicted_loss.has_value());
  CHECK(*saddle.predicted_loss == ladder_level(skew_target(), 4));
  CHECK(saddle.loss == ladder_level(skew_target(), 4));

  ClassificationResult<ExactScalar> flat =
      classify(make_relu_local_min<ExactScalar>(3, shallow_target()), shallow_target());
  CHECK(flat.verdict == Verdict::NonGlobalLocalMinimum);
  REQUIRE(flat.predicted_loss.has_value());
  CHECK(*flat.predicted_loss == frac(4, 3));

  ClassificationResult<ExactScalar> best =
      classify(make_quadratic_global_min<ExactScalar>(2, unit_target()), unit_target());
  CHECK(best.verdict == Verdict::GlobalMinimum);
  CHECK(best.loss.sign() == 0);
}

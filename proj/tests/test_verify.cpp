#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "landscape/classifier.hpp"
#include "landscape/construct.hpp"
#include "landscape/exactcalc.hpp"
#include "landscape/symmetric_eigen.hpp"
#include "landscape/verify.hpp"

using namespace landscape;

namespace {

AffineTarget<double> unit_target() { return {1.0, 0.0, 0.0, 1.0}; }
AffineTarget<double> skew_target() { return {-2.0, 3.0, -1.0, 2.0}; }

Matrix<double> random_symmetric(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Matrix<double> a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      const double value = unif(rng);
      a(i, j) = value;
      a(j, i) = value;
    }
  return a;
}

double inf_norm(const Matrix<double>& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < a.cols(); ++j) row += std::fabs(a(i, j));
    m = std::max(m, row);
  }
  return m;
}

// max-norm of A v - lambda v
double residual(const Matrix<double>& a, const std::vector<double>& v, double lambda) {
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    worst = std::max(worst, std::fabs(acc - lambda * v[i]));
  }
  return worst;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Network<double> apply_direction(const Network<double>& net,
                                const std::vector<double>& dir, double step) {
  Network<double> out = net;
  const int n = net.size();
  for (int j = 0; j < n; ++j) {
    out.w[j] += step * dir[j];
    out.b[j] += step * dir[n + j];
    out.v[j] += step * dir[2 * n + j];
  }
  out.c += step * dir[3 * n];
  return out;
}

void check_escape_invariants(const Network<double>& net,
                             const AffineTarget<double>& target,
                             const EscapeResult& esc, double radius) {
  REQUIRE(esc.direction.size() == static_cast<std::size_t>(3 * net.size() + 1));
  double norm = 0.0;
  for (double d : esc.direction) norm = std::max(norm, std::fabs(d));
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(esc.step > 0.0);
  CHECK(esc.step <= radius * (1.0 + 1e-9));
  CHECK(esc.loss_drop > 0.0);
  const double base = loss(net, target);
  const double moved = loss(apply_direction(net, esc.direction, esc.step), target);
  CHECK(base - moved == doctest::Approx(esc.loss_drop).epsilon(1e-9));
}

}  // namespace

TEST_CASE("spectral decomposition reconstructs random symmetric matrices") {
  for (int dim = 1; dim <= 8; ++dim) {
    for (unsigned seed = 1; seed <= 3; ++seed) {
      CAPTURE(dim);
      CAPTURE(seed);
      Matrix<double> a = random_symmetric(dim, 1000 * dim + seed);
      const double scale = std::max(1.0, inf_norm(a));
      EigenDecomposition eig = symmetric_eigen(a);
      REQUIRE(eig.values.size() == static_cast<std::size_t>(dim));
      REQUIRE(eig.vectors.size() == static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) {
        if (k > 0) CHECK(eig.values[k] >= eig.values[k - 1]);
        CHECK(residual(a, eig.vectors[k], eig.values[k]) <= 1e-10 * scale);
        for (int l = 0; l <= k; ++l) {
          const double want = (k == l) ? 1.0 : 0.0;
          CHECK(dot(eig.vectors[k], eig.vectors[l]) ==
                doctest::Approx(want).scale(1.0).epsilon(1e-10));
        }
      }
      // determinant equals the eigenvalue product
      double prod = 1.0;
      for (double v : eig.values) prod *= v;
      CHECK(determinant(a) == doctest::Approx(prod).epsilon(1e-8));
    }
  }
}

TEST_CASE("spectral decomposition handles known matrices") {
  Matrix<double> two(2, 2);
  two(0, 0) = 2.0;
  two(0, 1) = 1.0;
  two(1, 0) = 1.0;
  two(1, 1) = 2.0;
  auto eig = symmetric_eigen(two);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(std::fabs(eig.vectors[0][0]) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  Matrix<double> lone(1, 1);
  lone(0, 0) = 5.0;
  auto single = symmetric_eigen(lone);
  CHECK(single.values[0] == doctest::Approx(5.0));
  CHECK(std::fabs(single.vectors[0][0]) == doctest::Approx(1.0));

  Matrix<double> ident(4, 4);
  for (int i = 0; i < 4; ++i) ident(i, i) = 1.0;
  auto id = symmetric_eigen(ident);
  for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

  CHECK(symmetric_eigenvalues(two)[0] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("determinants use pivoting and detect singularity") {
  Matrix<double> swap(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  CHECK(determinant(swap) == doctest::Approx(-1.0));

  Matrix<double> singular(2, 2);
  singular(0, 0) = 1.0;
  singular(0, 1) = 2.0;
  singular(1, 0) = 2.0;
  singular(1, 1) = 4.0;
  CHECK(determinant(singular) == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  Matrix<double> three(3, 3);
  three(0, 0) = 2.0;
  three(0, 2) = 1.0;
  three(1, 1) = 3.0;
  three(2, 0) = 1.0;
  three(2, 2) = 2.0;
  CHECK(determinant(three) == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("quadrature reproduces exact losses through the kinks") {
  auto target = unit_target();
  auto saddle = make_relu_saddle<double>(2, target, 2);
  CHECK(quadrature_oracle(saddle, target, 64) ==
        doctest::Approx(1.0 / 972.0).epsilon(1e-13));

  // a non-critical kinked network
  Network<double> net;
  net.activation = {ActivationKind::Relu, 0.0};
  net.w = {1.3, -0.7};
  net.b = {-0.4, 0.5};
  net.v = {0.8, -1.1};
  net.c = 0.2;
  CHECK(quadrature_oracle(net, target, 256) ==
        doctest::Approx(loss(net, target)).epsilon(1e-12));

  net.activation = {ActivationKind::LeakyRelu, 0.04};
  CHECK(quadrature_oracle(net, target, 256) ==
        doctest::Approx(loss(net, target)).epsilon(1e-12));

  Network<double> quad;
  quad.activation = {ActivationKind::Quadratic, 0.0};
  quad.w = {1.1};
  quad.b = {-0.3};
  quad.v = {0.9};
  quad.c = -0.2;
  auto skew = skew_target();
  CHECK(quadrature_oracle(quad, skew, 128) ==
        doctest::Approx(loss(quad, skew)).epsilon(1e-12));

  CHECK_THROWS_AS(quadrature_oracle(net, target, 0), std::invalid_argument);
}

TEST_CASE("finite differences confirm the gradient on both sides") {
  Network<double> net;
  net.activation = {ActivationKind::Relu, 0.0};
  net.w = {1.0};
  net.b = {-0.5};
  net.v = {2.0};
  net.c = 0.0;
  auto target = unit_target();
  Gradient<double> g = generalized_gradient(net, target);
  Gradient<double> central = fd_gradient(net, target, 1e-6, FdSide::Central);
  CHECK(central.dw[0] == doctest::Approx(g.dw[0]).epsilon(1e-7));
  CHECK(central.db[0] == doctest::Approx(g.db[0]).epsilon(1e-7));
  CHECK(central.dv[0] == doctest::Approx(g.dv[0]).epsilon(1e-7));
  CHECK(central.dc == doctest::Approx(g.dc).epsilon(1e-7));

  // at a non-flat all-zero neuron only the right difference applies
  Network<double> degen;
  degen.activation = {ActivationKind::Relu, 0.0};
  degen.w = {0.0};
  degen.b = {0.0};
  degen.v = {2.0};
  degen.c = 0.0;
  auto skew = skew_target();
  Gradient<double> right = fd_gradient(degen, skew, 1e-6, FdSide::Right);
  Gradient<double> gd = generalized_gradient(degen, skew);
  CHECK(gd.dw[0] == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  CHECK(right.dw[0] == doctest::Approx(gd.dw[0]).epsilon(1e-4));
  CHECK(right.db[0] == doctest::Approx(gd.db[0]).epsilon(1e-4));

  CHECK_THROWS_AS(fd_gradient(net, target, 0.0, FdSide::Right), std::invalid_argument);
  CHECK_THROWS_AS(fd_gradient(net, target, -1e-6, FdSide::Central),
                  std::invalid_argument);
  CHECK(to_string(FdSide::Right) == "right");
  CHECK(to_string(FdSide::Central) == "central");
}

TEST_CASE("the kink-saddle probe reproduces the frozen spectrum data") {
  auto target = unit_target();
  auto net = make_relu_saddle<double>(2, target, 2);
  HessianProbeResult probe = saddle_probe(net, target);

  REQUIRE(probe.coordinates.size() == 3);
  CHECK(probe.coordinates[0] == "b1");
  CHECK(probe.coordinates[1] == "v2");
  CHECK(probe.coordinates[2] == "c");
  CHECK(probe.mu == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(probe.gamma_factor == doctest::Approx(89.0 / 96.0).epsilon(1e-12));
  REQUIRE(probe.lambdas.size() == 1);
  CHECK(probe.lambdas[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(probe.determinant == doctest::Approx(-40.0 / 6561.0).epsilon(1e-10));
  CHECK(probe.min_eigenvalue ==
        doctest::Approx(-0.010686113232227).epsilon(1e-8));
  double prod = 1.0;
  for (double v : probe.eigenvalues) prod *= v;
  CHECK(probe.determinant == doctest::Approx(prod).epsilon(1e-10));
}

TEST_CASE("probe invariants are preserved under target changes") {
  auto skew = skew_target();
  auto net = make_relu_saddle<double>(2, skew, 2);
  HessianProbeResult probe = saddle_probe(net, skew);
  CHECK(probe.mu == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(probe.gamma_factor == doctest::Approx(89.0 / 96.0).epsilon(1e-10));
  CHECK(probe.min_eigenvalue < -1e-10);
}

TEST_CASE("probe gamma factors follow the closed form as the lattice grows") {
  auto target = unit_target();
  auto gamma_form = [](int n) {
    return (32.0 * n * n - 21.0 * n + 3.0) / (16.0 * n * (2.0 * n - 1.0));
  };
  for (int n : {2, 4, 6, 8}) {
    CAPTURE(n);
    auto net = make_relu_saddle<double>(n, target, n);
    HessianProbeResult probe = saddle_probe(net, target);
    CHECK(probe.gamma_factor == doctest::Approx(gamma_form(n)).epsilon(1e-10));
    CHECK(probe.min_eigenvalue < -1e-10);
  }
  CHECK(gamma_form(2) == doctest::Approx(89.0 / 96.0));
  CHECK(gamma_form(4) == doctest::Approx(431.0 / 448.0));
  CHECK(gamma_form(6) == doctest::Approx(343.0 / 352.0));
  CHECK(gamma_form(8) == doctest::Approx(1883.0 / 1920.0));
}

TEST_CASE("probe handles breakpoints shared by several neurons") {
  auto target = unit_target();
  auto net = make_relu_saddle<double>(4, target, 2, {2, 2});
  HessianProbeResult probe = saddle_probe(net, target);
  REQUIRE(probe.coordinates.size() == 4);  // two bias coordinates + v + c
  REQUIRE(probe.lambdas.size() == 2);
  CHECK(probe.lambdas[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(probe.lambdas[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(probe.min_eigenvalue < -1e-10);
}

TEST_CASE("leaky probes choose the special coordinate blocks") {
  auto target = unit_target();
  SUBCASE("single breakpoint") {
    auto net = make_leaky_saddle<double>(1, target, 0.01, 1, 1).network;
    HessianProbeResult probe = saddle_probe(net, target);
    REQUIRE(probe.coordinates.size() == 2);
    CHECK(probe.coordinates[0] == "b1");
    CHECK(probe.coordinates[1] == "v1");
    // mu = gamma^{-1/2} / (2 (1 - sqrt(gamma) + gamma))
    CHECK(probe.mu == doctest::Approx(10.0 / (2.0 * 0.91)).epsilon(1e-12));
    CHECK(std::isnan(probe.gamma_factor));
    CHECK(probe.min_eigenvalue < -1e-10);
  }
  SUBCASE("descending two-knot shape") {
    auto net = make_leaky_saddle<double>(2, target, 0.01, 2, -1).network;
    HessianProbeResult probe = saddle_probe(net, target);
    REQUIRE(probe.coordinates.size() == 1);
    CHECK(probe.coordinates[0] == "w1");
    CHECK(std::isnan(probe.gamma_factor));
    // exact value of the lone second derivative at this leak factor
    CHECK(probe.min_eigenvalue == doctest::Approx(-0.005146907349820312).epsilon(1e-9));
  }
  SUBCASE("descending two-knot shape above the small-leak regime") {
    // at this leak factor the lemma's weight block turns positive definite,
    // so the probe widens to the full twice-differentiable block
    auto net = make_leaky_saddle<double>(2, target, 0.04, 2, -1).network;
    HessianProbeResult probe = saddle_probe(net, target);
    CHECK(probe.coordinates.size() == 7);
    CHECK(std::isnan(probe.gamma_factor));
    CHECK(probe.min_eigenvalue == doctest::Approx(-0.0219540183857).epsilon(1e-8));
  }
  SUBCASE("ascending two-knot shape uses the generic block") {
    auto net = make_leaky_saddle<double>(2, target, 0.04, 2, 1).network;
    HessianProbeResult probe = saddle_probe(net, target);
    REQUIRE(probe.coordinates.size() == 3);
    CHECK(probe.coordinates.back() == "c");
    CHECK_FALSE(std::isnan(probe.gamma_factor));
    CHECK(probe.min_eigenvalue < -1e-10);
  }
}

TEST_CASE("probe rejects configurations it cannot certify") {
  auto target = unit_target();
  CHECK_THROWS_AS(saddle_probe(make_quadratic_saddle<double>(2, target), target),
                  std::domain_error);
  CHECK_THROWS_AS(saddle_probe(make_relu_local_min<double>(2, target), target),
                  std::domain_error);

  // a lone interior kink has no following cluster for the probe block
  Network<double> half;
  half.activation = {ActivationKind::Relu, 0.0};
  half.w = {1.0};
  half.b = {-0.5};
  half.v = {2.0};
  half.c = 0.5;
  CHECK_THROWS_AS(saddle_probe(half, target), std::domain_error);

  AffineTarget<double> flat{0.0, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS(saddle_probe(half, flat), std::domain_error);
}

TEST_CASE("escape search walks the curve library at each saddle shape") {
  auto target = unit_target();
  const double radius = 0.25;

  SUBCASE("kink saddle") {
    auto net = make_relu_saddle<double>(2, target, 2);
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("flat constant-side witness") {
    auto net = make_relu_trivial_saddle<double>(2, target,
                                               TrivialSaddleKind::FlatSemiActive);
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "flat-neuron curvature direction");
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("left endpoint with the destabilizing sign") {
    auto net = make_relu_trivial_saddle<double>(
        1, target, TrivialSaddleKind::SemiInactiveLeftWrongSign);
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "left-end activation curve");
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("right endpoint with the destabilizing sign") {
    auto net = make_relu_trivial_saddle<double>(
        1, target, TrivialSaddleKind::SemiInactiveRightWrongSign);
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "right-end activation curve");
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("all-zero witness neuron") {
    auto net = make_relu_trivial_saddle<double>(1, target,
                                               TrivialSaddleKind::FlatDegenerate);
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "degenerate left curve");
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("leaky kink saddle") {
    auto net = make_leaky_saddle<double>(1, target, 0.01, 1, 1).network;
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    check_escape_invariants(net, target, *esc, radius);
  }
  SUBCASE("leaky all-zero neuron") {
    Network<double> net;
    net.activation = {ActivationKind::LeakyRelu, 0.04};
    net.w = {0.0};
    net.b = {0.0};
    net.v = {0.0};
    net.c = 0.5;
    auto esc = descent_direction_search(net, target, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "degenerate tilt curve");
    check_escape_invariants(net, target, *esc, radius);
  }
}

TEST_CASE("escape search covers the quadratic curve library") {
  auto skew = skew_target();
  const double radius = 0.25;
  SUBCASE("flat neuron with a sloped pre-activation") {
    auto net = make_quadratic_saddle<double>(1, skew,
                                             {QuadraticSaddleKind::MidpointRoot});
    auto esc = descent_direction_search(net, skew, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "quadratic root-shift curve");
    check_escape_invariants(net, skew, *esc, radius);
  }
  SUBCASE("all-zero pre-activation with live outer weight") {
    auto net = make_quadratic_saddle<double>(1, skew,
                                             {QuadraticSaddleKind::ZeroPreactivation});
    auto esc = descent_direction_search(net, skew, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "quadratic tilt curve");
    check_escape_invariants(net, skew, *esc, radius);
  }
  SUBCASE("flat neuron with constant pre-activation") {
    auto net = make_quadratic_saddle<double>(1, skew,
                                             {QuadraticSaddleKind::FlatShiftedBias});
    auto esc = descent_direction_search(net, skew, radius, 2000, 7);
    REQUIRE(esc.has_value());
    CHECK(esc->method == "quadratic flat-neuron curve");
    check_escape_invariants(net, skew, *esc, radius);
  }
  SUBCASE("all-zero neuron") {
    auto net = make_quadratic_saddle<double>(1, skew,
                                             {QuadraticSaddleKind::FlatDegenerate});
    auto esc = descent_direction_search(net, skew, radius, 2000, 7);
    REQUIRE(esc.has_value());
    check_escape_invariants(net, skew, *esc, radius);
  }
}

TEST_CASE("escape search finds descent at non-critical points") {
  auto target = unit_target();
  Network<double> net;
  net.activation = {ActivationKind::Relu, 0.0};
  net.w = {1.0};
  net.b = {-0.5};
  net.v = {2.0};
  net.c = 0.0;
  auto esc = descent_direction_search(net, target, 0.25, 2000, 11);
  REQUIRE(esc.has_value());
  check_escape_invariants(net, target, *esc, 0.25);

  CHECK_THROWS_AS(descent_direction_search(net, target, 0.0, 100),
                  std::invalid_argument);
  CHECK_THROWS_AS(descent_direction_search(net, target, 0.1, 0),
                  std::invalid_argument);
}

TEST_CASE("no lower point exists inside the margin ball of a local minimum") {
  auto target = unit_target();
  auto net = make_relu_local_min<double>(
      3, target,
      {LocalMinNeuronKind::Inactive, LocalMinNeuronKind::SemiInactiveLeft,
       LocalMinNeuronKind::SemiInactiveRight});
  const double margin = local_min_margin_radius(net, target);
  CHECK(margin == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  auto esc = descent_direction_search(net, target, margin, 5000, 3);
  CHECK_FALSE(esc.has_value());
}

TEST_CASE("margin radii come from the neuron geometry") {
  auto target = unit_target();
  auto inactive_only = make_relu_local_min<double>(1, target);
  CHECK(local_min_margin_radius(inactive_only, target) ==
        doctest::Approx(0.125).epsilon(1e-13));

  auto saddle = make_relu_saddle<double>(2, target, 2);
  CHECK_THROWS_AS(local_min_margin_radius(saddle, target), std::domain_error);

  auto leaky = make_leaky_saddle<double>(1, target, 0.01, 1, 1).network;
  CHECK_THROWS_AS(local_min_margin_radius(leaky, target), std::domain_error);
}

TEST_CASE("recurrence identities hold for the kink saddle realization") {
  auto target = unit_target();
  auto net = make_relu_saddle<double>(2, target, 2);
  PiecewiseForm<double> form = realize(net, target);
  RecurrenceReport rep = lemma_recurrence_check(form, target);
  CHECK(rep.segment_means_ok);
  CHECK(rep.recurrence_ok);
  CHECK_FALSE(rep.x_moment_zero);  // the first moment of the residual is not zero
  CHECK_FALSE(rep.alternating_sum_applicable);
  CHECK_FALSE(rep.forces_identity);
}

TEST_CASE("recurrence check recognizes the line and the center line") {
  auto target = unit_target();

  // realization equal to the target line: one segment, both moments vanish
  Network<double> line;
  line.activation = {ActivationKind::Relu, 0.0};
  line.w = {1.0};
  line.b = {1.0};
  line.v = {1.0};
  line.c = -1.0;
  RecurrenceReport rep = lemma_recurrence_check(realize(line, target), target);
  CHECK(rep.segment_means_ok);
  CHECK(rep.recurrence_ok);
  CHECK(rep.x_moment_zero);
  CHECK(rep.forces_identity);
  CHECK_FALSE(rep.alternating_sum_applicable);

  // the center line passes the mean test but not the first-moment test
  Network<double> center;
  center.activation = {ActivationKind::Relu, 0.0};
  center.w = {-1.0};
  center.b = {-0.5};
  center.v = {1.0};
  center.c = 0.5;
  RecurrenceReport flat = lemma_recurrence_check(realize(center, target), target);
  CHECK(flat.segment_means_ok);
  CHECK_FALSE(flat.x_moment_zero);
  CHECK_FALSE(flat.forces_identity);

  // an offset constant fails the segment-mean precondition
  center.c = 0.3;
  RecurrenceReport off = lemma_recurrence_check(realize(center, target), target);
  CHECK_FALSE(off.segment_means_ok);
  CHECK_FALSE(off.recurrence_ok);
}

TEST_CASE("alternating length identity activates on balanced zigzags") {
  auto target = unit_target();
  // two equal segments, slope deviations +0.4 / -0.4, means zero:
  // both moments vanish and the alternating sum of squared lengths is zero
  PiecewiseForm<double> form;
  form.knots = {0.0, 0.5, 1.0};
  form.pieces = {Polynomial<double>(-0.1, 1.4), Polynomial<double>(0.3, 0.6)};
  RecurrenceReport rep = lemma_recurrence_check(form, target);
  CHECK(rep.segment_means_ok);
  CHECK(rep.recurrence_ok);
  CHECK(rep.x_moment_zero);
  CHECK(rep.alternating_sum_applicable);
  CHECK(rep.alternating_sum_ok);

  // unequal halves with matching means break the recurrence
  PiecewiseForm<double> skewed;
  skewed.knots = {0.0, 0.25, 1.0};
  // segment means zero: offset = -dev * (u_i + u_{i+1}) / 2
  skewed.pieces = {Polynomial<double>(-0.05, 1.4), Polynomial<double>(0.25, 0.6)};
  RecurrenceReport bad = lemma_recurrence_check(skewed, target);
  CHECK(bad.segment_means_ok);
  CHECK_FALSE(bad.recurrence_ok);
}

TEST_CASE("recurrence check validates its inputs") {
  auto target = unit_target();
  Network<double> net = make_relu_saddle<double>(2, target, 2);
  PiecewiseForm<double> form = realize(net, target);

  AffineTarget<double> flat{0.0, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS(lemma_recurrence_check(form, flat), std::invalid_argument);

  PiecewiseForm<double> short_form = form;
  short_form.knots.back() = 0.9;
  CHECK_THROWS_AS(lemma_recurrence_check(short_form, target), std::invalid_argument);

  PiecewiseForm<double> ragged = form;
  ragged.pieces.pop_back();
  CHECK_THROWS_AS(lemma_recurrence_check(ragged, target), std::invalid_argument);

  PiecewiseForm<double> curved = form;
  curved.pieces[0].set_coefficient(2, 1.0);
  CHECK_THROWS_AS(lemma_recurrence_check(curved, target), std::invalid_argument);
}

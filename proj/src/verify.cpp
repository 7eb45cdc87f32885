#include "landscape/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "landscape/classifier.hpp"
#include "landscape/construct.hpp"
#include "landscape/symmetric_eigen.hpp"

namespace landscape {

namespace {

using Traits = ScalarTraits<double>;

std::vector<double> flatten(const Network<double>& net) {
  const int n = net.size();
  std::vector<double> out(3 * n + 1);
  for (int j = 0; j < n; ++j) {
    out[j] = net.w[j];
    out[n + j] = net.b[j];
    out[2 * n + j] = net.v[j];
  }
  out[3 * n] = net.c;
  return out;
}

// The same network expressed over [0, 1] against the identity-plus-nothing
// line: interval map first, then outer rescaling by the mapped slope.
struct UnitFrame {
  Network<double> net;
  AffineTarget<double> target{1.0, 0.0, 0.0, 1.0};
  AffineTarget<double> mid{1.0, 0.0, 0.0, 1.0};
};

UnitFrame to_unit_frame(const Network<double>& net, const AffineTarget<double>& target) {
  UnitFrame frame;
  frame.mid = AffineTarget<double>{target.alpha * target.length(),
                                   target.alpha * target.t0 + target.beta, 0.0, 1.0};
  frame.net = to_unit_slope(to_unit_interval(net, target), frame.mid);
  return frame;
}

Network<double> from_unit_frame(const UnitFrame& frame, const Network<double>& unit,
                                const AffineTarget<double>& target) {
  return from_unit_interval(from_unit_slope(unit, frame.mid), target);
}

}  // namespace

double quadrature_oracle(const Network<double>& net, const AffineTarget<double>& target,
                         int subdivisions) {
  net.validate();
  target.validate();
  if (subdivisions < 1)
    throw std::invalid_argument("subdivision count must be at least 1");

  const double t0 = target.t0;
  const double t1 = target.t1;
  std::vector<double> cuts{t0, t1};
  if (net.activation.kind != ActivationKind::Quadratic) {
    for (int j = 0; j < net.size(); ++j) {
      if (net.w[j] == 0.0) continue;
      const double root = -net.b[j] / net.w[j];
      if (root > t0 && root < t1) cuts.push_back(root);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Fixed 5-point Gauss-Legendre rule on [-1, 1]; exact through degree 9,
  // comfortably above the squared-residual degree on any kink-free panel.
  const double inner = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double outer = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double mid_weight = 128.0 / 225.0;
  const double inner_weight = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double outer_weight = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  const double nodes[5] = {-outer, -inner, 0.0, inner, outer};
  const double weights[5] = {outer_weight, inner_weight, mid_weight, inner_weight,
                             outer_weight};

  const double total = t1 - t0;
  Accumulator<double> acc;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    if (!(hi > lo)) continue;
    int panels = static_cast<int>(std::lround(subdivisions * (hi - lo) / total));
    panels = std::max(panels, 1);
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double center = lo + (p + 0.5) * h;
      for (int q = 0; q < 5; ++q) {
        const double x = center + 0.5 * h * nodes[q];
        const double r = net.evaluate(x) - target(x);
        acc.add(0.5 * h * weights[q] * r * r);
      }
    }
  }
  return acc.total();
}

Gradient<double> fd_gradient(const Network<double>& net, const AffineTarget<double>& target,
                             double step, FdSide side) {
  net.validate();
  target.validate();
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("finite-difference step must be positive and finite");

  const double base = loss(net, target);
  Network<double> probe = net;
  auto diff = [&](double& slot) {
    const double saved = slot;
    slot = saved + step;
    const double up = loss(probe, target);
    double out;
    if (side == FdSide::Right) {
      out = (up - base) / step;
    } else {
      slot = saved - step;
      const double down = loss(probe, target);
      out = (up - down) / (2.0 * step);
    }
    slot = saved;
    return out;
  };

  const int n = net.size();
  Gradient<double> g;
  g.dw.resize(n);
  g.db.resize(n);
  g.dv.resize(n);
  for (int j = 0; j < n; ++j) g.dw[j] = diff(probe.w[j]);
  for (int j = 0; j < n; ++j) g.db[j] = diff(probe.b[j]);
  for (int j = 0; j < n; ++j) g.dv[j] = diff(probe.v[j]);
  g.dc = diff(probe.c);
  return g;
}

HessianProbeResult saddle_probe(const Network<double>& net,
                                const AffineTarget<double>& target,
                                const Tolerances& tol) {
  net.validate();
  target.validate();
  if (net.activation.kind == ActivationKind::Quadratic)
    throw std::domain_error(
        "saddle probe requires a kinked activation with a type-2-active neuron");
  if (target.alpha == 0.0)
    throw std::domain_error("saddle probe requires a sloped target (alpha != 0)");

  const auto reports = classify_neurons(net, target, tol);
  std::vector<int> kinks;
  for (const auto& rep : reports)
    if (rep.kind == NeuronKind::Type2Active) kinks.push_back(rep.index - 1);
  if (kinks.empty())
    throw std::domain_error("saddle probe requires at least one type-2-active neuron");

  const double len = target.length();
  const double alpha = target.alpha;
  const double knot_band =
      tol.struct_rel * std::max({1.0, std::fabs(target.t0), std::fabs(target.t1)});
  const auto clusters = detail::cluster_breakpoints(net, kinks, knot_band);
  const int n = static_cast<int>(clusters.size());

  const bool relu = net.activation.kind == ActivationKind::Relu;
  const double gamma = relu ? 0.0 : net.activation.leak;
  const int sigma = Traits::sign(net.w[clusters.front().members.front()]);

  auto norm_w = [&](int j) { return net.w[j] * len; };
  auto norm_v = [&](int j) { return net.v[j] / (alpha * len); };
  auto norm_q = [&](double value) { return (value - target.t0) / len; };

  // Cluster members with the lead neuron (picked by outer-weight sign in the
  // rescaled problem) rotated to the front.
  auto lead_first = [&](const std::vector<int>& members, int want_sign) {
    std::vector<int> out = members;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (Traits::sign(norm_v(out[i])) == want_sign) {
        std::rotate(out.begin(), out.begin() + i, out.begin() + i + 1);
        break;
      }
    }
    return out;
  };

  HessianProbeResult res;
  std::vector<Coordinate> coords;
  double mu = 0.0;
  double gamma_factor = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> lam_members;

  if (!relu && n == 1) {
    // Single cluster: every bias direction plus the lead outer weight.
    lam_members = lead_first(clusters.front().members, sigma);
    for (int j : lam_members) coords.push_back(Coordinate::b(j));
    coords.push_back(Coordinate::v(lam_members.front()));
    const double root_gamma = std::sqrt(gamma);
    mu = (1.0 / root_gamma) / (2.0 * (1.0 - root_gamma + gamma));
  } else if (!relu && n == 2 && sigma == -1) {
    // Descending two-knot shape: weight directions of the first cluster.
    lam_members = lead_first(clusters.front().members, -1);
    for (int j : lam_members) coords.push_back(Coordinate::w(j));
    const double q1 = norm_q(clusters.front().value);
    const double q1_cubed = q1 * q1 * q1;
    mu = 1.5 / (q1_cubed + gamma * gamma * (1.0 - q1_cubed));
  } else {
    // Bias block of the positive-weight cluster, the outer weight of the
    // next cluster's first neuron, and the output offset.
    const int tau = relu ? 1 : (3 - sigma) / 2;
    if (tau + 1 > n)
      throw std::domain_error(
          "saddle probe needs a breakpoint cluster after the positive-weight group");
    lam_members = lead_first(clusters[tau - 1].members, 1);
    const int k = clusters[tau].members.front();
    for (int j : lam_members) coords.push_back(Coordinate::b(j));
    coords.push_back(Coordinate::v(k));
    coords.push_back(Coordinate::c());

    const double q_front = norm_q(clusters[tau - 1].value);
    const double q_next = norm_q(clusters[tau].value);
    mu = 0.5 / (1.0 - (1.0 - gamma * gamma) * q_front);
    const double gap = q_next - q_front;
    const double u_v =
        mu * norm_w(k) * (gamma * (1.0 - 2.0 * q_next) - (1.0 - gamma) * gap * gap);
    const double u_c = mu * 2.0 * (1.0 - (1.0 - gamma) * q_front);

    const UnitFrame frame = to_unit_frame(net, target);
    const Matrix<double> block = restricted_hessian(
        frame.net, frame.target, {Coordinate::v(k), Coordinate::c()}, tol);
    const double det_block = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    const double inv_quad = (u_v * (block(1, 1) * u_v - block(0, 1) * u_c) +
                             u_c * (block(0, 0) * u_c - block(1, 0) * u_v)) /
                            det_block;
    gamma_factor = inv_quad / mu;
  }

  double mass = 0.0;
  for (int j : lam_members) mass += norm_v(j) * norm_w(j);
  res.lambdas.reserve(lam_members.size());
  for (int j : lam_members) res.lambdas.push_back(norm_v(j) * norm_w(j) / mass);

  Matrix<double> hess = restricted_hessian(net, target, coords, tol);
  EigenDecomposition eig = symmetric_eigen(hess);

  // The lemma-sized blocks certify negative curvature only for small leak
  // factors. When a special block fails to exhibit it, fall back to every
  // twice-differentiable coordinate so the probe still reports the true sign.
  if (eig.values.front() > -1e-10) {
    const auto smooth = differentiability_report(net, target);
    auto eligible = [](SmoothnessClass c) {
      return c == SmoothnessClass::Analytic || c == SmoothnessClass::TwiceContinuously;
    };
    std::vector<Coordinate> full;
    for (int j = 0; j < net.size(); ++j) {
      if (eligible(smooth.w[j])) full.push_back(Coordinate::w(j));
      if (eligible(smooth.b[j])) full.push_back(Coordinate::b(j));
      if (eligible(smooth.v[j])) full.push_back(Coordinate::v(j));
    }
    if (eligible(smooth.c)) full.push_back(Coordinate::c());
    if (full.size() > coords.size()) {
      Matrix<double> wide = restricted_hessian(net, target, full, tol);
      EigenDecomposition wide_eig = symmetric_eigen(wide);
      if (wide_eig.values.front() < eig.values.front()) {
        coords = std::move(full);
        hess = std::move(wide);
        eig = std::move(wide_eig);
      }
    }
  }

  res.coordinates.reserve(coords.size());
  for (const auto& coord : coords) res.coordinates.push_back(to_string(coord));
  res.determinant = determinant(hess);
  res.eigenvalues = eig.values;
  res.min_eigenvalue = eig.values.front();
  res.mu = mu;
  res.gamma_factor = gamma_factor;
  return res;
}

std::optional<EscapeResult> descent_direction_search(const Network<double>& net,
                                                     const AffineTarget<double>& target,
                                                     double radius, int trials,
                                                     unsigned long long seed,
                                                     const Tolerances& tol) {
  net.validate();
  target.validate();
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("search radius must be positive and finite");
  if (trials < 1) throw std::invalid_argument("trial count must be at least 1");

  const int n = net.size();
  const double base = loss(net, target);
  const double slack = 1e-13 * std::max(1.0, base);
  const std::vector<double> origin = flatten(net);

  std::optional<EscapeResult> found;

  auto consider = [&](const Network<double>& cand, const std::string& method) {
    const std::vector<double> point = flatten(cand);
    std::vector<double> dir(point.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
      dir[i] = point[i] - origin[i];
      dist = std::max(dist, std::fabs(dir[i]));
    }
    if (!(dist > 0.0) || dist > radius * (1.0 + 1e-9)) return false;
    const double moved = loss(cand, target);
    if (!std::isfinite(moved) || moved >= base - slack) return false;
    for (double& d : dir) d /= dist;
    found = EscapeResult{std::move(dir), dist, base - moved, method};
    return true;
  };

  // Shrinks the curve parameter dyadically until the step both fits the ball
  // and lowers the loss.
  auto walk_curve = [&](auto&& at, const std::string& method) {
    for (int k = 1; k <= 60; ++k) {
      std::optional<Network<double>> cand = at(std::ldexp(1.0, -k));
      if (cand && consider(*cand, method)) return true;
    }
    return false;
  };

  const bool sloped = target.alpha != 0.0;

  if (sloped && net.activation.kind == ActivationKind::Quadratic) {
    const double t0 = target.t0;
    const double t1 = target.t1;
    const double mid = 0.5 * (t0 + t1);
    const double sq_mean = (t0 * t0 + t0 * t1 + t1 * t1) / 3.0;
    const double slope_sign = Traits::sign(target.alpha);
    for (int j = 0; j < n && !found; ++j) {
      const double scale = std::max(1.0, std::fabs(net.w[j]) + std::fabs(net.b[j]));
      const bool w_zero = Traits::is_zero(net.w[j], tol.eq_rel * scale);
      const bool b_zero = Traits::is_zero(net.b[j], tol.eq_rel * scale);
      const bool flat =
          Traits::is_zero(net.v[j], tol.eq_rel * std::max(1.0, std::fabs(net.v[j])));

      // Swap neuron j for the perturbed triple, shifting the output offset so
      // the mean of the network over the interval stays put.
      auto replace = [&](double ws, double bs, double vs) {
        Network<double> cand = net;
        const double old_mean =
            net.v[j] * (net.w[j] * net.w[j] * sq_mean +
                        net.w[j] * net.b[j] * (t0 + t1) + net.b[j] * net.b[j]);
        const double new_mean =
            vs * (ws * ws * sq_mean + ws * bs * (t0 + t1) + bs * bs);
        cand.w[j] = ws;
        cand.b[j] = bs;
        cand.v[j] = vs;
        cand.c = net.c + old_mean - new_mean;
        return cand;
      };

      if (flat && !w_zero) {
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              return replace(net.w[j], net.b[j] - s * net.w[j], -slope_sign * s * s);
            },
            "quadratic root-shift curve");
      } else if (w_zero && b_zero && !flat) {
        const double tilt = Traits::sign(target.alpha * net.v[j]);
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              return replace(s, -mid * s + tilt * s * s, net.v[j]);
            },
            "quadratic tilt curve");
      } else if (w_zero && flat) {
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              const double bs = net.b[j] + s;
              if (bs == 0.0) return std::nullopt;
              return replace(s * bs, bs, slope_sign * s * s * s / (bs * bs));
            },
            "quadratic flat-neuron curve");
      }
    }
  }

  if (sloped && net.activation.kind != ActivationKind::Quadratic) {
    const auto reports = classify_neurons(net, target, tol);
    const UnitFrame frame = to_unit_frame(net, target);
    auto pulled = [&](const Network<double>& unit) {
      return from_unit_frame(frame, unit, target);
    };
    const bool relu = net.activation.kind == ActivationKind::Relu;

    for (int j = 0; j < n && !found; ++j) {
      const auto& rep = reports[j];
      const double uw = frame.net.w[j];
      const double uv = frame.net.v[j];

      if (relu && rep.kind == NeuronKind::SemiInactive && uw < 0.0 && uv <= 0.0) {
        // Breakpoint pinned to the left end: pull it inside while lowering
        // the outer weight in step.
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              Network<double> unit = frame.net;
              unit.w[j] = uw - s;
              unit.b[j] = -s * unit.w[j];
              unit.v[j] = uv - s;
              return pulled(unit);
            },
            "left-end activation curve");
      } else if (relu && rep.kind == NeuronKind::SemiInactive && uw > 0.0 && uv >= 0.0) {
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              Network<double> unit = frame.net;
              unit.w[j] = uw + s;
              unit.b[j] = -(1.0 - s) * unit.w[j];
              unit.v[j] = uv + s;
              return pulled(unit);
            },
            "right-end activation curve");
      } else if (relu && rep.kind == NeuronKind::Degenerate) {
        if (uv <= 0.0) {
          walk_curve(
              [&](double s) -> std::optional<Network<double>> {
                Network<double> unit = frame.net;
                unit.w[j] = -s;
                unit.b[j] = s * s;
                unit.v[j] = uv - s;
                return pulled(unit);
              },
              "degenerate left curve");
        }
        if (!found && uv >= 0.0) {
          walk_curve(
              [&](double s) -> std::optional<Network<double>> {
                Network<double> unit = frame.net;
                unit.w[j] = s;
                unit.b[j] = -(1.0 - s) * s;
                unit.v[j] = uv + s;
                return pulled(unit);
              },
              "degenerate right curve");
        }
      } else if (!relu && rep.kind == NeuronKind::Degenerate) {
        const double tilt = uv >= 0.0 ? 1.0 : -1.0;
        walk_curve(
            [&](double s) -> std::optional<Network<double>> {
              Network<double> unit = frame.net;
              unit.w[j] = tilt * s;
              unit.b[j] = -tilt * s * s;
              unit.v[j] = uv + tilt * s;
              return pulled(unit);
            },
            "degenerate tilt curve");
      }

      // A flat neuron with zero inner weight couples to the residual through
      // the off-diagonal of its (weight, outer-weight) curvature block; any
      // negative eigenvalue there is a descent direction.
      const double nscale = std::max(1.0, std::fabs(net.w[j]) + std::fabs(net.b[j]));
      if (!found && rep.flat && Traits::is_zero(net.w[j], tol.eq_rel * nscale) &&
          (rep.kind == NeuronKind::SemiActive || rep.kind == NeuronKind::Inactive)) {
        try {
          const Matrix<double> block = restricted_hessian(
              frame.net, frame.target, {Coordinate::w(j), Coordinate::v(j)}, tol);
          const auto eig = symmetric_eigen(block);
          if (eig.values.front() < 0.0) {
            const double dw = eig.vectors.front()[0];
            const double dv = eig.vectors.front()[1];
            for (double orient : {1.0, -1.0}) {
              const bool ok = walk_curve(
                  [&](double s) -> std::optional<Network<double>> {
                    Network<double> unit = frame.net;
                    unit.w[j] = uw + orient * s * dw;
                    unit.v[j] = uv + orient * s * dv;
                    return pulled(unit);
                  },
                  "flat-neuron curvature direction");
              if (ok) break;
            }
          }
        } catch (const std::domain_error&) {
        }
      }
    }
  }

  // Restricted-curvature fallback: the Hessian over every coordinate that is
  // at least twice continuously differentiable, followed along its most
  // negative eigenvector.
  if (!found && sloped) {
    const auto smooth = differentiability_report(net, target);
    auto eligible = [](SmoothnessClass s) {
      return s == SmoothnessClass::Analytic || s == SmoothnessClass::TwiceContinuously;
    };
    std::vector<Coordinate> coords;
    for (int j = 0; j < n; ++j)
      if (eligible(smooth.w[j])) coords.push_back(Coordinate::w(j));
    for (int j = 0; j < n; ++j)
      if (eligible(smooth.b[j])) coords.push_back(Coordinate::b(j));
    for (int j = 0; j < n; ++j)
      if (eligible(smooth.v[j])) coords.push_back(Coordinate::v(j));
    if (eligible(smooth.c)) coords.push_back(Coordinate::c());
    if (coords.size() >= 2) {
      const Matrix<double> hess = restricted_hessian(net, target, coords, tol);
      const auto eig = symmetric_eigen(hess);
      const double floor =
          -1e-12 * std::max(1.0, std::fabs(eig.values.back()));
      if (eig.values.front() < floor) {
        const auto& vec = eig.vectors.front();
        for (double orient : {1.0, -1.0}) {
          const bool ok = walk_curve(
              [&](double s) -> std::optional<Network<double>> {
                Network<double> cand = net;
                for (std::size_t i = 0; i < coords.size(); ++i) {
                  const double delta = orient * s * vec[i];
                  switch (coords[i].kind) {
                    case Coordinate::Kind::Weight: cand.w[coords[i].neuron] += delta; break;
                    case Coordinate::Kind::Bias: cand.b[coords[i].neuron] += delta; break;
                    case Coordinate::Kind::OuterWeight:
                      cand.v[coords[i].neuron] += delta;
                      break;
                    case Coordinate::Kind::OuterBias: cand.c += delta; break;
                  }
                }
                return cand;
              },
              "restricted-curvature direction");
          if (ok) break;
        }
      }
    }
  }

  if (!found) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int dim = 3 * n + 1;
    for (int t = 0; t < trials && !found; ++t) {
      std::vector<double> dir(dim);
      double norm = 0.0;
      for (double& d : dir) {
        d = gauss(rng);
        norm = std::max(norm, std::fabs(d));
      }
      if (!(norm > 0.0)) continue;
      const double scale = radius * (1.0 - unif(rng));
      Network<double> cand = net;
      for (int j = 0; j < n; ++j) {
        cand.w[j] += scale * dir[j] / norm;
        cand.b[j] += scale * dir[n + j] / norm;
        cand.v[j] += scale * dir[2 * n + j] / norm;
      }
      cand.c += scale * dir[3 * n] / norm;
      consider(cand, "random ball sample");
    }
  }

  return found;
}

double local_min_margin_radius(const Network<double>& net,
                               const AffineTarget<double>& target,
                               const Tolerances& tol) {
  net.validate();
  target.validate();
  if (net.activation.kind != ActivationKind::Relu)
    throw std::domain_error("margin radius is defined for hard-kink networks only");
  const auto reports = classify_neurons(net, target, tol);
  const double reach = 1.0 + std::max(std::fabs(target.t0), std::fabs(target.t1));
  double r = std::numeric_limits<double>::infinity();
  for (int j = 0; j < net.size(); ++j) {
    const double p0 = net.w[j] * target.t0 + net.b[j];
    const double p1 = net.w[j] * target.t1 + net.b[j];
    switch (reports[j].kind) {
      case NeuronKind::Inactive:
        // Keep both endpoint pre-activations strictly negative.
        r = std::min(r, std::min(std::fabs(p0), std::fabs(p1)) / reach);
        break;
      case NeuronKind::SemiInactive:
        // Keep the breakpoint within the first quarter of the interval and
        // the outer weight on its side of zero.
        r = std::min(r, std::fabs(net.w[j]) * target.length() / (4.0 * reach));
        if (!reports[j].flat) r = std::min(r, std::fabs(net.v[j]));
        break;
      default:
        throw std::domain_error(
            "margin radius needs every neuron inactive or semi-inactive");
    }
  }
  return 0.5 * r;
}

RecurrenceReport lemma_recurrence_check(const PiecewiseForm<double>& form,
                                        const AffineTarget<double>& target,
                                        const Tolerances& tol) {
  target.validate();
  if (target.alpha == 0.0)
    throw std::invalid_argument("recurrence analysis requires a sloped target (alpha != 0)");
  if (form.knots.size() < 2 || form.pieces.size() + 1 != form.knots.size())
    throw std::invalid_argument("piecewise form needs one more knot than pieces");
  const double len = target.length();
  const double edge_band = tol.struct_rel *
                           std::max({1.0, std::fabs(target.t0), std::fabs(target.t1)});
  if (std::fabs(form.knots.front() - target.t0) > edge_band ||
      std::fabs(form.knots.back() - target.t1) > edge_band)
    throw std::invalid_argument("piecewise form does not cover the target interval");
  for (const auto& piece : form.pieces)
    if (piece.degree() > 1)
      throw std::invalid_argument("recurrence analysis needs affine pieces");

  const int m = static_cast<int>(form.pieces.size());
  std::vector<double> u(m + 1), slope_dev(m), offset(m);
  for (int i = 0; i <= m; ++i) u[i] = (form.knots[i] - target.t0) / len;
  u.front() = 0.0;
  u.back() = 1.0;
  for (int i = 0; i < m; ++i) {
    const double a1 = form.pieces[i].coefficient(1);
    const double a0 = form.pieces[i].coefficient(0);
    slope_dev[i] = a1 / target.alpha - 1.0;
    offset[i] = (a1 * target.t0 + a0 - target.alpha * target.t0 - target.beta) /
                (target.alpha * len);
  }

  RecurrenceReport rep;
  auto close = [&](double got, double want) {
    return std::fabs(got - want) <= tol.struct_rel * std::max(1.0, std::fabs(want));
  };

  rep.segment_means_ok = true;
  for (int i = 0; i < m; ++i) {
    const double mean = 0.5 * slope_dev[i] * (u[i] + u[i + 1]) + offset[i];
    if (!close(mean, 0.0)) {
      rep.segment_means_ok = false;
      rep.notes.push_back("segment " + std::to_string(i + 1) +
                          " has nonzero mean deviation from the line");
    }
  }
  if (!rep.segment_means_ok) {
    rep.notes.push_back("mean precondition failed; identities not evaluated");
    return rep;
  }

  rep.recurrence_ok = true;
  const double first_len = u[1] - u[0];
  for (int i = 1; i < m; ++i) {
    const double want =
        (i % 2 == 0 ? 1.0 : -1.0) * first_len / (u[i + 1] - u[i]) * slope_dev[0];
    if (!close(slope_dev[i], want)) {
      rep.recurrence_ok = false;
      rep.notes.push_back("slope deviation on segment " + std::to_string(i + 1) +
                          " breaks the alternating length-ratio recurrence");
    }
  }

  Accumulator<double> x_moment;
  for (int i = 0; i < m; ++i) {
    const double cubes = (u[i + 1] * u[i + 1] * u[i + 1] - u[i] * u[i] * u[i]) / 3.0;
    const double squares = (u[i + 1] * u[i + 1] - u[i] * u[i]) / 2.0;
    x_moment.add(slope_dev[i] * cubes + offset[i] * squares);
  }
  rep.x_moment_zero = close(x_moment.total(), 0.0);

  const bool line_itself = std::fabs(slope_dev[0]) <= tol.struct_rel;
  rep.alternating_sum_applicable = rep.x_moment_zero && !line_itself && m > 1;
  if (rep.alternating_sum_applicable) {
    Accumulator<double> alt;
    for (int i = 0; i < m; ++i) {
      const double seg = u[i + 1] - u[i];
      alt.add((i % 2 == 0 ? -1.0 : 1.0) * seg * seg);
    }
    rep.alternating_sum_ok = close(alt.total(), 0.0);
    if (!rep.alternating_sum_ok)
      rep.notes.push_back("alternating sum of squared segment lengths is nonzero");
  }

  rep.forces_identity = m == 1 && rep.x_moment_zero;
  if (rep.forces_identity)
    rep.notes.push_back(
        "single segment with both moments zero: the form is the line itself");
  return rep;
}

}  // namespace landscape

#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "landscape/construct.hpp"
#include "landscape/exactcalc.hpp"
#include "landscape/taxonomy.hpp"

namespace landscape {

enum class Verdict { NotCritical, GlobalMinimum, NonGlobalLocalMinimum, Saddle };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NotCritical: return "NotCritical";
    case Verdict::GlobalMinimum: return "GlobalMinimum";
    case Verdict::NonGlobalLocalMinimum: return "NonGlobalLocalMinimum";
    case Verdict::Saddle: return "Saddle";
  }
  return "?";
}

// Structural verdict for a parameter vector. The verdict is decided purely by
// the structural conditions (centeredness, neuron taxonomy, breakpoint
// lattice, sign pattern, slope sums); gradient_consistent records whether the
// computed generalized gradient agrees with it.
template <class S>
struct ClassificationResult {
  Verdict verdict = Verdict::NotCritical;
  std::optional<int> saddle_order;   // breakpoint count n, kink saddles only
  std::optional<int> sigma;          // orientation, leaky kink saddles only
  std::optional<S> predicted_loss;   // absent for NotCritical
  S loss{};
  double gradient_norm = 0.0;
  bool gradient_zero = false;
  bool gradient_consistent = false;
  CenterednessReport<S> center;
  std::vector<NeuronReport<S>> neurons;
  std::vector<std::string> evidence;
};

// Closed-form loss at a critical point whose realization is piecewise affine
// with n evenly spaced interior breakpoints (n = 0 means the realization is
// the constant center line, which covers every activation). There is no
// closed form for leaky kink saddles; use the integral loss instead.
template <class S>
S predicted_loss_value(ActivationKind kind, const AffineTarget<S>& target,
                       int saddle_order) {
  using T = ScalarTraits<S>;
  target.validate();
  const S length = target.length();
  const S scale = target.alpha * target.alpha * length * length * length;
  if (saddle_order == 0) return scale * T::from_fraction(1, 12);
  if (kind != ActivationKind::Relu) {
    throw std::invalid_argument(
        "no closed-form loss for kink saddles with activation " + to_string(kind));
  }
  if (saddle_order < 2 || saddle_order % 2 != 0) {
    throw std::invalid_argument("breakpoint count must be 0 or a positive even number");
  }
  const int np1 = saddle_order + 1;
  return scale * T::from_fraction(1, 12 * np1 * np1 * np1 * np1);
}

// Advisory on the leak-rate hypothesis: the characterization is proven for
// all sufficiently small leak rates (the threshold is existential and may
// depend on the width), and believed to hold on all of (0,1).
struct GammaAdvisory {
  bool valid = false;        // gamma lies in (0,1)
  bool conjectured = false;  // covered by the believed-general range
  std::string message;
};

inline GammaAdvisory gamma_validity(double gamma, int N) {
  GammaAdvisory adv;
  if (!(gamma > 0.0 && gamma < 1.0)) {
    adv.message = "invalid: leak rate must lie strictly between 0 and 1";
    return adv;
  }
  adv.valid = true;
  adv.conjectured = true;
  std::ostringstream msg;
  msg << "conjectured-valid: the proof guarantees some positive threshold "
         "(possibly depending on the width N=" << N
      << ") below which the classification holds, and the classification is "
         "believed to hold for every leak rate in (0,1)";
  if (gamma > 0.9) msg << "; leak rate " << gamma << " is near the linear limit";
  adv.message = msg.str();
  return adv;
}

namespace detail {

inline std::string neuron_tag(int j) { return "neuron " + std::to_string(j + 1); }

template <class S>
std::string describe(const S& value) {
  std::ostringstream out;
  out << ScalarTraits<S>::to_double(value);
  return out.str();
}

// Sign of alpha * v_j with the flat flag acting as the zero snap.
template <class S>
int outer_sign(const Network<S>& net, const AffineTarget<S>& target,
               const NeuronReport<S>& rep) {
  if (rep.flat) return 0;
  return ScalarTraits<S>::sign(target.alpha) *
         ScalarTraits<S>::sign(net.v[rep.index - 1]);
}

template <class S>
struct BreakpointCluster {
  S value{};                 // breakpoint of the first member
  std::vector<int> members;  // neuron indices, 0-based
};

// Groups the breakpoints of the given neurons; two breakpoints belong to the
// same cluster when they differ by at most band (exact equality in exact
// mode). Returns clusters in increasing breakpoint order.
template <class S>
std::vector<BreakpointCluster<S>> cluster_breakpoints(const Network<S>& net,
                                                      const std::vector<int>& idx,
                                                      double band) {
  std::vector<std::pair<S, int>> pts;
  pts.reserve(idx.size());
  for (int j : idx) pts.emplace_back(-net.b[j] / net.w[j], j);
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<BreakpointCluster<S>> out;
  for (const auto& [t, j] : pts) {
    if (!out.empty() &&
        ScalarTraits<S>::is_zero(t - out.back().value, band)) {
      out.back().members.push_back(j);
    } else {
      out.push_back(BreakpointCluster<S>{t, {j}});
    }
  }
  return out;
}

// Checks a clustered kink structure against an expected lattice: breakpoint
// positions, alternating weight signs (sign_first at the first breakpoint),
// and per-breakpoint slope sums. Appends human-readable findings to evidence
// and returns whether everything matched.
template <class S>
bool check_kink_lattice(const Network<S>& net,
                        const std::vector<BreakpointCluster<S>>& clusters,
                        const std::vector<S>& expected_q,
                        const std::vector<S>& expected_slope, int sign_first,
                        double knot_band, double rel_band,
                        std::vector<std::string>& evidence) {
  using T = ScalarTraits<S>;
  bool ok = true;
  const int n = static_cast<int>(clusters.size());
  for (int i = 0; i < n && ok; ++i) {
    const auto& cl = clusters[static_cast<std::size_t>(i)];
    const S& q = expected_q[static_cast<std::size_t>(i)];
    if (!T::is_zero(cl.value - q, knot_band)) {
      evidence.push_back("breakpoint " + std::to_string(i + 1) + " at " +
                         describe(cl.value) + " is off its lattice position " +
                         describe(q));
      ok = false;
      break;
    }
    const int want_sign = (i % 2 == 0) ? sign_first : -sign_first;
    for (int j : cl.members) {
      if (T::sign(net.w[j]) != want_sign) {
        evidence.push_back(neuron_tag(j) + ": weight sign breaks the alternating "
                           "pattern at breakpoint " + std::to_string(i + 1));
        ok = false;
        break;
      }
    }
    if (!ok) break;
    Accumulator<S> sum;
    for (int j : cl.members) sum.add(net.v[j] * net.w[j]);
    const S& want = expected_slope[static_cast<std::size_t>(i)];
    const double band = rel_band * std::max(1.0, std::fabs(T::to_double(want)));
    if (!T::is_zero(sum.total() - want, T::is_exact ? 0.0 : band)) {
      evidence.push_back("slope sum " + describe(sum.total()) + " at breakpoint " +
                         std::to_string(i + 1) + " should be " + describe(want));
      ok = false;
    }
  }
  if (ok) {
    evidence.push_back("breakpoints form the lattice with alternating weight "
                       "signs and matching slope sums (n = " + std::to_string(n) + ")");
  }
  return ok;
}

}  // namespace detail

template <class S>
ClassificationResult<S> classify(const Network<S>& net, const AffineTarget<S>& target,
                                 const Tolerances& tol = {}) {
  using T = ScalarTraits<S>;
  net.validate();
  target.validate();

  ClassificationResult<S> res;
  res.loss = loss(net, target, tol);
  const Gradient<S> grad = generalized_gradient(net, target, tol);
  res.gradient_norm = gradient_inf_norm(grad);

  const double alpha_d = T::to_double(target.alpha);
  const double length_d = T::to_double(target.length());
  const double loss_scale =
      std::max(1.0, alpha_d * alpha_d * length_d * length_d * length_d);
  if (T::is_exact) {
    bool zero = T::is_zero(grad.dc, 0.0);
    for (const S& x : grad.dw) zero = zero && T::is_zero(x, 0.0);
    for (const S& x : grad.db) zero = zero && T::is_zero(x, 0.0);
    for (const S& x : grad.dv) zero = zero && T::is_zero(x, 0.0);
    res.gradient_zero = zero;
  } else {
    // Absolute test after normalizing by the loss scale.
    res.gradient_zero = res.gradient_norm <= tol.grad_abs * loss_scale;
  }

  res.neurons = classify_neurons(net, target, tol);
  // Centeredness is a structural equality, so it uses the structural band
  // rather than the taxonomy snap band.
  res.center.expected_offset = target.centered_offset();
  res.center.actual_offset = net.c;
  {
    const double band =
        T::is_exact ? 0.0
                    : tol.struct_rel *
                          std::max(1.0, std::fabs(T::to_double(res.center.expected_offset)));
    res.center.centered = T::is_zero(net.c - res.center.expected_offset, band);
  }

  const bool loss_zero =
      T::is_exact ? T::is_zero(res.loss, 0.0)
                  : T::to_double(res.loss) <= tol.struct_rel * loss_scale;

  auto finish = [&](Verdict verdict) {
    res.verdict = verdict;
    res.gradient_consistent = (verdict != Verdict::NotCritical) == res.gradient_zero;
    return res;
  };

  // Constant targets have no critical points besides exact matches.
  if (T::sign(target.alpha) == 0) {
    if (res.gradient_zero && loss_zero) {
      res.predicted_loss = T::from_int(0);
      res.evidence.push_back("constant target: the realization matches it exactly");
      return finish(Verdict::GlobalMinimum);
    }
    res.evidence.push_back(
        "constant target: the only critical points are exact matches, and this "
        "configuration is not one");
    return finish(Verdict::NotCritical);
  }

  if (loss_zero) {
    res.predicted_loss = T::from_int(0);
    res.evidence.push_back("realization matches the target line (loss 0)");
    return finish(Verdict::GlobalMinimum);
  }

  if (!res.center.centered) {
    res.evidence.push_back("offset " + detail::describe(net.c) +
                           " is not the center-line value " +
                           detail::describe(res.center.expected_offset) +
                           ", which every non-global critical point carries");
    return finish(Verdict::NotCritical);
  }
  res.evidence.push_back("offset equals the center-line value");

  const ActivationKind kind = net.activation.kind;
  const double knot_band =
      T::is_exact ? 0.0
                  : tol.struct_rel *
                        std::max({1.0, std::fabs(T::to_double(target.t0)),
                                  std::fabs(T::to_double(target.t1))});

  if (kind == ActivationKind::Quadratic) {
    // Saddle shape: every neuron is flat-in-effect. Either w = 0 with
    // v * b = 0, or v = 0 with w != 0 and the pre-activation root at the
    // interval midpoint.
    for (const auto& rep : res.neurons) {
      const int j = rep.index - 1;
      const bool w_zero = T::is_exact
                              ? T::is_zero(net.w[j], 0.0)
                              : T::is_zero(net.w[j], tol.struct_rel *
                                                         detail::neuron_scale(net, j));
      if (w_zero) {
        const bool b_zero = T::is_exact
                                ? T::is_zero(net.b[j], 0.0)
                                : T::is_zero(net.b[j], tol.struct_rel *
                                                           detail::neuron_scale(net, j));
        if (rep.flat || b_zero) continue;
        res.evidence.push_back(detail::neuron_tag(j) +
                               ": with w = 0, a critical point needs v = 0 or b = 0");
        return finish(Verdict::NotCritical);
      }
      if (!rep.flat) {
        res.evidence.push_back(detail::neuron_tag(j) +
                               ": a sloped neuron must be flat at a critical point");
        return finish(Verdict::NotCritical);
      }
      const S root_offset = net.w[j] * target.midpoint() + net.b[j];
      const double band =
          T::is_exact ? 0.0 : tol.struct_rel * detail::neuron_scale(net, j);
      if (!T::is_zero(root_offset, band)) {
        res.evidence.push_back(detail::neuron_tag(j) +
                               ": pre-activation root is away from the interval "
                               "midpoint");
        return finish(Verdict::NotCritical);
      }
    }
    res.evidence.push_back("every neuron is flat with w = 0 and v b = 0, or flat "
                           "with its root at the midpoint");
    res.predicted_loss = predicted_loss_value(kind, target, 0);
    return finish(Verdict::Saddle);
  }

  if (kind == ActivationKind::Relu) {
    // Non-global local minimum: every neuron inactive, or touching one
    // endpoint with the strictly stabilizing outer sign.
    bool is_min = true;
    std::string min_failure;
    for (const auto& rep : res.neurons) {
      const int j = rep.index - 1;
      if (rep.kind == NeuronKind::Inactive) continue;
      if (rep.kind == NeuronKind::SemiInactive) {
        const int s = detail::outer_sign(net, target, rep);
        const bool left = T::sign(net.w[j]) < 0;
        if ((left && s > 0) || (!left && s < 0)) continue;
        is_min = false;
        min_failure = detail::neuron_tag(j) +
                      ": endpoint-touching neuron lacks the stabilizing outer sign";
        break;
      }
      is_min = false;
      min_failure = detail::neuron_tag(j) + ": " + to_string(rep.kind) +
                    " neurons do not appear in a local minimum";
      break;
    }
    if (is_min) {
      res.evidence.push_back("every neuron is inactive or endpoint-touching with "
                             "the stabilizing outer sign");
      res.predicted_loss = predicted_loss_value(kind, target, 0);
      return finish(Verdict::NonGlobalLocalMinimum);
    }
    res.evidence.push_back(min_failure);

    // Saddle preamble: nothing that would tilt the realization.
    std::vector<int> kink_neurons;
    bool has_witness = false;
    for (const auto& rep : res.neurons) {
      const int j = rep.index - 1;
      switch (rep.kind) {
        case NeuronKind::Type1Active:
          res.evidence.push_back(detail::neuron_tag(j) +
                                 ": fully active neurons cannot appear at a "
                                 "critical point");
          return finish(Verdict::NotCritical);
        case NeuronKind::SemiActive:
        case NeuronKind::Degenerate:
          if (!rep.flat) {
            res.evidence.push_back(detail::neuron_tag(j) + ": non-flat " +
                                   to_string(rep.kind) +
                                   " neurons cannot appear at a critical point");
            return finish(Verdict::NotCritical);
          }
          has_witness = true;  // flat constant-side or all-zero neuron
          break;
        case NeuronKind::SemiInactive: {
          const int s = detail::outer_sign(net, target, rep);
          const bool left = T::sign(net.w[j]) < 0;
          // The destabilizing (or flat) endpoint sign is a saddle witness.
          if ((left && s <= 0) || (!left && s >= 0)) has_witness = true;
          break;
        }
        case NeuronKind::Inactive:
          break;
        case NeuronKind::Type2Active:
          kink_neurons.push_back(j);
          break;
      }
    }

    if (kink_neurons.empty()) {
      if (has_witness) {
        res.evidence.push_back("flat realization with an escapable witness neuron");
        res.predicted_loss = predicted_loss_value(kind, target, 0);
        return finish(Verdict::Saddle);
      }
      res.evidence.push_back("flat realization with no breakpoints and no "
                             "escapable witness neuron");
      return finish(Verdict::NotCritical);
    }

    const auto clusters = detail::cluster_breakpoints(net, kink_neurons, knot_band);
    const int n = static_cast<int>(clusters.size());
    if (n % 2 != 0) {
      res.evidence.push_back("interior breakpoint count " + std::to_string(n) +
                             " is odd; kink saddles need an even count");
      return finish(Verdict::NotCritical);
    }
    std::vector<S> expected_q, expected_slope;
    expected_q.reserve(static_cast<std::size_t>(n));
    const S slope_sum =
        target.alpha * T::from_fraction(2, n + 1);
    for (int i = 1; i <= n; ++i) {
      expected_q.push_back(target.t0 + target.length() * T::from_fraction(i, n + 1));
      expected_slope.push_back(slope_sum);
    }
    if (!detail::check_kink_lattice(net, clusters, expected_q, expected_slope,
                                    /*sign_first=*/1, knot_band, tol.struct_rel,
                                    res.evidence)) {
      return finish(Verdict::NotCritical);
    }
    res.saddle_order = n;
    res.predicted_loss = predicted_loss_value(kind, target, n);
    return finish(Verdict::Saddle);
  }

  // Leaky: every neuron must be a flat w = 0 neuron, all-zero, or part of the
  // kink structure; the slope never hides, so nothing else is critical.
  std::vector<int> kink_neurons;
  for (const auto& rep : res.neurons) {
    const int j = rep.index - 1;
    if (rep.kind == NeuronKind::Type2Active) {
      kink_neurons.push_back(j);
      continue;
    }
    const bool w_zero = T::sign(net.w[j]) == 0 ||
                        (!T::is_exact &&
                         T::is_zero(net.w[j], tol.eq_rel * detail::neuron_scale(net, j)));
    if (!rep.flat || !w_zero) {
      res.evidence.push_back(detail::neuron_tag(j) +
                             ": a leaky critical point admits only flat neurons "
                             "with w = 0 besides the kink structure");
      return finish(Verdict::NotCritical);
    }
  }

  if (kink_neurons.empty()) {
    res.evidence.push_back("flat realization; every direction is escapable "
                           "through the leak");
    res.predicted_loss = predicted_loss_value(kind, target, 0);
    return finish(Verdict::Saddle);
  }

  const auto clusters = detail::cluster_breakpoints(net, kink_neurons, knot_band);
  const int n = static_cast<int>(clusters.size());
  const int sigma = T::sign(net.w[clusters.front().members.front()]);
  LeakyFamilyGeometry<S> geo;
  try {
    geo = leaky_family_geometry(net.activation.leak, n, sigma);
  } catch (const std::invalid_argument&) {
    res.evidence.push_back("kink structure does not define a valid family");
    return finish(Verdict::NotCritical);
  }
  std::vector<S> expected_q, expected_slope;
  expected_q.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    expected_q.push_back(target.t0 +
                         target.length() * geo.q[static_cast<std::size_t>(i)]);
    expected_slope.push_back(target.alpha * geo.slope[static_cast<std::size_t>(i)]);
  }
  if (!detail::check_kink_lattice(net, clusters, expected_q, expected_slope,
                                  sigma, knot_band, tol.struct_rel, res.evidence)) {
    return finish(Verdict::NotCritical);
  }
  res.saddle_order = n;
  res.sigma = sigma;
  // No closed form here: report the measured integral loss.
  res.predicted_loss = res.loss;
  return finish(Verdict::Saddle);
}

}  // namespace landscape

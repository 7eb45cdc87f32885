#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/model.hpp"

namespace landscape {

// Neuron shapes available to the non-global local-minimum builder. Each shape
// fixes (w, b) geometry and the outer-weight sign required for minimality.
enum class LocalMinNeuronKind {
  Inactive,           // breakpoint strictly left of the interval, w < 0
  SemiInactiveLeft,   // active set meets the interval exactly at its left end
  SemiInactiveRight,  // active set meets the interval exactly at its right end
};

// Witness shapes for saddles whose realization is the constant center line.
enum class TrivialSaddleKind {
  FlatSemiActive,             // w = 0, b > 0, v = 0
  SemiInactiveLeftWrongSign,  // active set = left endpoint, outer sign flipped
  SemiInactiveRightWrongSign, // active set = right endpoint, outer sign flipped
  FlatDegenerate,             // w = b = v = 0
};

// Neuron shapes for quadratic-activation saddles.
enum class QuadraticSaddleKind {
  FlatShiftedBias,    // w = 0, b != 0, v = 0
  ZeroPreactivation,  // w = 0, b = 0, v free
  MidpointRoot,       // v = 0, w != 0, pre-activation root at the interval midpoint
  FlatDegenerate,     // w = b = v = 0
};

inline std::string to_string(LocalMinNeuronKind kind) {
  switch (kind) {
    case LocalMinNeuronKind::Inactive: return "inactive";
    case LocalMinNeuronKind::SemiInactiveLeft: return "semi-inactive-left";
    case LocalMinNeuronKind::SemiInactiveRight: return "semi-inactive-right";
  }
  throw std::logic_error("unknown local-min neuron kind");
}

inline std::string to_string(TrivialSaddleKind kind) {
  switch (kind) {
    case TrivialSaddleKind::FlatSemiActive: return "flat-semi-active";
    case TrivialSaddleKind::SemiInactiveLeftWrongSign:
      return "semi-inactive-left-wrong-sign";
    case TrivialSaddleKind::SemiInactiveRightWrongSign:
      return "semi-inactive-right-wrong-sign";
    case TrivialSaddleKind::FlatDegenerate: return "flat-degenerate";
  }
  throw std::logic_error("unknown trivial-saddle kind");
}

inline std::string to_string(QuadraticSaddleKind kind) {
  switch (kind) {
    case QuadraticSaddleKind::FlatShiftedBias: return "flat-shifted-bias";
    case QuadraticSaddleKind::ZeroPreactivation: return "zero-preactivation";
    case QuadraticSaddleKind::MidpointRoot: return "midpoint-root";
    case QuadraticSaddleKind::FlatDegenerate: return "flat-degenerate";
  }
  throw std::logic_error("unknown quadratic-saddle kind");
}

// Structural description of a constructed kink saddle: breakpoint lattice,
// per-breakpoint slope sums, and how many neurons share each breakpoint.
// sigma and delta are meaningful for the leaky family only.
template <typename S>
struct SaddleFamilySpec {
  int n = 0;
  int sigma = 1;
  S delta{};
  std::vector<S> breakpoints;
  std::vector<S> slope_sums;
  std::vector<int> multiplicity;
};

template <typename S>
struct LeakySaddleResult {
  Network<S> network;
  SaddleFamilySpec<S> family;
};

// Normalized leaky kink-saddle geometry on [0,1] with unit target slope:
// spacing constant delta, breakpoints q_1 < ... < q_n, and the per-breakpoint
// slope sums. General targets scale q by the interval and slopes by alpha.
template <typename S>
struct LeakyFamilyGeometry {
  S delta{};
  std::vector<S> q;
  std::vector<S> slope;
};

template <typename S>
LeakyFamilyGeometry<S> leaky_family_geometry(const S& gamma, int n, int sigma) {
  using T = ScalarTraits<S>;
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  if (n < 1) throw std::invalid_argument("breakpoint count must be at least 1");

  const S zero = T::from_int(0);
  const S one = T::from_int(1);

  // gamma^e with e in {0, 1/2}: the two edge exponents depend on sigma and
  // the parity of n.
  const bool first_half_power = (sigma == -1);
  const bool last_half_power = (sigma * ((n % 2 == 0) ? 1 : -1)) == -1;
  const S sqrt_gamma = (first_half_power || last_half_power || n == 1)
                           ? T::sqrt_nonneg(gamma)
                           : zero;
  const S gamma_first = first_half_power ? sqrt_gamma : one;
  const S gamma_last = last_half_power ? sqrt_gamma : one;
  const S sqrt_one_plus_gamma = (n >= 2) ? T::sqrt_nonneg(one + gamma) : zero;

  LeakyFamilyGeometry<S> geo;
  geo.delta = gamma_first + gamma_last;
  if (n >= 2) geo.delta += T::from_int(n - 1) * sqrt_one_plus_gamma;
  geo.q.reserve(static_cast<std::size_t>(n));
  geo.slope.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    S numer = gamma_first;
    if (i > 1) numer += T::from_int(i - 1) * sqrt_one_plus_gamma;
    geo.q.push_back(numer / geo.delta);
    if (n == 1) {
      geo.slope.push_back(one / sqrt_gamma);
    } else if (i == 1) {
      geo.slope.push_back((one / sqrt_one_plus_gamma + one / gamma_first) / geo.delta);
    } else if (i == n) {
      geo.slope.push_back((one / sqrt_one_plus_gamma + one / gamma_last) / geo.delta);
    } else {
      geo.slope.push_back(T::from_int(2) / (geo.delta * sqrt_one_plus_gamma));
    }
  }
  return geo;
}

namespace detail {

template <typename S>
void require_sloped_target(const AffineTarget<S>& target, const char* family) {
  if (ScalarTraits<S>::sign(target.alpha) == 0) {
    throw std::invalid_argument(std::string(family) +
                                " construction requires a sloped target (alpha != 0)");
  }
}

// Resolves the multiplicity vector for n breakpoints: empty means one neuron
// per breakpoint; otherwise each entry must be >= 1 and the total must fit N.
inline std::vector<int> resolve_mass_split(std::vector<int> mass_split, int n, int N) {
  if (mass_split.empty()) mass_split.assign(static_cast<std::size_t>(n), 1);
  if (static_cast<int>(mass_split.size()) != n) {
    throw std::invalid_argument("mass split must assign neurons to each of the " +
                                std::to_string(n) + " breakpoints");
  }
  int total = 0;
  for (int m : mass_split) {
    if (m < 1) throw std::invalid_argument("each breakpoint needs at least one neuron");
    total += m;
  }
  if (total > N) {
    throw std::invalid_argument("mass split needs " + std::to_string(total) +
                                " neurons but only " + std::to_string(N) + " are available");
  }
  return mass_split;
}

template <typename S>
void append_neuron(Network<S>& net, const S& w, const S& b, const S& v) {
  net.w.push_back(w);
  net.b.push_back(b);
  net.v.push_back(v);
}

// Inactive filler with breakpoint one interval-length left of the interval.
template <typename S>
void append_inactive_filler(Network<S>& net, const AffineTarget<S>& target) {
  using T = ScalarTraits<S>;
  const S minus_one = T::from_int(-1);
  append_neuron(net, minus_one, target.t0 - target.length(), T::from_int(1));
}

}  // namespace detail

// Builds a centered network in which every neuron is inactive or touches the
// interval only at an endpoint with the outer-weight sign that makes the
// configuration a strict one-sided ascent. The realization is the constant
// center line, so the loss equals alpha^2 (t1-t0)^3 / 12.
template <typename S>
Network<S> make_relu_local_min(int N, const AffineTarget<S>& target,
                               std::vector<LocalMinNeuronKind> menu = {}) {
  using T = ScalarTraits<S>;
  target.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");
  detail::require_sloped_target(target, "local-minimum");
  if (static_cast<int>(menu.size()) > N) {
    throw std::invalid_argument("menu assigns more neurons than the network has");
  }
  menu.resize(static_cast<std::size_t>(N), LocalMinNeuronKind::Inactive);

  const S one = T::from_int(1);
  const S half = T::from_fraction(1, 2);
  Network<S> net;
  net.activation = Activation<S>{ActivationKind::Relu, T::from_int(0)};
  for (LocalMinNeuronKind kind : menu) {
    switch (kind) {
      case LocalMinNeuronKind::Inactive:
        // Breakpoint at t0 - (t1-t0)/2, approaching from the left.
        detail::append_neuron(net, -one, target.t0 - half * target.length(), one);
        break;
      case LocalMinNeuronKind::SemiInactiveLeft:
        // Active exactly at {t0}; ascent needs alpha * v > 0.
        detail::append_neuron(net, -one, target.t0, target.alpha);
        break;
      case LocalMinNeuronKind::SemiInactiveRight:
        // Active exactly at {t1}; ascent needs alpha * v < 0.
        detail::append_neuron(net, one, -target.t1, -target.alpha);
        break;
    }
  }
  net.c = target.centered_offset();
  net.validate();
  return net;
}

// Builds a centered flat configuration containing one saddle witness neuron;
// the remaining neurons are inactive. The realization is the center line but
// the configuration admits an escape direction, so it is a saddle.
template <typename S>
Network<S> make_relu_trivial_saddle(int N, const AffineTarget<S>& target,
                                    TrivialSaddleKind kind) {
  using T = ScalarTraits<S>;
  target.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");
  detail::require_sloped_target(target, "trivial-saddle");

  const S zero = T::from_int(0);
  const S one = T::from_int(1);
  Network<S> net;
  net.activation = Activation<S>{ActivationKind::Relu, zero};
  switch (kind) {
    case TrivialSaddleKind::FlatSemiActive:
      detail::append_neuron(net, zero, one, zero);
      break;
    case TrivialSaddleKind::SemiInactiveLeftWrongSign:
      detail::append_neuron(net, -one, target.t0, -target.alpha);
      break;
    case TrivialSaddleKind::SemiInactiveRightWrongSign:
      detail::append_neuron(net, one, -target.t1, target.alpha);
      break;
    case TrivialSaddleKind::FlatDegenerate:
      detail::append_neuron(net, zero, zero, zero);
      break;
  }
  for (int j = 1; j < N; ++j) detail::append_inactive_filler(net, target);
  net.c = target.centered_offset();
  net.validate();
  return net;
}

// Builds the kink saddle with n evenly spaced interior breakpoints. Breakpoint
// i carries mass_split[i-1] neurons with weight sign (-1)^(i+1); each group
// splits the breakpoint's slope sum 2*alpha/(n+1) equally. Leftover neurons
// become inactive fillers.
template <typename S>
Network<S> make_relu_saddle(int N, const AffineTarget<S>& target, int n,
                            std::vector<int> mass_split = {}) {
  using T = ScalarTraits<S>;
  target.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");
  detail::require_sloped_target(target, "saddle");
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("breakpoint count must be a positive even number");
  }
  const std::vector<int> split = detail::resolve_mass_split(std::move(mass_split), n, N);

  const S one = T::from_int(1);
  const S length = target.length();
  Network<S> net;
  net.activation = Activation<S>{ActivationKind::Relu, T::from_int(0)};
  int used = 0;
  for (int i = 1; i <= n; ++i) {
    const S q = target.t0 + length * T::from_fraction(i, n + 1);
    const S w = (i % 2 == 1) ? one : -one;
    const int m = split[static_cast<std::size_t>(i - 1)];
    // v * w = 2 alpha / ((n+1) m) per neuron, summing to 2 alpha / (n+1).
    const S v = w * target.alpha * T::from_fraction(2, (n + 1) * m);
    for (int r = 0; r < m; ++r) detail::append_neuron(net, w, -w * q, v);
    used += m;
  }
  for (int j = used; j < N; ++j) detail::append_inactive_filler(net, target);
  net.c = target.centered_offset();
  net.validate();
  return net;
}

// Builds the leaky kink saddle for orientation sigma with n interior
// breakpoints, together with its structural description. The geometry is
// computed on the unit-slope unit-interval normalization and mapped back to
// the requested target. Leftover neurons become flat neurons with w = 0.
template <typename S>
LeakySaddleResult<S> make_leaky_saddle(int N, const AffineTarget<S>& target,
                                       const S& gamma, int n, int sigma,
                                       std::vector<int> mass_split = {}) {
  using T = ScalarTraits<S>;
  target.validate();
  Activation<S> activation{ActivationKind::LeakyRelu, gamma};
  activation.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");
  detail::require_sloped_target(target, "leaky-saddle");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  if (n < 1) throw std::invalid_argument("breakpoint count must be at least 1");
  const std::vector<int> split = detail::resolve_mass_split(std::move(mass_split), n, N);

  const S zero = T::from_int(0);
  const S one = T::from_int(1);
  const LeakyFamilyGeometry<S> geo = leaky_family_geometry(gamma, n, sigma);
  const std::vector<S>& q = geo.q;
  const std::vector<S>& slope = geo.slope;

  const S length = target.length();
  Network<S> net;
  net.activation = activation;
  int used = 0;
  for (int i = 1; i <= n; ++i) {
    const S w_unit = ((i % 2 == 1) ? one : -one) * T::from_int(sigma);
    const int m = split[static_cast<std::size_t>(i - 1)];
    const S v_unit = w_unit * slope[static_cast<std::size_t>(i - 1)] / T::from_int(m);
    // Map from the normalization back to the requested target: the breakpoint
    // q_i lands at t0 + (t1-t0) q_i and outer weights scale by alpha (t1-t0).
    const S w = w_unit / length;
    const S b = -w * (target.t0 + length * q[static_cast<std::size_t>(i - 1)]);
    const S v = target.alpha * length * v_unit;
    for (int r = 0; r < m; ++r) detail::append_neuron(net, w, b, v);
    used += m;
  }
  for (int j = used; j < N; ++j) detail::append_neuron(net, zero, -one, zero);
  // Normalized center offset 1/2 maps to the centered offset of the target.
  net.c = target.centered_offset();
  net.validate();

  SaddleFamilySpec<S> family;
  family.n = n;
  family.sigma = sigma;
  family.delta = geo.delta;
  family.multiplicity = split;
  for (int i = 0; i < n; ++i) {
    family.breakpoints.push_back(target.t0 + length * q[static_cast<std::size_t>(i)]);
    family.slope_sums.push_back(target.alpha * slope[static_cast<std::size_t>(i)]);
  }
  return LeakySaddleResult<S>{std::move(net), std::move(family)};
}

// Builds a centered quadratic-activation saddle. Every neuron either has
// w = 0 with v*b = 0, or carries v = 0 with its pre-activation root at the
// interval midpoint. The realization is the constant center line.
template <typename S>
Network<S> make_quadratic_saddle(int N, const AffineTarget<S>& target,
                                 std::vector<QuadraticSaddleKind> menu = {}) {
  using T = ScalarTraits<S>;
  target.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");
  detail::require_sloped_target(target, "quadratic-saddle");
  if (static_cast<int>(menu.size()) > N) {
    throw std::invalid_argument("menu assigns more neurons than the network has");
  }
  menu.resize(static_cast<std::size_t>(N), QuadraticSaddleKind::FlatDegenerate);

  const S zero = T::from_int(0);
  const S one = T::from_int(1);
  Network<S> net;
  net.activation = Activation<S>{ActivationKind::Quadratic, zero};
  for (QuadraticSaddleKind kind : menu) {
    switch (kind) {
      case QuadraticSaddleKind::FlatShiftedBias:
        detail::append_neuron(net, zero, one, zero);
        break;
      case QuadraticSaddleKind::ZeroPreactivation:
        detail::append_neuron(net, zero, zero, one);
        break;
      case QuadraticSaddleKind::MidpointRoot:
        detail::append_neuron(net, one, -target.midpoint(), zero);
        break;
      case QuadraticSaddleKind::FlatDegenerate:
        detail::append_neuron(net, zero, zero, zero);
        break;
    }
  }
  net.c = target.centered_offset();
  net.validate();
  return net;
}

// Builds a quadratic-activation network that matches the target exactly: the
// difference of two shifted squares is linear, so two neurons suffice. A flat
// target only needs the offset.
template <typename S>
Network<S> make_quadratic_global_min(int N, const AffineTarget<S>& target) {
  using T = ScalarTraits<S>;
  target.validate();
  if (N < 1) throw std::invalid_argument("network needs at least one neuron");

  const S zero = T::from_int(0);
  const S one = T::from_int(1);
  Network<S> net;
  net.activation = Activation<S>{ActivationKind::Quadratic, zero};
  int used = 0;
  if (T::sign(target.alpha) != 0) {
    if (N < 2) {
      throw std::invalid_argument("matching a sloped target needs at least two neurons");
    }
    // (alpha/4) ((x+1)^2 - (x-1)^2) = alpha x.
    const S quarter_alpha = target.alpha * T::from_fraction(1, 4);
    detail::append_neuron(net, one, one, quarter_alpha);
    detail::append_neuron(net, one, -one, -quarter_alpha);
    used = 2;
  }
  for (int j = used; j < N; ++j) detail::append_neuron(net, zero, zero, zero);
  net.c = target.beta;
  net.validate();
  return net;
}

// Rescales outer parameters so the target slope becomes 1 and the offset 0;
// the loss shrinks by alpha^2.
template <typename S>
Network<S> to_unit_slope(const Network<S>& net, const AffineTarget<S>& target) {
  using T = ScalarTraits<S>;
  if (T::sign(target.alpha) == 0) {
    throw std::domain_error("unit-slope rescaling is undefined for alpha = 0");
  }
  Network<S> out = net;
  for (auto& v : out.v) v = v / target.alpha;
  out.c = (net.c - target.beta) / target.alpha;
  return out;
}

template <typename S>
Network<S> from_unit_slope(const Network<S>& net, const AffineTarget<S>& target) {
  using T = ScalarTraits<S>;
  if (T::sign(target.alpha) == 0) {
    throw std::domain_error("unit-slope rescaling is undefined for alpha = 0");
  }
  Network<S> out = net;
  for (auto& v : out.v) v = v * target.alpha;
  out.c = net.c * target.alpha + target.beta;
  return out;
}

// Reparametrizes inner weights so the interval becomes [0,1]; the loss scales
// by the interval length.
template <typename S>
Network<S> to_unit_interval(const Network<S>& net, const AffineTarget<S>& target) {
  Network<S> out = net;
  const S length = target.length();
  for (int j = 0; j < net.size(); ++j) {
    out.w[j] = length * net.w[j];
    out.b[j] = target.t0 * net.w[j] + net.b[j];
  }
  return out;
}

template <typename S>
Network<S> from_unit_interval(const Network<S>& net, const AffineTarget<S>& target) {
  Network<S> out = net;
  const S length = target.length();
  for (int j = 0; j < net.size(); ++j) {
    out.w[j] = net.w[j] / length;
    out.b[j] = net.b[j] - target.t0 * net.w[j] / length;
  }
  return out;
}

// Expands a leaky network into a plain ReLU network with twice the neurons
// realizing the same function: each neuron j spawns a mirrored partner with
// outer weight -gamma v_j.
template <typename S>
Network<S> make_leaky_duplication(const Network<S>& net) {
  if (net.activation.kind != ActivationKind::LeakyRelu) {
    throw std::invalid_argument("duplication expects a leaky network");
  }
  using T = ScalarTraits<S>;
  Network<S> out;
  out.activation = Activation<S>{ActivationKind::Relu, T::from_int(0)};
  out.c = net.c;
  const int N = net.size();
  out.w.reserve(static_cast<std::size_t>(2 * N));
  out.b.reserve(static_cast<std::size_t>(2 * N));
  out.v.reserve(static_cast<std::size_t>(2 * N));
  for (int j = 0; j < N; ++j) {
    detail::append_neuron(out, net.w[j], net.b[j], net.v[j]);
  }
  for (int j = 0; j < N; ++j) {
    detail::append_neuron(out, -net.w[j], -net.b[j], -net.activation.leak * net.v[j]);
  }
  return out;
}

}  // namespace landscape

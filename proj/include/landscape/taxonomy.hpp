#pragma once

#include <string>
#include <vector>

#include "landscape/model.hpp"

namespace landscape {

enum class NeuronKind {
  Inactive,      // pre-activation negative on the whole interval
  SemiInactive,  // active set is a single endpoint
  SemiActive,    // w = 0 with positive bias: constant positive pre-activation
  Type1Active,   // w != 0, active on the whole interval
  Type2Active,   // breakpoint strictly inside: active on a proper subinterval
  Degenerate     // w = 0 and b = 0
};

inline std::string to_string(NeuronKind k) {
  switch (k) {
    case NeuronKind::Inactive: return "inactive";
    case NeuronKind::SemiInactive: return "semi-inactive";
    case NeuronKind::SemiActive: return "semi-active";
    case NeuronKind::Type1Active: return "type-1-active";
    case NeuronKind::Type2Active: return "type-2-active";
    case NeuronKind::Degenerate: return "degenerate";
  }
  return "?";
}

template <class S>
struct NeuronReport {
  int index = 0;  // 1-based position, for presentation
  NeuronKind kind = NeuronKind::Inactive;
  bool flat = false;  // v == 0 within tolerance
  bool has_active_interval = false;
  S active_lo{};  // meaningful when has_active_interval
  S active_hi{};
  bool has_breakpoint = false;
  S breakpoint{};
};

template <class S>
struct CenterednessReport {
  bool centered = false;
  S expected_offset{};
  S actual_offset{};
};

namespace detail {

// Sign with an absolute snap-to-zero band (band 0 in exact mode).
template <class S>
int snapped_sign(const S& value, double band) {
  if (ScalarTraits<S>::is_zero(value, band)) return 0;
  return ScalarTraits<S>::sign(value);
}

template <class S>
double neuron_scale(const Network<S>& net, int j) {
  double aw = std::fabs(ScalarTraits<S>::to_double(net.w[j]));
  double ab = std::fabs(ScalarTraits<S>::to_double(net.b[j]));
  return std::max(1.0, aw + ab);
}

}  // namespace detail

// Classification of a single neuron against the target interval. The zero
// band for the sign tests is eq_rel * max(1, |w_j| + |b_j|) in float mode and
// exact zero in exact mode. Quadratic-activation networks reuse the same
// geometric labels; only the ReLU-family classifiers consume them.
template <class S>
NeuronReport<S> classify_neuron(const Network<S>& net, int j,
                                const AffineTarget<S>& target,
                                const Tolerances& tol = {}) {
  net.validate();
  target.validate();
  if (j < 0 || j >= net.size()) throw std::invalid_argument("neuron index out of range");
  const double band = ScalarTraits<S>::is_exact
                          ? 0.0
                          : tol.eq_rel * detail::neuron_scale(net, j);
  const S w = net.w[j], b = net.b[j];
  const S t0 = target.t0, t1 = target.t1;
  NeuronReport<S> rep;
  rep.index = j + 1;
  rep.flat = ScalarTraits<S>::is_zero(
      net.v[j], ScalarTraits<S>::is_exact
                    ? 0.0
                    : tol.eq_rel * std::max(1.0, std::fabs(ScalarTraits<S>::to_double(net.v[j]))));
  const int sw = detail::snapped_sign(w, band);
  if (sw == 0) {
    const int sb = detail::snapped_sign(b, band);
    if (sb == 0) {
      rep.kind = NeuronKind::Degenerate;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = t1;
    } else if (sb > 0) {
      rep.kind = NeuronKind::SemiActive;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = t1;
    } else {
      rep.kind = NeuronKind::Inactive;
    }
    return rep;
  }
  rep.has_breakpoint = true;
  rep.breakpoint = -b / w;
  const int s0 = detail::snapped_sign(w * t0 + b, band);
  const int s1 = detail::snapped_sign(w * t1 + b, band);
  if (sw > 0) {
    if (s0 >= 0) {
      rep.kind = NeuronKind::Type1Active;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = t1;
    } else if (s1 < 0) {
      rep.kind = NeuronKind::Inactive;
    } else if (s1 == 0) {
      rep.kind = NeuronKind::SemiInactive;
      rep.has_active_interval = true;
      rep.active_lo = t1;
      rep.active_hi = t1;
    } else {
      rep.kind = NeuronKind::Type2Active;
      rep.has_active_interval = true;
      rep.active_lo = rep.breakpoint;
      rep.active_hi = t1;
    }
  } else {
    if (s1 >= 0) {
      rep.kind = NeuronKind::Type1Active;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = t1;
    } else if (s0 < 0) {
      rep.kind = NeuronKind::Inactive;
    } else if (s0 == 0) {
      rep.kind = NeuronKind::SemiInactive;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = t0;
    } else {
      rep.kind = NeuronKind::Type2Active;
      rep.has_active_interval = true;
      rep.active_lo = t0;
      rep.active_hi = rep.breakpoint;
    }
  }
  return rep;
}

template <class S>
std::vector<NeuronReport<S>> classify_neurons(const Network<S>& net,
                                              const AffineTarget<S>& target,
                                              const Tolerances& tol = {}) {
  std::vector<NeuronReport<S>> out;
  out.reserve(static_cast<size_t>(net.size()));
  for (int j = 0; j < net.size(); ++j) out.push_back(classify_neuron(net, j, target, tol));
  return out;
}

// The output bias is centered when it matches the best constant
// approximation of the target over the interval.
template <class S>
CenterednessReport<S> centeredness(const Network<S>& net, const AffineTarget<S>& target,
                                   const Tolerances& tol = {}) {
  net.validate();
  target.validate();
  CenterednessReport<S> rep;
  rep.expected_offset = target.centered_offset();
  rep.actual_offset = net.c;
  const double band =
      ScalarTraits<S>::is_exact
          ? 0.0
          : tol.eq_rel *
                std::max(1.0, std::fabs(ScalarTraits<S>::to_double(rep.expected_offset)));
  rep.centered = ScalarTraits<S>::is_zero(net.c - rep.expected_offset, band);
  return rep;
}

}  // namespace landscape

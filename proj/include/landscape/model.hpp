#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/numeric.hpp"
#include "landscape/polynomial.hpp"

namespace landscape {

enum class ActivationKind { Relu, LeakyRelu, Quadratic };

inline std::string to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::Relu: return "relu";
    case ActivationKind::LeakyRelu: return "leaky";
    case ActivationKind::Quadratic: return "quadratic";
  }
  return "?";
}

template <class S>
struct Activation {
  ActivationKind kind = ActivationKind::Relu;
  S leak{};  // slope on the negative side; meaningful for LeakyRelu only

  void validate() const {
    if (kind == ActivationKind::LeakyRelu) {
      if (!(ScalarTraits<S>::sign(leak) > 0 &&
            ScalarTraits<S>::sign(leak - ScalarTraits<S>::from_int(1)) < 0))
        throw std::invalid_argument("activation.gamma must lie strictly between 0 and 1");
    }
  }

  S operator()(const S& p) const {
    switch (kind) {
      case ActivationKind::Relu:
        return ScalarTraits<S>::sign(p) > 0 ? p : S{};
      case ActivationKind::LeakyRelu:
        return ScalarTraits<S>::sign(p) >= 0 ? p : leak * p;
      case ActivationKind::Quadratic:
        return p * p;
    }
    return S{};
  }
};

template <class S>
struct AffineTarget {
  S alpha{};  // slope
  S beta{};   // offset
  S t0{};
  S t1{};

  void validate() const {
    if (!(ScalarTraits<S>::finite(alpha) && ScalarTraits<S>::finite(beta) &&
          ScalarTraits<S>::finite(t0) && ScalarTraits<S>::finite(t1)))
      throw std::invalid_argument("target fields must be finite");
    if (!(t0 < t1)) throw std::invalid_argument("target requires t0 < t1");
  }

  S length() const { return t1 - t0; }
  S midpoint() const { return (t0 + t1) / ScalarTraits<S>::from_int(2); }
  // Offset of the best constant approximation of the target on [t0, t1].
  S centered_offset() const {
    return alpha / ScalarTraits<S>::from_int(2) * (t0 + t1) + beta;
  }
  S operator()(const S& x) const { return alpha * x + beta; }
};

// One-hidden-layer network x -> c + sum_j v_j * act(w_j x + b_j).
template <class S>
struct Network {
  Activation<S> activation;
  std::vector<S> w, b, v;
  S c{};

  int size() const { return static_cast<int>(w.size()); }

  void validate() const {
    activation.validate();
    if (w.empty()) throw std::invalid_argument("network needs at least one neuron (w is empty)");
    if (w.size() != b.size() || w.size() != v.size())
      throw std::invalid_argument("w/b/v lengths disagree");
    for (const S& x : w)
      if (!ScalarTraits<S>::finite(x)) throw std::invalid_argument("w entries must be finite");
    for (const S& x : b)
      if (!ScalarTraits<S>::finite(x)) throw std::invalid_argument("b entries must be finite");
    for (const S& x : v)
      if (!ScalarTraits<S>::finite(x)) throw std::invalid_argument("v entries must be finite");
    if (!ScalarTraits<S>::finite(c)) throw std::invalid_argument("c must be finite");
  }

  S evaluate(const S& x) const {
    Accumulator<S> acc;
    acc.add(c);
    for (int j = 0; j < size(); ++j) acc.add(v[j] * activation(w[j] * x + b[j]));
    return acc.total();
  }
};

// Piecewise-polynomial representation on [knots.front(), knots.back()];
// pieces[i] applies on [knots[i], knots[i+1]].
template <class S>
struct PiecewiseForm {
  std::vector<S> knots;
  std::vector<Polynomial<S>> pieces;

  S domain_lo() const { return knots.front(); }
  S domain_hi() const { return knots.back(); }

  S evaluate(const S& x) const {
    if (x < knots.front() || x > knots.back())
      throw std::domain_error("evaluation point outside the target interval");
    // Pieces agree at shared knots for realizations of continuous networks,
    // so any containing segment works.
    int idx = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), x) -
                               knots.begin()) - 1;
    if (idx < 0) idx = 0;
    if (idx >= static_cast<int>(pieces.size())) idx = static_cast<int>(pieces.size()) - 1;
    return pieces[static_cast<size_t>(idx)](x);
  }
};

// Closed-form realization of the network on [t0, t1]: splits at the
// breakpoints that fall strictly inside and writes one polynomial per piece.
template <class S>
PiecewiseForm<S> realize(const Network<S>& net, const AffineTarget<S>& target,
                         const Tolerances& tol = {}) {
  net.validate();
  target.validate();
  const S t0 = target.t0, t1 = target.t1;
  std::vector<S> knots;
  knots.push_back(t0);
  if (net.activation.kind != ActivationKind::Quadratic) {
    for (int j = 0; j < net.size(); ++j) {
      if (ScalarTraits<S>::sign(net.w[j]) == 0) continue;
      S t = -net.b[j] / net.w[j];
      if (t > t0 && t < t1) knots.push_back(t);
    }
  }
  knots.push_back(t1);
  std::sort(knots.begin(), knots.end());
  // Merge knots that coincide (exactly in exact mode; within a relative
  // tolerance of the interval length in float mode).
  const double merge_eps =
      ScalarTraits<S>::is_exact
          ? 0.0
          : tol.knot_rel * ScalarTraits<S>::to_double(t1 - t0);
  std::vector<S> merged;
  merged.push_back(knots.front());
  for (size_t i = 1; i + 1 < knots.size(); ++i) {
    if (!ScalarTraits<S>::is_zero(knots[i] - merged.back(), merge_eps) &&
        !ScalarTraits<S>::is_zero(t1 - knots[i], merge_eps))
      merged.push_back(knots[i]);
  }
  merged.push_back(t1);

  PiecewiseForm<S> form;
  form.knots = merged;
  const S two = ScalarTraits<S>::from_int(2);
  for (size_t i = 0; i + 1 < merged.size(); ++i) {
    S mid = (merged[i] + merged[i + 1]) / two;
    Polynomial<S> piece(net.c);
    for (int j = 0; j < net.size(); ++j) {
      Polynomial<S> pre = Polynomial<S>::affine(net.w[j], net.b[j]);
      switch (net.activation.kind) {
        case ActivationKind::Relu: {
          if (ScalarTraits<S>::sign(net.w[j] * mid + net.b[j]) > 0)
            piece += net.v[j] * pre;
          break;
        }
        case ActivationKind::LeakyRelu: {
          if (ScalarTraits<S>::sign(net.w[j] * mid + net.b[j]) >= 0)
            piece += net.v[j] * pre;
          else
            piece += (net.v[j] * net.activation.leak) * pre;
          break;
        }
        case ActivationKind::Quadratic:
          piece += net.v[j] * (pre * pre);
          break;
      }
    }
    form.pieces.push_back(piece);
  }
  return form;
}

// Realization minus the target line, piece by piece.
template <class S>
PiecewiseForm<S> residual_form(const Network<S>& net, const AffineTarget<S>& target,
                               const Tolerances& tol = {}) {
  PiecewiseForm<S> form = realize(net, target, tol);
  Polynomial<S> line = Polynomial<S>::affine(target.alpha, target.beta);
  for (auto& p : form.pieces) p -= line;
  return form;
}

}  // namespace landscape

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/matrix.hpp"
#include "landscape/model.hpp"
#include "landscape/taxonomy.hpp"

namespace landscape {

template <class S>
struct Gradient {
  std::vector<S> dw, db, dv;
  S dc{};
};

template <class S>
double gradient_inf_norm(const Gradient<S>& g) {
  double m = std::fabs(ScalarTraits<S>::to_double(g.dc));
  for (const S& x : g.dw) m = std::max(m, std::fabs(ScalarTraits<S>::to_double(x)));
  for (const S& x : g.db) m = std::max(m, std::fabs(ScalarTraits<S>::to_double(x)));
  for (const S& x : g.dv) m = std::max(m, std::fabs(ScalarTraits<S>::to_double(x)));
  return m;
}

enum class SmoothnessClass {
  Analytic,
  TwiceContinuously,   // C2 but not smooth: a kink sits strictly inside
  OnceContinuously,    // C1 only: a kink sits on the interval boundary
  DifferentiableOnly,  // differentiable but not continuously so
  RightHandOnly        // only one-sided partials exist
};

inline std::string to_string(SmoothnessClass c) {
  switch (c) {
    case SmoothnessClass::Analytic: return "analytic";
    case SmoothnessClass::TwiceContinuously: return "C2";
    case SmoothnessClass::OnceContinuously: return "C1";
    case SmoothnessClass::DifferentiableOnly: return "differentiable";
    case SmoothnessClass::RightHandOnly: return "right-hand-only";
  }
  return "?";
}

template <class S>
struct DifferentiabilityReport {
  std::vector<SmoothnessClass> w, b, v;
  SmoothnessClass c = SmoothnessClass::Analytic;
};

struct Coordinate {
  enum class Kind { Weight, Bias, OuterWeight, OuterBias };
  Kind kind = Kind::OuterBias;
  int neuron = 0;  // 0-based; ignored for OuterBias

  static Coordinate w(int j) { return {Kind::Weight, j}; }
  static Coordinate b(int j) { return {Kind::Bias, j}; }
  static Coordinate v(int j) { return {Kind::OuterWeight, j}; }
  static Coordinate c() { return {Kind::OuterBias, 0}; }
};

inline std::string to_string(const Coordinate& c) {
  switch (c.kind) {
    case Coordinate::Kind::Weight: return "w" + std::to_string(c.neuron + 1);
    case Coordinate::Kind::Bias: return "b" + std::to_string(c.neuron + 1);
    case Coordinate::Kind::OuterWeight: return "v" + std::to_string(c.neuron + 1);
    case Coordinate::Kind::OuterBias: return "c";
  }
  return "?";
}

namespace detail {

// Active part {pre-activation >= 0} of [t0, t1] and its complement, decided
// with exact comparisons: gradient geometry never snaps.
template <class S>
struct SupportIntervals {
  bool active = false;
  S active_lo{}, active_hi{};
  bool comp = false;
  S comp_lo{}, comp_hi{};
};

template <class S>
SupportIntervals<S> exact_support(const S& w, const S& b, const S& t0, const S& t1) {
  SupportIntervals<S> s;
  const int sw = ScalarTraits<S>::sign(w);
  if (sw == 0) {
    if (ScalarTraits<S>::sign(b) >= 0) {
      s.active = true;
      s.active_lo = t0;
      s.active_hi = t1;
    } else {
      s.comp = true;
      s.comp_lo = t0;
      s.comp_hi = t1;
    }
    return s;
  }
  const S t = -b / w;
  if (sw > 0) {
    if (t <= t0) {
      s.active = true;
      s.active_lo = t0;
      s.active_hi = t1;
    } else if (t >= t1) {
      s.comp = true;
      s.comp_lo = t0;
      s.comp_hi = t1;
    } else {
      s.active = true;
      s.active_lo = t;
      s.active_hi = t1;
      s.comp = true;
      s.comp_lo = t0;
      s.comp_hi = t;
    }
  } else {
    if (t >= t1) {
      s.active = true;
      s.active_lo = t0;
      s.active_hi = t1;
    } else if (t <= t0) {
      s.comp = true;
      s.comp_lo = t0;
      s.comp_hi = t1;
    } else {
      s.active = true;
      s.active_lo = t0;
      s.active_hi = t;
      s.comp = true;
      s.comp_lo = t;
      s.comp_hi = t1;
    }
  }
  return s;
}

// Integral of x^m * f(x) over [lo, hi] against a piecewise form.
template <class S>
S form_moment(const PiecewiseForm<S>& f, int m, const S& lo, const S& hi) {
  if (!(lo < hi)) return S{};
  Accumulator<S> acc;
  const size_t n = f.pieces.size();
  for (size_t i = 0; i < n; ++i) {
    const S& a = f.knots[i];
    const S& b = f.knots[i + 1];
    if (!(b > lo)) continue;
    if (!(a < hi)) break;
    const S clo = (a > lo) ? a : lo;
    const S chi = (b < hi) ? b : hi;
    if (clo < chi) acc.add(f.pieces[i].moment(m, clo, chi));
  }
  return acc.total();
}

template <class S>
NeuronReport<S> exact_neuron_report(const Network<S>& net, int j,
                                    const AffineTarget<S>& target) {
  Tolerances zero_band;
  zero_band.eq_rel = 0.0;
  return classify_neuron(net, j, target, zero_band);
}

}  // namespace detail

// True integral of (f - target)^2 over the target interval.
template <class S>
S loss(const Network<S>& net, const AffineTarget<S>& target, const Tolerances& tol = {}) {
  PiecewiseForm<S> res = residual_form(net, target, tol);
  Accumulator<S> acc;
  for (size_t i = 0; i < res.pieces.size(); ++i)
    acc.add((res.pieces[i] * res.pieces[i]).definite_integral(res.knots[i], res.knots[i + 1]));
  return acc.total();
}

// Vector of right-hand partial derivatives. Away from degenerate neurons the
// loss is differentiable in each coordinate and this is the plain gradient.
// At a degenerate neuron (w_j = b_j = 0 exactly, ReLU family) the one-sided
// derivative in w_j splits the integral at x = 0: growing w from 0 activates
// the positive half-line first, and the negative half-line only contributes
// through the leak. The b_j partial uses the whole interval either way.
template <class S>
Gradient<S> generalized_gradient(const Network<S>& net, const AffineTarget<S>& target,
                                 const Tolerances& tol = {}) {
  net.validate();
  target.validate();
  PiecewiseForm<S> res = residual_form(net, target, tol);
  const int n = net.size();
  const S t0 = target.t0, t1 = target.t1;
  const S two = ScalarTraits<S>::from_int(2);
  Gradient<S> g;
  g.dw.resize(n);
  g.db.resize(n);
  g.dv.resize(n);
  g.dc = two * detail::form_moment(res, 0, t0, t1);

  if (net.activation.kind == ActivationKind::Quadratic) {
    const S m0 = detail::form_moment(res, 0, t0, t1);
    const S m1 = detail::form_moment(res, 1, t0, t1);
    const S m2 = detail::form_moment(res, 2, t0, t1);
    const S four = ScalarTraits<S>::from_int(4);
    for (int j = 0; j < n; ++j) {
      const S w = net.w[j], b = net.b[j], v = net.v[j];
      g.dw[j] = four * v * (w * m2 + b * m1);
      g.db[j] = four * v * (w * m1 + b * m0);
      g.dv[j] = two * (w * w * m2 + two * w * b * m1 + b * b * m0);
    }
    return g;
  }

  const bool leaky = net.activation.kind == ActivationKind::LeakyRelu;
  const S leak = leaky ? net.activation.leak : S{};
  for (int j = 0; j < n; ++j) {
    const S w = net.w[j], b = net.b[j], v = net.v[j];
    const auto sup = detail::exact_support(w, b, t0, t1);
    S m1a{}, m0a{}, m1c{}, m0c{};
    if (sup.active) {
      m1a = detail::form_moment(res, 1, sup.active_lo, sup.active_hi);
      m0a = detail::form_moment(res, 0, sup.active_lo, sup.active_hi);
    }
    if (leaky && sup.comp) {
      m1c = detail::form_moment(res, 1, sup.comp_lo, sup.comp_hi);
      m0c = detail::form_moment(res, 0, sup.comp_lo, sup.comp_hi);
    }
    const S m1 = leaky ? m1a + leak * m1c : m1a;
    const S m0 = leaky ? m0a + leak * m0c : m0a;
    g.dw[j] = two * v * m1;
    g.db[j] = two * v * m0;
    g.dv[j] = two * (w * m1 + b * m0);
    if (ScalarTraits<S>::sign(w) == 0 && ScalarTraits<S>::sign(b) == 0) {
      // Degenerate neuron: replace the w entry by the true one-sided limit.
      const S zero{};
      S pos{}, neg{};
      if (t1 > zero) {
        const S lo = (t0 > zero) ? t0 : zero;
        pos = detail::form_moment(res, 1, lo, t1);
      }
      if (t0 < zero) {
        const S hi = (t1 < zero) ? t1 : zero;
        neg = detail::form_moment(res, 1, t0, hi);
      }
      g.dw[j] = two * v * (leaky ? pos + leak * neg : pos);
    }
  }
  return g;
}

// Smoothness of the loss in each coordinate near the given point, decided by
// the exact geometry (no tolerance snapping): outer-layer coordinates are
// always analytic; a ReLU-family pair (w_j, b_j) degrades as the neuron's
// kink approaches, touches, or enters the interval, and a degenerate neuron
// destroys continuous differentiability (one-sided only when it still feeds
// the output).
template <class S>
DifferentiabilityReport<S> differentiability_report(const Network<S>& net,
                                                    const AffineTarget<S>& target) {
  net.validate();
  target.validate();
  DifferentiabilityReport<S> rep;
  const int n = net.size();
  rep.w.assign(n, SmoothnessClass::Analytic);
  rep.b.assign(n, SmoothnessClass::Analytic);
  rep.v.assign(n, SmoothnessClass::Analytic);
  rep.c = SmoothnessClass::Analytic;
  if (net.activation.kind == ActivationKind::Quadratic) return rep;
  for (int j = 0; j < n; ++j) {
    const auto neuron = detail::exact_neuron_report(net, j, target);
    SmoothnessClass cls = SmoothnessClass::Analytic;
    switch (neuron.kind) {
      case NeuronKind::Inactive:
      case NeuronKind::SemiActive:
        cls = SmoothnessClass::Analytic;
        break;
      case NeuronKind::Type1Active: {
        // Fully active, but a breakpoint sitting exactly on an endpoint is
        // one perturbation away from entering the interval.
        const bool on_edge =
            ScalarTraits<S>::sign(net.w[j] * target.t0 + net.b[j]) == 0 ||
            ScalarTraits<S>::sign(net.w[j] * target.t1 + net.b[j]) == 0;
        cls = on_edge ? SmoothnessClass::OnceContinuously : SmoothnessClass::Analytic;
        break;
      }
      case NeuronKind::SemiInactive:
        cls = SmoothnessClass::OnceContinuously;
        break;
      case NeuronKind::Type2Active:
        cls = SmoothnessClass::TwiceContinuously;
        break;
      case NeuronKind::Degenerate:
        cls = (ScalarTraits<S>::sign(net.v[j]) == 0)
                  ? SmoothnessClass::DifferentiableOnly
                  : SmoothnessClass::RightHandOnly;
        break;
    }
    rep.w[j] = cls;
    rep.b[j] = cls;
  }
  return rep;
}

namespace detail {

template <class S>
struct WeightedRegion {
  bool present = false;
  S lo{}, hi{};
  S weight{};
};

// Basis data for one Hessian coordinate of a ReLU-family network: the factor
// polynomial and the weighted regions the activation derivative induces.
template <class S>
struct HessianBasis {
  Polynomial<S> factor;
  WeightedRegion<S> regions[2];
};

template <class S>
HessianBasis<S> relu_basis(const Network<S>& net, const Coordinate& coord,
                           const AffineTarget<S>& target, const S& leak) {
  HessianBasis<S> basis;
  const S one = ScalarTraits<S>::from_int(1);
  if (coord.kind == Coordinate::Kind::OuterBias) {
    basis.factor = Polynomial<S>(one);
    basis.regions[0] = {true, target.t0, target.t1, one};
    return basis;
  }
  const int j = coord.neuron;
  switch (coord.kind) {
    case Coordinate::Kind::Weight:
      basis.factor = Polynomial<S>(S{}, net.v[j]);
      break;
    case Coordinate::Kind::Bias:
      basis.factor = Polynomial<S>(net.v[j]);
      break;
    case Coordinate::Kind::OuterWeight:
      basis.factor = Polynomial<S>(net.b[j], net.w[j]);
      break;
    default:
      break;
  }
  const auto sup = exact_support(net.w[j], net.b[j], target.t0, target.t1);
  if (sup.active) basis.regions[0] = {true, sup.active_lo, sup.active_hi, one};
  if (sup.comp && ScalarTraits<S>::sign(leak) != 0)
    basis.regions[1] = {true, sup.comp_lo, sup.comp_hi, leak};
  return basis;
}

template <class S>
Polynomial<S> quad_basis_poly(const Network<S>& net, const Coordinate& coord) {
  const S two = ScalarTraits<S>::from_int(2);
  if (coord.kind == Coordinate::Kind::OuterBias)
    return Polynomial<S>(ScalarTraits<S>::from_int(1));
  const int j = coord.neuron;
  const S w = net.w[j], b = net.b[j], v = net.v[j];
  Polynomial<S> p;
  switch (coord.kind) {
    case Coordinate::Kind::Weight:  // 2 v x (w x + b)
      p.set_coefficient(1, two * v * b);
      p.set_coefficient(2, two * v * w);
      break;
    case Coordinate::Kind::Bias:  // 2 v (w x + b)
      p.set_coefficient(0, two * v * b);
      p.set_coefficient(1, two * v * w);
      break;
    case Coordinate::Kind::OuterWeight:  // (w x + b)^2
      p.set_coefficient(0, b * b);
      p.set_coefficient(1, two * w * b);
      p.set_coefficient(2, w * w);
      break;
    default:
      break;
  }
  return p;
}

}  // namespace detail

// Hessian of the loss restricted to the requested coordinates. Every
// coordinate must be one in which the loss is twice continuously
// differentiable at this point (see differentiability_report); otherwise a
// domain error is thrown. Kinks strictly inside the interval contribute the
// boundary terms that moving a breakpoint induces.
template <class S>
Matrix<S> restricted_hessian(const Network<S>& net, const AffineTarget<S>& target,
                             const std::vector<Coordinate>& coords,
                             const Tolerances& tol = {}) {
  net.validate();
  target.validate();
  const int n = net.size();
  for (size_t i = 0; i < coords.size(); ++i) {
    const auto& c = coords[i];
    if (c.kind != Coordinate::Kind::OuterBias && (c.neuron < 0 || c.neuron >= n))
      throw std::invalid_argument("hessian coordinate neuron index out of range");
    for (size_t k = i + 1; k < coords.size(); ++k)
      if (coords[k].kind == c.kind &&
          (c.kind == Coordinate::Kind::OuterBias || coords[k].neuron == c.neuron))
        throw std::invalid_argument("duplicate hessian coordinate");
  }
  const auto smooth = differentiability_report(net, target);
  for (const auto& c : coords) {
    SmoothnessClass cls = SmoothnessClass::Analytic;
    if (c.kind == Coordinate::Kind::Weight) cls = smooth.w[c.neuron];
    if (c.kind == Coordinate::Kind::Bias) cls = smooth.b[c.neuron];
    if (cls != SmoothnessClass::Analytic && cls != SmoothnessClass::TwiceContinuously)
      throw std::domain_error("loss is not twice differentiable in coordinate " +
                              to_string(c));
  }

  PiecewiseForm<S> res = residual_form(net, target, tol);
  const int dim = static_cast<int>(coords.size());
  Matrix<S> h(dim, dim);
  const S two = ScalarTraits<S>::from_int(2);
  const S t0 = target.t0, t1 = target.t1;

  if (net.activation.kind == ActivationKind::Quadratic) {
    const S m0 = detail::form_moment(res, 0, t0, t1);
    const S m1 = detail::form_moment(res, 1, t0, t1);
    const S m2 = detail::form_moment(res, 2, t0, t1);
    std::vector<Polynomial<S>> phi;
    phi.reserve(coords.size());
    for (const auto& c : coords) phi.push_back(detail::quad_basis_poly(net, c));
    for (int a = 0; a < dim; ++a) {
      for (int bb = a; bb < dim; ++bb) {
        S entry = two * (phi[a] * phi[bb]).definite_integral(t0, t1);
        const auto &ca = coords[a], &cb = coords[bb];
        if (ca.kind != Coordinate::Kind::OuterBias &&
            cb.kind != Coordinate::Kind::OuterBias && ca.neuron == cb.neuron) {
          using K = Coordinate::Kind;
          const S w = net.w[ca.neuron], b = net.b[ca.neuron], v = net.v[ca.neuron];
          const S four = ScalarTraits<S>::from_int(4);
          auto pair_is = [&](K x, K y) {
            return (ca.kind == x && cb.kind == y) || (ca.kind == y && cb.kind == x);
          };
          if (pair_is(K::Weight, K::Weight)) entry += four * v * m2;
          else if (pair_is(K::Weight, K::Bias)) entry += four * v * m1;
          else if (pair_is(K::Bias, K::Bias)) entry += four * v * m0;
          else if (pair_is(K::Weight, K::OuterWeight)) entry += four * (w * m2 + b * m1);
          else if (pair_is(K::Bias, K::OuterWeight)) entry += four * (w * m1 + b * m0);
        }
        h(a, bb) = entry;
        h(bb, a) = entry;
      }
    }
    return h;
  }

  const bool leaky = net.activation.kind == ActivationKind::LeakyRelu;
  const S leak = leaky ? net.activation.leak : S{};
  std::vector<detail::HessianBasis<S>> basis;
  basis.reserve(coords.size());
  for (const auto& c : coords) basis.push_back(detail::relu_basis(net, c, target, leak));

  for (int a = 0; a < dim; ++a) {
    for (int bb = a; bb < dim; ++bb) {
      Accumulator<S> acc;
      for (const auto& ra : basis[a].regions) {
        if (!ra.present) continue;
        for (const auto& rb : basis[bb].regions) {
          if (!rb.present) continue;
          const S lo = (ra.lo > rb.lo) ? ra.lo : rb.lo;
          const S hi = (ra.hi < rb.hi) ? ra.hi : rb.hi;
          if (lo < hi)
            acc.add(ra.weight * rb.weight *
                    (basis[a].factor * basis[bb].factor).definite_integral(lo, hi));
        }
      }
      S entry = two * acc.total();
      const auto &ca = coords[a], &cb = coords[bb];
      if (ca.kind != Coordinate::Kind::OuterBias &&
          cb.kind != Coordinate::Kind::OuterBias && ca.neuron == cb.neuron) {
        using K = Coordinate::Kind;
        const int j = ca.neuron;
        auto pair_is = [&](K x, K y) {
          return (ca.kind == x && cb.kind == y) || (ca.kind == y && cb.kind == x);
        };
        const auto sup = detail::exact_support(net.w[j], net.b[j], t0, t1);
        auto weighted_moment = [&](int m) {
          S ma{}, mc{};
          if (sup.active) ma = detail::form_moment(res, m, sup.active_lo, sup.active_hi);
          if (leaky && sup.comp) mc = detail::form_moment(res, m, sup.comp_lo, sup.comp_hi);
          return leaky ? ma + leak * mc : ma;
        };
        if (pair_is(K::OuterWeight, K::Weight)) entry += two * weighted_moment(1);
        if (pair_is(K::OuterWeight, K::Bias)) entry += two * weighted_moment(0);
        const bool inner_pair = ca.kind != K::OuterWeight && cb.kind != K::OuterWeight;
        if (inner_pair) {
          const auto neuron = detail::exact_neuron_report(net, j, target);
          if (neuron.kind == NeuronKind::Type2Active) {
            // Moving the kink shifts the integration boundary: the jump of
            // the activation derivative contributes at the breakpoint.
            const S t = -net.b[j] / net.w[j];
            const S rt = res.evaluate(t);
            const S jump = ScalarTraits<S>::from_int(1) - leak;
            S base = two * jump * net.v[j] * rt / ScalarTraits<S>::abs(net.w[j]);
            if (pair_is(K::Weight, K::Bias)) base *= t;
            else if (pair_is(K::Weight, K::Weight)) base *= t * t;
            entry += base;
          }
        }
      }
      h(a, bb) = entry;
      h(bb, a) = entry;
    }
  }
  return h;
}

}  // namespace landscape

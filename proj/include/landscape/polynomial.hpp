#pragma once

#include <array>
#include <stdexcept>

#include "landscape/numeric.hpp"

namespace landscape {

// Dense polynomial with a small fixed capacity (degree <= 7). Everything the
// toolkit integrates is a product of at most two quadratics times a monomial,
// so the cap is never hit in well-formed code and keeps evaluation heap-free.
template <class S>
class Polynomial {
 public:
  static constexpr int kCapacity = 8;

  Polynomial() : size_(1) { coef_.fill(S{}); }
  explicit Polynomial(const S& constant) : size_(1) {
    coef_.fill(S{});
    coef_[0] = constant;
  }
  Polynomial(const S& constant, const S& linear) : size_(2) {
    coef_.fill(S{});
    coef_[0] = constant;
    coef_[1] = linear;
  }

  static Polynomial affine(const S& slope, const S& offset) {
    return Polynomial(offset, slope);
  }

  int degree() const { return size_ - 1; }

  const S& coefficient(int power) const {
    static const S zero{};
    return power < size_ ? coef_[power] : zero;
  }

  void set_coefficient(int power, const S& value) {
    if (power >= kCapacity) throw std::length_error("polynomial degree cap exceeded");
    if (power >= size_) size_ = power + 1;
    coef_[power] = value;
  }

  S operator()(const S& x) const {
    S acc = coef_[size_ - 1];
    for (int k = size_ - 2; k >= 0; --k) acc = acc * x + coef_[k];
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.size_ > size_) size_ = o.size_;
    for (int k = 0; k < o.size_; ++k) coef_[k] += o.coef_[k];
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.size_ > size_) size_ = o.size_;
    for (int k = 0; k < o.size_; ++k) coef_[k] -= o.coef_[k];
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  Polynomial& operator*=(const S& factor) {
    for (int k = 0; k < size_; ++k) coef_[k] *= factor;
    return *this;
  }
  friend Polynomial operator*(Polynomial a, const S& f) { return a *= f; }
  friend Polynomial operator*(const S& f, Polynomial a) { return a *= f; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.size_ + b.size_ - 1 > kCapacity)
      throw std::length_error("polynomial degree cap exceeded");
    Polynomial r;
    r.size_ = a.size_ + b.size_ - 1;
    for (int i = 0; i < a.size_; ++i)
      for (int j = 0; j < b.size_; ++j) r.coef_[i + j] += a.coef_[i] * b.coef_[j];
    return r;
  }

  // Integral of x^m * p(x) over [lo, hi], exact in the scalar type.
  S moment(int m, const S& lo, const S& hi) const {
    S lo_pow = power(lo, m + 1);
    S hi_pow = power(hi, m + 1);
    Accumulator<S> acc;
    for (int k = 0; k < size_; ++k) {
      // advance to x^(k+m+1) lazily
      if (k > 0) {
        lo_pow *= lo;
        hi_pow *= hi;
      }
      acc.add(coef_[k] * (hi_pow - lo_pow) / ScalarTraits<S>::from_int(k + m + 1));
    }
    return acc.total();
  }

  S definite_integral(const S& lo, const S& hi) const { return moment(0, lo, hi); }

 private:
  static S power(const S& x, int n) {
    S r = ScalarTraits<S>::from_int(1);
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  std::array<S, kCapacity> coef_;
  int size_;
};

}  // namespace landscape

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace landscape {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Tolerance knobs shared across the toolkit. All structural and gradient
// comparisons in float mode go through these; exact mode ignores them and
// compares with true equality.
struct Tolerances {
  double knot_rel = 1e-12;    // knot dedup, relative to the interval length
  double eq_rel = 1e-11;      // neuron sign tests, relative to max(1,|w|+|b|)
  double struct_rel = 1e-9;   // structural pattern matching (lattices, sums)
  double grad_abs = 1e-10;    // gradient-consistency bound after scaling
};

// Value in the field Q(sqrt(d)): base + radical_coeff * sqrt(radicand).
// Invariants: radicand >= 0; radical_coeff == 0 iff radicand == 0; the
// radicand carries no square factor small enough for trial division to find.
// Only one radical per value; combining values over different radicals throws.
class ExactScalar {
 public:
  ExactScalar() : base_(0), radical_coeff_(0), radicand_(0) {}
  ExactScalar(int v) : base_(v), radical_coeff_(0), radicand_(0) {}
  ExactScalar(long long v) : base_(v), radical_coeff_(0), radicand_(0) {}
  explicit ExactScalar(const Rational& v)
      : base_(v), radical_coeff_(0), radicand_(0) {}
  ExactScalar(const Rational& base, const Rational& coeff, const BigInt& rad)
      : base_(base), radical_coeff_(coeff), radicand_(rad) {
    normalize();
  }

  static ExactScalar from_fraction(long long num, long long den) {
    if (den == 0) throw std::domain_error("fraction with zero denominator");
    return ExactScalar(Rational(num, den));
  }

  const Rational& base() const { return base_; }
  const Rational& radical_coeff() const { return radical_coeff_; }
  const BigInt& radicand() const { return radicand_; }
  bool is_rational() const { return radical_coeff_ == 0; }

  // Exact sign: for a + b*sqrt(d) with a, b of opposite signs, compare a^2
  // against b^2 d (valid because d is never a perfect square here).
  int sign() const {
    int sa = sign_of(base_);
    if (radical_coeff_ == 0) return sa;
    int sb = sign_of(radical_coeff_);
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rational a2 = base_ * base_;
    Rational b2d = radical_coeff_ * radical_coeff_ * Rational(radicand_);
    if (a2 == b2d) return 0;  // unreachable for non-square radicand
    return (a2 > b2d) ? sa : sb;
  }

  ExactScalar operator-() const {
    ExactScalar r;
    r.base_ = -base_;
    r.radical_coeff_ = -radical_coeff_;
    r.radicand_ = radicand_;
    return r;
  }

  ExactScalar& operator+=(const ExactScalar& o) {
    BigInt d = merged_radicand(o);
    base_ += o.base_;
    radical_coeff_ += o.radical_coeff_;
    radicand_ = d;
    if (radical_coeff_ == 0) radicand_ = 0;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) { return *this += (-o); }

  ExactScalar& operator*=(const ExactScalar& o) {
    BigInt d = merged_radicand(o);
    Rational nb = base_ * o.base_;
    if (radical_coeff_ != 0 && o.radical_coeff_ != 0)
      nb += radical_coeff_ * o.radical_coeff_ * Rational(d);
    Rational nc = base_ * o.radical_coeff_ + radical_coeff_ * o.base_;
    base_ = nb;
    radical_coeff_ = nc;
    radicand_ = (nc == 0) ? BigInt(0) : d;
    return *this;
  }

  ExactScalar& operator/=(const ExactScalar& o) {
    if (o.base_ == 0 && o.radical_coeff_ == 0)
      throw std::domain_error("division by zero");
    BigInt d = merged_radicand(o);
    // Multiply by the conjugate of the divisor.
    Rational denom =
        o.base_ * o.base_ - o.radical_coeff_ * o.radical_coeff_ * Rational(d);
    ExactScalar conj;
    conj.base_ = o.base_;
    conj.radical_coeff_ = -o.radical_coeff_;
    conj.radicand_ = (o.radical_coeff_ == 0) ? BigInt(0) : d;
    *this *= conj;
    base_ /= denom;
    radical_coeff_ /= denom;
    if (radical_coeff_ == 0) radicand_ = 0;
    return *this;
  }

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return (a - b).sign() == 0;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
  friend bool operator<(const ExactScalar& a, const ExactScalar& b) {
    return (a - b).sign() < 0;
  }
  friend bool operator>(const ExactScalar& a, const ExactScalar& b) { return b < a; }
  friend bool operator<=(const ExactScalar& a, const ExactScalar& b) { return !(b < a); }
  friend bool operator>=(const ExactScalar& a, const ExactScalar& b) { return !(a < b); }

  double to_double() const {
    double r = base_.convert_to<double>();
    if (radical_coeff_ != 0)
      r += radical_coeff_.convert_to<double>() *
           std::sqrt(radicand_.convert_to<double>());
    return r;
  }

  // Exact square root of a nonnegative rational value. Perfect squares give a
  // rational result; otherwise the square part is extracted and the remainder
  // becomes the radicand. Values that already carry a radical are rejected
  // (no nested or mixed radicals).
  ExactScalar sqrt_value() const {
    if (radical_coeff_ != 0)
      throw std::domain_error(
          "square root of a value that already carries a radical");
    int s = sign_of(base_);
    if (s < 0) throw std::domain_error("square root of a negative value");
    if (s == 0) return ExactScalar();
    BigInt num = boost::multiprecision::numerator(base_);
    BigInt den = boost::multiprecision::denominator(base_);
    BigInt m = num * den;  // sqrt(num/den) = sqrt(num*den)/den
    BigInt square_part(1), rest(1);
    split_square(m, square_part, rest);
    if (rest == 1) return ExactScalar(Rational(square_part, den));
    ExactScalar r;
    r.base_ = 0;
    r.radical_coeff_ = Rational(square_part, den);
    r.radicand_ = rest;
    return r;
  }

  std::string to_string() const {
    std::string s = rational_to_string(base_);
    if (radical_coeff_ != 0) {
      Rational c = radical_coeff_;
      if (c > 0) {
        s += "+";
      } else {
        s += "-";
        c = -c;
      }
      s += rational_to_string(c) + "*sqrt(" + radicand_.str() + ")";
    }
    return s;
  }

  static std::string rational_to_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }

 private:
  Rational base_;
  Rational radical_coeff_;
  BigInt radicand_;

  static int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
  }

  BigInt merged_radicand(const ExactScalar& o) const {
    if (radical_coeff_ == 0) return o.radicand_;
    if (o.radical_coeff_ == 0) return radicand_;
    if (radicand_ == o.radicand_) return radicand_;
    throw std::domain_error(
        "arithmetic would mix two different radicals; the exact mode supports "
        "a single quadratic extension");
  }

  void normalize() {
    if (radicand_ < 0) throw std::domain_error("negative radicand");
    if (radical_coeff_ == 0) {
      radicand_ = 0;
      return;
    }
    if (radicand_ == 0) {
      radical_coeff_ = 0;
      return;
    }
    BigInt square_part(1), rest(1);
    split_square(radicand_, square_part, rest);
    if (rest == 1) {
      base_ += radical_coeff_ * Rational(square_part);
      radical_coeff_ = 0;
      radicand_ = 0;
    } else {
      radical_coeff_ *= Rational(square_part);
      radicand_ = rest;
    }
  }

  // m = square_part^2 * rest with rest free of square factors findable by
  // trial division (plus a final perfect-square check on the remainder).
  static void split_square(const BigInt& m, BigInt& square_part, BigInt& rest) {
    BigInt r = m;
    square_part = 1;
    for (BigInt p = 2; p * p <= r && p < 100000; ++p) {
      while (r % (p * p) == 0) {
        r /= p * p;
        square_part *= p;
      }
    }
    BigInt s = boost::multiprecision::sqrt(r);
    if (s * s == r) {
      square_part *= s;
      r = 1;
    }
    rest = r;
  }
};

// Uniform scalar interface used by the templated math core. The double
// specialization applies the given absolute tolerance in zero tests; the
// exact specialization ignores it and tests true equality.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_fraction(long long num, long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static int sign(double v) { return (v > 0) - (v < 0); }
  static bool is_zero(double v, double abs_tol) { return std::fabs(v) <= abs_tol; }
  static double sqrt_nonneg(double v) {
    if (v < 0) throw std::domain_error("square root of a negative value");
    return std::sqrt(v);
  }
  static bool finite(double v) { return std::isfinite(v); }
};

template <>
struct ScalarTraits<ExactScalar> {
  static constexpr bool is_exact = true;
  static ExactScalar from_int(long long v) { return ExactScalar(v); }
  static ExactScalar from_fraction(long long num, long long den) {
    return ExactScalar::from_fraction(num, den);
  }
  static double to_double(const ExactScalar& v) { return v.to_double(); }
  static ExactScalar abs(const ExactScalar& v) { return v.sign() < 0 ? -v : v; }
  static int sign(const ExactScalar& v) { return v.sign(); }
  static bool is_zero(const ExactScalar& v, double) { return v.sign() == 0; }
  static ExactScalar sqrt_nonneg(const ExactScalar& v) { return v.sqrt_value(); }
  static bool finite(const ExactScalar&) { return true; }
};

// Compensated accumulation for doubles (Neumaier), plain summation for exact
// scalars, behind one interface so integral assembly code stays generic.
template <class S>
class Accumulator {
 public:
  void add(const S& v) { sum_ += v; }
  S total() const { return sum_; }

 private:
  S sum_{};
};

template <>
class Accumulator<double> {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace landscape

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "scoresleuth/rational.hpp"

namespace scoresleuth {

/// Exact value of the form coefficient * sqrt(radicand).
///
/// Every supported score is either a rational function of the confusion
/// counts or such a function times one square root (Fowlkes-Mallows, G-mean,
/// MCC), so this is enough to compare score values against rational bounds
/// without rounding.
class Surd {
 public:
  Surd() : coef_(0), rad_(1) {}
  Surd(const Rational& value) : coef_(value), rad_(1) {}  // NOLINT(implicit)

  static Surd sqrt_of(const Rational& radicand) {
    if (sgn(radicand) < 0) throw std::domain_error("square root of a negative rational");
    return Surd(Rational(1), radicand);
  }

  const Rational& coefficient() const { return coef_; }
  const Rational& radicand() const { return rad_; }
  bool is_rational() const { return rad_ == 1; }

  Rational rational() const {
    if (!is_rational()) throw std::logic_error("irrational surd has no exact rational value");
    return coef_;
  }

  int sign() const { return sgn(coef_); }

  /// Three-way comparison against a rational: -1, 0 or 1.
  int compare(const Rational& q) const {
    if (is_rational()) return cmp(coef_, q);
    const int s = sign();
    const int t = sgn(q);
    if (s != t) return s < t ? -1 : 1;
    // same nonzero sign: compare squares, flipping for negatives
    const Rational lhs = coef_ * coef_ * rad_;
    const Rational rhs = q * q;
    const int c = cmp(lhs, rhs);
    return s > 0 ? c : -c;
  }

  friend bool operator==(const Surd& a, const Surd& b) {
    return a.coef_ == b.coef_ && a.rad_ == b.rad_;
  }

  friend Surd operator*(const Surd& a, const Surd& b) {
    if (a.is_rational() && b.is_rational()) return Surd(a.coef_ * b.coef_);
    return Surd(a.coef_ * b.coef_, a.rad_ * b.rad_);
  }

  /// Caller guarantees b != 0.
  friend Surd operator/(const Surd& a, const Surd& b) {
    if (b.sign() == 0) throw std::domain_error("division of a surd by zero");
    if (a.is_rational() && b.is_rational()) return Surd(a.coef_ / b.coef_);
    return Surd(a.coef_ / b.coef_, a.rad_ / b.rad_);
  }

  friend Surd operator+(const Surd& a, const Surd& b) {
    if (a.rad_ == b.rad_) return Surd(a.coef_ + b.coef_, a.rad_);
    if (a.sign() == 0) return b;
    if (b.sign() == 0) return a;
    throw std::logic_error("sum of unlike square roots is not representable");
  }

  friend Surd operator-(const Surd& a) { return Surd(-a.coef_, a.rad_); }
  friend Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }

  /// floor(value * 10^k), exact.
  BigInt floor_scaled(unsigned k) const {
    if (is_rational()) return floor_of(coef_ * Rational(pow10(k)));
    const Rational y = scaled_square(k);
    const BigInt s = isqrt(floor_of(y));
    if (sign() > 0) return s;
    const BigInt ceil_root = (Rational(s * s) == y) ? s : BigInt(s + 1);
    return -ceil_root;
  }

  /// value * 10^k truncated toward zero.
  BigInt trunc_scaled(unsigned k) const {
    if (is_rational()) {
      const Rational m = abs(coef_) * Rational(pow10(k));
      const BigInt f = floor_of(m);
      return sign() < 0 ? BigInt(-f) : f;
    }
    const BigInt s = isqrt(floor_of(scaled_square(k)));
    return sign() < 0 ? BigInt(-s) : s;
  }

  /// value * 10^k rounded half away from zero.
  BigInt round_scaled(unsigned k) const {
    BigInt magnitude;
    if (is_rational()) {
      magnitude = floor_of(abs(coef_) * Rational(pow10(k)) + Rational(1, 2));
    } else {
      const Rational y = scaled_square(k);
      const BigInt s = isqrt(floor_of(y));
      const Rational half_up = Rational(s) + Rational(1, 2);
      magnitude = (y >= half_up * half_up) ? BigInt(s + 1) : s;
    }
    return sign() < 0 ? BigInt(-magnitude) : magnitude;
  }

  /// Largest multiple of 10^-digits not above the value.
  Rational lower_bound(unsigned digits) const {
    if (is_rational()) return coef_;
    Rational q(floor_scaled(digits), pow10(digits));
    q.canonicalize();
    return q;
  }

  /// Smallest multiple of 10^-digits not below the value (exact when rational).
  Rational upper_bound(unsigned digits) const {
    if (is_rational()) return coef_;
    Rational q(BigInt(floor_scaled(digits) + 1), pow10(digits));
    q.canonicalize();
    return q;
  }

  double to_double() const {
    if (is_rational()) return coef_.get_d();
    return coef_.get_d() * std::sqrt(rad_.get_d());
  }

  std::string to_string() const {
    if (is_rational()) return scoresleuth::to_string(coef_);
    return scoresleuth::to_string(coef_) + "*sqrt(" + scoresleuth::to_string(rad_) + ")";
  }

 private:
  Surd(const Rational& coef, const Rational& rad) : coef_(coef), rad_(rad) { normalize(); }

  // (value * 10^k)^2
  Rational scaled_square(unsigned k) const {
    const BigInt scale = pow10(k);
    return coef_ * coef_ * rad_ * Rational(scale * scale);
  }

  void normalize() {
    coef_.canonicalize();
    rad_.canonicalize();
    if (sgn(coef_) == 0 || sgn(rad_) == 0) {
      coef_ = 0;
      rad_ = 1;
      return;
    }
    if (rad_ == 1) return;
    if (mpz_perfect_square_p(rad_.get_num_mpz_t()) && mpz_perfect_square_p(rad_.get_den_mpz_t())) {
      coef_ *= Rational(isqrt(rad_.get_num()), isqrt(rad_.get_den()));
      coef_.canonicalize();
      rad_ = 1;
    }
  }

  Rational coef_;
  Rational rad_;
};

}  // namespace scoresleuth

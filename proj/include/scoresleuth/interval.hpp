#pragma once

// Closed intervals with exact rational endpoints, optionally unbounded on
// either side, plus the integer intervals used for confusion-count boxes.

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <string>

#include "scoresleuth/rational.hpp"
#include "scoresleuth/surd.hpp"

namespace scoresleuth {

/// Closed integer interval [lo, hi]; empty when lo > hi.
struct IntInterval {
  Count lo = 0;
  Count hi = -1;

  static IntInterval empty_set() { return {0, -1}; }
  static IntInterval point(Count v) { return {v, v}; }
  static IntInterval all() {
    // headroom so that size() and midpoints never overflow
    constexpr Count bound = std::numeric_limits<Count>::max() / 4;
    return {-bound, bound};
  }

  bool empty() const { return lo > hi; }
  bool contains(Count v) const { return lo <= v && v <= hi; }
  /// Number of integers inside.
  Count size() const { return empty() ? 0 : hi - lo + 1; }

  friend bool operator==(const IntInterval& a, const IntInterval& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return a.lo == b.lo && a.hi == b.hi;
  }

  std::string to_string() const {
    if (empty()) return "empty";
    return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  }
};

inline IntInterval intersect(const IntInterval& a, const IntInterval& b) {
  if (a.empty() || b.empty()) return IntInterval::empty_set();
  IntInterval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  return r.empty() ? IntInterval::empty_set() : r;
}

class RationalInterval {
 public:
  /// The whole real line.
  RationalInterval() = default;

  static RationalInterval closed(const Rational& lo, const Rational& hi) {
    RationalInterval r;
    r.lo_ = lo;
    r.hi_ = hi;
    r.empty_ = lo > hi;
    return r;
  }
  static RationalInterval point(const Rational& v) { return closed(v, v); }
  static RationalInterval at_least(const Rational& lo) {
    RationalInterval r;
    r.lo_ = lo;
    return r;
  }
  static RationalInterval at_most(const Rational& hi) {
    RationalInterval r;
    r.hi_ = hi;
    return r;
  }
  static RationalInterval whole() { return RationalInterval(); }
  static RationalInterval empty_set() {
    RationalInterval r = closed(Rational(1), Rational(0));
    return r;
  }
  static RationalInterval centered(const Rational& value, const Rational& radius) {
    return closed(value - radius, value + radius);
  }
  static RationalInterval from(const IntInterval& a) {
    if (a.empty()) return empty_set();
    return closed(make_rational(a.lo), make_rational(a.hi));
  }

  bool empty() const { return empty_; }
  bool bounded_below() const { return lo_.has_value(); }
  bool bounded_above() const { return hi_.has_value(); }
  /// Callers check bounded_below() first.
  const Rational& lo() const { return *lo_; }
  const Rational& hi() const { return *hi_; }
  const std::optional<Rational>& lower() const { return lo_; }
  const std::optional<Rational>& upper() const { return hi_; }

  bool is_point() const { return !empty_ && lo_ && hi_ && *lo_ == *hi_; }

  bool contains(const Rational& v) const {
    if (empty_) return false;
    return (!lo_ || *lo_ <= v) && (!hi_ || v <= *hi_);
  }

  bool contains(const Surd& v) const {
    if (empty_) return false;
    return (!lo_ || v.compare(*lo_) >= 0) && (!hi_ || v.compare(*hi_) <= 0);
  }

  /// True when `inner` lies entirely inside this interval.
  bool contains(const RationalInterval& inner) const {
    if (inner.empty_) return true;
    if (empty_) return false;
    if (lo_ && (!inner.lo_ || *inner.lo_ < *lo_)) return false;
    if (hi_ && (!inner.hi_ || *inner.hi_ > *hi_)) return false;
    return true;
  }

  friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  std::string to_string() const {
    if (empty_) return "empty";
    std::string s = lo_ ? "[" + scoresleuth::to_string(*lo_) : "(-inf";
    s += ", ";
    s += hi_ ? scoresleuth::to_string(*hi_) + "]" : "+inf)";
    return s;
  }

 private:
  std::optional<Rational> lo_;
  std::optional<Rational> hi_;
  bool empty_ = false;
};

namespace detail {

// Extended rational used for endpoint products: -inf, finite, +inf.
struct Extended {
  int infinity = 0;  // -1, 0, +1
  Rational value;

  static Extended finite(const Rational& v) { return {0, v}; }
  int sign() const { return infinity != 0 ? infinity : sgn(value); }
};

// Endpoint product with the convention 0 * inf = 0.
inline Extended multiply(const Extended& a, const Extended& b) {
  if ((a.infinity == 0 && sgn(a.value) == 0) || (b.infinity == 0 && sgn(b.value) == 0)) {
    return Extended::finite(Rational(0));
  }
  if (a.infinity == 0 && b.infinity == 0) return Extended::finite(a.value * b.value);
  return {a.sign() * b.sign(), Rational(0)};
}

inline bool less(const Extended& a, const Extended& b) {
  if (a.infinity != b.infinity) return a.infinity < b.infinity;
  if (a.infinity != 0) return false;
  return a.value < b.value;
}

inline Extended lower_of(const RationalInterval& a) {
  return a.bounded_below() ? Extended::finite(a.lo()) : Extended{-1, Rational(0)};
}
inline Extended upper_of(const RationalInterval& a) {
  return a.bounded_above() ? Extended::finite(a.hi()) : Extended{1, Rational(0)};
}

inline RationalInterval from_extended(const Extended& lo, const Extended& hi) {
  if (lo.infinity == 0 && hi.infinity == 0) return RationalInterval::closed(lo.value, hi.value);
  if (lo.infinity == 0) return RationalInterval::at_least(lo.value);
  if (hi.infinity == 0) return RationalInterval::at_most(hi.value);
  return RationalInterval::whole();
}

}  // namespace detail

inline RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  if (a.empty() || b.empty()) return RationalInterval::empty_set();
  detail::Extended lo = (a.bounded_below() && b.bounded_below())
                            ? detail::Extended::finite(a.lo() + b.lo())
                            : detail::Extended{-1, Rational(0)};
  detail::Extended hi = (a.bounded_above() && b.bounded_above())
                            ? detail::Extended::finite(a.hi() + b.hi())
                            : detail::Extended{1, Rational(0)};
  return detail::from_extended(lo, hi);
}

inline RationalInterval operator-(const RationalInterval& a) {
  if (a.empty()) return a;
  detail::Extended lo = a.bounded_above() ? detail::Extended::finite(-a.hi()) : detail::Extended{-1, Rational(0)};
  detail::Extended hi = a.bounded_below() ? detail::Extended::finite(-a.lo()) : detail::Extended{1, Rational(0)};
  return detail::from_extended(lo, hi);
}

inline RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) { return a + (-b); }

inline RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  if (a.empty() || b.empty()) return RationalInterval::empty_set();
  const std::array<detail::Extended, 2> xs{detail::lower_of(a), detail::upper_of(a)};
  const std::array<detail::Extended, 2> ys{detail::lower_of(b), detail::upper_of(b)};
  std::optional<detail::Extended> lo;
  std::optional<detail::Extended> hi;
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      const detail::Extended p = detail::multiply(x, y);
      if (!lo || detail::less(p, *lo)) lo = p;
      if (!hi || detail::less(*hi, p)) hi = p;
    }
  }
  return detail::from_extended(*lo, *hi);
}

/// Range of x / y over x in a, y in b with y != 0. Returns nullopt (undefined)
/// when b is exactly [0, 0].
inline std::optional<RationalInterval> divide(const RationalInterval& a, const RationalInterval& b) {
  if (a.empty() || b.empty()) return RationalInterval::empty_set();
  const bool lo_neg = !b.bounded_below() || sgn(b.lo()) < 0;
  const bool lo_zero = b.bounded_below() && sgn(b.lo()) == 0;
  const bool hi_pos = !b.bounded_above() || sgn(b.hi()) > 0;
  const bool hi_zero = b.bounded_above() && sgn(b.hi()) == 0;

  if (lo_zero && hi_zero) return std::nullopt;
  if (lo_neg && hi_pos) return RationalInterval::whole();

  RationalInterval reciprocal;
  if (lo_zero) {
    // (0, hi]: reciprocal [1/hi, +inf)
    reciprocal = b.bounded_above() ? RationalInterval::at_least(Rational(1) / b.hi())
                                   : RationalInterval::at_least(Rational(0));
  } else if (hi_zero) {
    reciprocal = b.bounded_below() ? RationalInterval::at_most(Rational(1) / b.lo())
                                   : RationalInterval::at_most(Rational(0));
  } else {
    // sign-definite: [1/hi, 1/lo], with 1/inf taken as the closed endpoint 0
    const Rational rlo = b.bounded_above() ? Rational(1) / b.hi() : Rational(0);
    const Rational rhi = b.bounded_below() ? Rational(1) / b.lo() : Rational(0);
    reciprocal = RationalInterval::closed(rlo, rhi);
  }
  return a * reciprocal;
}

inline RationalInterval intersect(const RationalInterval& a, const RationalInterval& b) {
  if (a.empty() || b.empty()) return RationalInterval::empty_set();
  std::optional<Rational> lo = a.lower();
  if (b.bounded_below() && (!lo || b.lo() > *lo)) lo = b.lo();
  std::optional<Rational> hi = a.upper();
  if (b.bounded_above() && (!hi || b.hi() < *hi)) hi = b.hi();
  if (lo && hi) return RationalInterval::closed(*lo, *hi);
  if (lo) return RationalInterval::at_least(*lo);
  if (hi) return RationalInterval::at_most(*hi);
  return RationalInterval::whole();
}

inline bool intersects(const RationalInterval& a, const RationalInterval& b) {
  return !intersect(a, b).empty();
}

/// Smallest interval containing both.
inline RationalInterval hull(const RationalInterval& a, const RationalInterval& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::optional<Rational> lo;
  if (a.bounded_below() && b.bounded_below()) lo = std::min(a.lo(), b.lo());
  std::optional<Rational> hi;
  if (a.bounded_above() && b.bounded_above()) hi = std::max(a.hi(), b.hi());
  if (lo && hi) return RationalInterval::closed(*lo, *hi);
  if (lo) return RationalInterval::at_least(*lo);
  if (hi) return RationalInterval::at_most(*hi);
  return RationalInterval::whole();
}

/// Outer rational bounds on the square root over the nonnegative part of `a`.
inline RationalInterval sqrt_outer(const RationalInterval& a, unsigned digits = 20) {
  const RationalInterval nonneg = intersect(a, RationalInterval::at_least(Rational(0)));
  if (nonneg.empty()) return RationalInterval::empty_set();
  const Rational lo = Surd::sqrt_of(nonneg.lo()).lower_bound(digits);
  if (!nonneg.bounded_above()) return RationalInterval::at_least(lo);
  return RationalInterval::closed(lo, Surd::sqrt_of(nonneg.hi()).upper_bound(digits));
}

/// The integers inside `a`, restricted to `domain`: [ceil(lo), floor(hi)].
inline IntInterval integer_clamp(const RationalInterval& a, const IntInterval& domain = IntInterval::all()) {
  if (a.empty() || domain.empty()) return IntInterval::empty_set();
  Count lo = domain.lo;
  Count hi = domain.hi;
  if (a.bounded_below()) {
    const BigInt c = ceil_of(a.lo());
    if (c > BigInt(static_cast<long>(hi))) return IntInterval::empty_set();
    if (c > BigInt(static_cast<long>(lo))) lo = to_count(c);
  }
  if (a.bounded_above()) {
    const BigInt f = floor_of(a.hi());
    if (f < BigInt(static_cast<long>(lo))) return IntInterval::empty_set();
    if (f < BigInt(static_cast<long>(hi))) hi = to_count(f);
  }
  IntInterval r{lo, hi};
  return r.empty() ? IntInterval::empty_set() : r;
}

}  // namespace scoresleuth

#pragma once

// Score formulas as expression trees over the confusion counts.
//
// One tree per score drives exact point evaluation, naive interval
// evaluation, affine-form extraction for the integer programs, and the JSON
// representation of the registry.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scoresleuth/interval.hpp"
#include "scoresleuth/rational.hpp"
#include "scoresleuth/surd.hpp"

namespace scoresleuth {

class Expr {
 public:
  enum class Kind { tp, tn, fp, fn, p, n, constant, add, sub, mul, div, sqrt };

  static Expr var(Kind k) { return Expr(k, Rational(0), {}); }
  static Expr constant(const Rational& v) { return Expr(Kind::constant, v, {}); }
  static Expr node(Kind k, std::vector<Expr> args) { return Expr(k, Rational(0), std::move(args)); }

  Kind kind() const { return kind_; }
  const Rational& value() const { return value_; }
  const std::vector<Expr>& args() const { return *args_; }

  bool mentions(Kind k) const {
    if (kind_ == k) return true;
    for (const auto& a : *args_) {
      if (a.mentions(k)) return true;
    }
    return false;
  }

  /// Whether the value can change with tp (for fixed p, n).
  bool depends_on_tp() const { return mentions(Kind::tp) || mentions(Kind::fn); }
  bool depends_on_tn() const { return mentions(Kind::tn) || mentions(Kind::fp); }

  friend Expr operator+(Expr a, Expr b) { return node(Kind::add, {std::move(a), std::move(b)}); }
  friend Expr operator-(Expr a, Expr b) { return node(Kind::sub, {std::move(a), std::move(b)}); }
  friend Expr operator*(Expr a, Expr b) { return node(Kind::mul, {std::move(a), std::move(b)}); }
  friend Expr operator/(Expr a, Expr b) { return node(Kind::div, {std::move(a), std::move(b)}); }

 private:
  Expr(Kind k, Rational v, std::vector<Expr> args)
      : kind_(k), value_(std::move(v)), args_(std::make_shared<const std::vector<Expr>>(std::move(args))) {}

  Kind kind_;
  Rational value_;
  std::shared_ptr<const std::vector<Expr>> args_;
};

namespace expr {

inline Expr tp() { return Expr::var(Expr::Kind::tp); }
inline Expr tn() { return Expr::var(Expr::Kind::tn); }
inline Expr fp() { return Expr::var(Expr::Kind::fp); }
inline Expr fn() { return Expr::var(Expr::Kind::fn); }
inline Expr p() { return Expr::var(Expr::Kind::p); }
inline Expr n() { return Expr::var(Expr::Kind::n); }
inline Expr c(const Rational& v) { return Expr::constant(v); }
inline Expr c(long v) { return Expr::constant(Rational(v)); }
inline Expr sqrt(Expr a) { return Expr::node(Expr::Kind::sqrt, {std::move(a)}); }

}  // namespace expr

inline std::string_view to_string(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::tp: return "tp";
    case Expr::Kind::tn: return "tn";
    case Expr::Kind::fp: return "fp";
    case Expr::Kind::fn: return "fn";
    case Expr::Kind::p: return "p";
    case Expr::Kind::n: return "n";
    case Expr::Kind::constant: return "const";
    case Expr::Kind::add: return "add";
    case Expr::Kind::sub: return "sub";
    case Expr::Kind::mul: return "mul";
    case Expr::Kind::div: return "div";
    case Expr::Kind::sqrt: return "sqrt";
  }
  return "?";
}

inline std::optional<Expr::Kind> expr_kind_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Expr::Kind::sqrt); ++i) {
    const auto k = static_cast<Expr::Kind>(i);
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// A binary confusion matrix: tp in [0, p], tn in [0, n].
struct ConfusionCounts {
  Count tp = 0;
  Count tn = 0;
  Count p = 0;
  Count n = 0;

  Count fp() const { return n - tn; }
  Count fn() const { return p - tp; }
  bool valid() const { return 0 <= tp && tp <= p && 0 <= tn && tn <= n; }
};

/// Exact value; nullopt when some denominator is zero.
inline std::optional<Surd> evaluate(const Expr& e, const ConfusionCounts& c) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::tp: return Surd(make_rational(c.tp));
    case K::tn: return Surd(make_rational(c.tn));
    case K::fp: return Surd(make_rational(c.fp()));
    case K::fn: return Surd(make_rational(c.fn()));
    case K::p: return Surd(make_rational(c.p));
    case K::n: return Surd(make_rational(c.n));
    case K::constant: return Surd(e.value());
    case K::sqrt: {
      auto a = evaluate(e.args()[0], c);
      if (!a) return std::nullopt;
      return Surd::sqrt_of(a->rational());
    }
    default: break;
  }
  auto a = evaluate(e.args()[0], c);
  if (!a) return std::nullopt;
  auto b = evaluate(e.args()[1], c);
  if (!b) return std::nullopt;
  switch (e.kind()) {
    case K::add: return *a + *b;
    case K::sub: return *a - *b;
    case K::mul: return *a * *b;
    case K::div:
      if (b->sign() == 0) return std::nullopt;
      return *a / *b;
    default: throw std::logic_error("unreachable expression kind");
  }
}

/// Box of confusion counts for interval evaluation.
struct CountBox {
  IntInterval tp;
  IntInterval tn;
  Count p = 0;
  Count n = 0;
};

/// Naive interval extension: sound outer bounds over every real point of the
/// box. nullopt when a denominator is identically zero on the box.
inline std::optional<RationalInterval> evaluate_naive(const Expr& e, const CountBox& box) {
  using K = Expr::Kind;
  const auto ival = [](const IntInterval& i) { return RationalInterval::from(i); };
  switch (e.kind()) {
    case K::tp: return ival(box.tp);
    case K::tn: return ival(box.tn);
    case K::fp: return RationalInterval::point(make_rational(box.n)) - ival(box.tn);
    case K::fn: return RationalInterval::point(make_rational(box.p)) - ival(box.tp);
    case K::p: return RationalInterval::point(make_rational(box.p));
    case K::n: return RationalInterval::point(make_rational(box.n));
    case K::constant: return RationalInterval::point(e.value());
    case K::sqrt: {
      auto a = evaluate_naive(e.args()[0], box);
      if (!a) return std::nullopt;
      return sqrt_outer(*a);
    }
    default: break;
  }
  auto a = evaluate_naive(e.args()[0], box);
  if (!a) return std::nullopt;
  auto b = evaluate_naive(e.args()[1], box);
  if (!b) return std::nullopt;
  switch (e.kind()) {
    case K::add: return *a + *b;
    case K::sub: return *a - *b;
    case K::mul: return *a * *b;
    case K::div: return divide(*a, *b);
    default: throw std::logic_error("unreachable expression kind");
  }
}

/// tp_coef * tp + tn_coef * tn + constant.
struct AffineForm {
  Rational tp_coef{0};
  Rational tn_coef{0};
  Rational constant{0};

  Rational at(Count tp, Count tn) const { return tp_coef * make_rational(tp) + tn_coef * make_rational(tn) + constant; }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

struct AffineExtraction {
  enum class Status { affine, undefined, nonlinear };
  Status status = Status::nonlinear;
  AffineForm form;
};

/// Symbolic extraction of the affine form in (tp, tn) for fixed p, n.
inline AffineExtraction extract_affine(const Expr& e, Count p, Count n) {
  using K = Expr::Kind;
  using S = AffineExtraction::Status;
  const auto affine = [](Rational a, Rational b, Rational c) {
    return AffineExtraction{S::affine, AffineForm{std::move(a), std::move(b), std::move(c)}};
  };
  const auto is_const = [](const AffineForm& f) { return sgn(f.tp_coef) == 0 && sgn(f.tn_coef) == 0; };
  switch (e.kind()) {
    case K::tp: return affine(1, 0, 0);
    case K::tn: return affine(0, 1, 0);
    case K::fp: return affine(0, -1, make_rational(n));
    case K::fn: return affine(-1, 0, make_rational(p));
    case K::p: return affine(0, 0, make_rational(p));
    case K::n: return affine(0, 0, make_rational(n));
    case K::constant: return affine(0, 0, e.value());
    case K::sqrt: return AffineExtraction{S::nonlinear, {}};
    default: break;
  }
  const AffineExtraction a = extract_affine(e.args()[0], p, n);
  const AffineExtraction b = extract_affine(e.args()[1], p, n);
  if (a.status == S::nonlinear || b.status == S::nonlinear) return AffineExtraction{S::nonlinear, {}};
  if (a.status == S::undefined || b.status == S::undefined) return AffineExtraction{S::undefined, {}};
  const AffineForm& x = a.form;
  const AffineForm& y = b.form;
  switch (e.kind()) {
    case K::add: return affine(x.tp_coef + y.tp_coef, x.tn_coef + y.tn_coef, x.constant + y.constant);
    case K::sub: return affine(x.tp_coef - y.tp_coef, x.tn_coef - y.tn_coef, x.constant - y.constant);
    case K::mul:
      if (is_const(x)) return affine(x.constant * y.tp_coef, x.constant * y.tn_coef, x.constant * y.constant);
      if (is_const(y)) return affine(y.constant * x.tp_coef, y.constant * x.tn_coef, y.constant * x.constant);
      return AffineExtraction{S::nonlinear, {}};
    case K::div:
      if (!is_const(y)) return AffineExtraction{S::nonlinear, {}};
      if (sgn(y.constant) == 0) return AffineExtraction{S::undefined, {}};
      return affine(x.tp_coef / y.constant, x.tn_coef / y.constant, x.constant / y.constant);
    default: throw std::logic_error("unreachable expression kind");
  }
}

}  // namespace scoresleuth

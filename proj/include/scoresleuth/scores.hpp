#pragma once

// Registry of binary-classification scores as exact functions of
// (tp, tn, p, n), with interval evaluation and constraint inversion.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/errors.hpp"
#include "scoresleuth/expr.hpp"
#include "scoresleuth/interval.hpp"

namespace scoresleuth {

struct ScoreDefinition {
  std::string id;
  std::string name;
  Expr formula;
  RationalInterval range;
  /// Affine in (tp, tn) for fixed (p, n).
  bool linear_in_counts = false;
  /// Monotone in tp and in tn separately wherever defined, so the range over
  /// a box is attained at its corners.
  bool monotone = false;
  bool enabled_by_default = true;

  bool depends_on_tp() const { return formula.depends_on_tp(); }
  bool depends_on_tn() const { return formula.depends_on_tn(); }
};

class ScoreRegistry {
 public:
  ScoreRegistry() = default;
  explicit ScoreRegistry(std::vector<ScoreDefinition> defs) : defs_(std::move(defs)) {}

  /// The shipped registry. `fbeta_beta` is the beta of the "fbeta" entry.
  static ScoreRegistry standard(const Rational& fbeta_beta = Rational(2));

  const ScoreDefinition* find(const std::string& id) const {
    for (const auto& d : defs_) {
      if (d.id == id) return &d;
    }
    return nullptr;
  }

  const ScoreDefinition& at(const std::string& id) const {
    if (const auto* d = find(id)) return *d;
    throw Error(ErrorCode::unknown_score_id, "unknown score id '" + id + "'");
  }

  const std::vector<ScoreDefinition>& all() const { return defs_; }

  std::vector<const ScoreDefinition*> enabled() const {
    std::vector<const ScoreDefinition*> out;
    for (const auto& d : defs_) {
      if (d.enabled_by_default) out.push_back(&d);
    }
    return out;
  }

 private:
  std::vector<ScoreDefinition> defs_;
};

inline ScoreRegistry ScoreRegistry::standard(const Rational& fbeta_beta) {
  using namespace expr;
  const RationalInterval unit = RationalInterval::closed(0, 1);
  const RationalInterval signed_unit = RationalInterval::closed(-1, 1);
  const RationalInterval nonneg = RationalInterval::at_least(0);
  const Rational b2 = fbeta_beta * fbeta_beta;

  const Expr sens = tp() / p();
  const Expr spec = tn() / n();
  const Expr ppv = tp() / (tp() + fp());
  const Expr npv = tn() / (tn() + fn());

  std::vector<ScoreDefinition> defs{
      {"acc", "accuracy", (tp() + tn()) / (p() + n()), unit, true, true, true},
      {"err", "error rate", (fp() + fn()) / (p() + n()), unit, true, true, true},
      {"sens", "sensitivity (recall, true positive rate)", sens, unit, true, true, true},
      {"spec", "specificity (true negative rate)", spec, unit, true, true, true},
      {"ppv", "positive predictive value (precision)", ppv, unit, false, true, true},
      {"npv", "negative predictive value", npv, unit, false, true, true},
      {"fpr", "false positive rate", fp() / n(), unit, true, true, true},
      {"fnr", "false negative rate", fn() / p(), unit, true, true, true},
      {"fdr", "false discovery rate", fp() / (tp() + fp()), unit, false, true, true},
      {"for", "false omission rate", fn() / (tn() + fn()), unit, false, true, true},
      {"f1", "F1 score", c(2) * tp() / (c(2) * tp() + fp() + fn()), unit, false, true, true},
      {"fbeta", "F-beta score (beta = " + to_string(fbeta_beta) + ")",
       c(1 + b2) * tp() / (c(1 + b2) * tp() + c(b2) * fn() + fp()), unit, false, true, true},
      {"fm", "Fowlkes-Mallows index", sqrt(ppv * sens), unit, false, true, true},
      {"gm", "geometric mean of sensitivity and specificity", sqrt(sens * spec), unit, false, true, true},
      {"bacc", "balanced accuracy", (sens + spec) / c(2), unit, true, true, true},
      {"bm", "bookmaker informedness (Youden's J)", sens + spec - c(1), signed_unit, true, true, true},
      {"mk", "markedness", ppv + npv - c(1), signed_unit, false, true, true},
      // tp + fn = p and tn + fp = n are substituted to tighten interval bounds
      {"mcc", "Matthews correlation coefficient",
       (tp() * tn() - fp() * fn()) / sqrt((tp() + fp()) * p() * n() * (tn() + fn())), signed_unit, false, false,
       true},
      {"kappa", "Cohen's kappa",
       c(2) * (tp() * tn() - fn() * fp()) / ((tp() + fp()) * n() + p() * (fn() + tn())), signed_unit, false, false,
       true},
      {"ji", "Jaccard index", tp() / (tp() + fp() + fn()), unit, false, true, true},
      {"lrp", "positive likelihood ratio", (tp() / p()) / (fp() / n()), nonneg, false, true, false},
      {"lrn", "negative likelihood ratio", (fn() / p()) / (tn() / n()), nonneg, false, true, false},
  };
  return ScoreRegistry(std::move(defs));
}

inline const ScoreRegistry& default_registry() {
  static const ScoreRegistry registry = ScoreRegistry::standard();
  return registry;
}

/// Exact score value; nullopt (undefined) when a denominator vanishes.
inline std::optional<Surd> evaluate(const ScoreDefinition& score, const ConfusionCounts& counts) {
  return evaluate(score.formula, counts);
}

inline std::optional<Surd> evaluate(const std::string& score_id, const ConfusionCounts& counts) {
  return evaluate(default_registry().at(score_id), counts);
}

namespace detail {

inline constexpr unsigned kBoundDigits = 20;

}  // namespace detail

/// Interval containing the score of every defined point in the box. Exact for
/// monotone scores up to the 10^-20 rounding of square roots; empty when no
/// point of the box has a defined value.
inline RationalInterval evaluate_interval(const ScoreDefinition& score, const IntInterval& tp_box,
                                          const IntInterval& tn_box, Count p, Count n) {
  if (tp_box.empty() || tn_box.empty()) return RationalInterval::empty_set();
  if (score.monotone) {
    const std::array<Count, 2> tps{tp_box.lo, tp_box.hi};
    const std::array<Count, 2> tns{tn_box.lo, tn_box.hi};
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    bool all_defined = true;
    for (Count tp : tps) {
      for (Count tn : tns) {
        const auto v = evaluate(score.formula, ConfusionCounts{tp, tn, p, n});
        if (!v) {
          all_defined = false;
          break;
        }
        const Rational l = v->lower_bound(detail::kBoundDigits);
        const Rational h = v->upper_bound(detail::kBoundDigits);
        if (!lo || l < *lo) lo = l;
        if (!hi || h > *hi) hi = h;
      }
      if (!all_defined) break;
    }
    if (all_defined) return RationalInterval::closed(*lo, *hi);
  }
  const auto naive = evaluate_naive(score.formula, CountBox{tp_box, tn_box, p, n});
  if (!naive) return RationalInterval::empty_set();
  return intersect(*naive, score.range);
}

inline RationalInterval evaluate_interval(const std::string& score_id, const IntInterval& tp_box,
                                          const IntInterval& tn_box, Count p, Count n) {
  return evaluate_interval(default_registry().at(score_id), tp_box, tn_box, p, n);
}

namespace detail {

// Leftmost (or rightmost) v in `range` whose sub-box can reach `target`,
// found by bisection on sound interval bounds.
template <typename Meets>
std::optional<Count> extreme_feasible(IntInterval range, bool from_left, const Meets& meets) {
  if (range.empty() || !meets(range)) return std::nullopt;
  if (range.lo == range.hi) return range.lo;
  const Count mid = range.lo + (range.hi - range.lo) / 2;
  const IntInterval left{range.lo, mid};
  const IntInterval right{mid + 1, range.hi};
  const IntInterval& first = from_left ? left : right;
  const IntInterval& second = from_left ? right : left;
  if (auto v = extreme_feasible(first, from_left, meets)) return v;
  return extreme_feasible(second, from_left, meets);
}

}  // namespace detail

/// Integer interval containing every tp (within `tp_range`) for which some tn
/// in `tn_box` gives a score inside `target`. [0, p] when the score does not
/// depend on tp.
inline IntInterval invert_tp(const ScoreDefinition& score, const RationalInterval& target, const IntInterval& tn_box,
                             Count p, Count n, std::optional<IntInterval> tp_range = std::nullopt) {
  const IntInterval domain = tp_range ? intersect(*tp_range, IntInterval{0, p}) : IntInterval{0, p};
  if (!score.depends_on_tp()) return IntInterval{0, p};
  const auto meets = [&](const IntInterval& tp_sub) {
    return intersects(evaluate_interval(score, tp_sub, tn_box, p, n), target);
  };
  const auto lo = detail::extreme_feasible(domain, true, meets);
  if (!lo) return IntInterval::empty_set();
  const auto hi = detail::extreme_feasible(IntInterval{*lo, domain.hi}, false, meets);
  return IntInterval{*lo, *hi};
}

/// Mirror of invert_tp for tn.
inline IntInterval invert_tn(const ScoreDefinition& score, const RationalInterval& target, const IntInterval& tp_box,
                             Count p, Count n, std::optional<IntInterval> tn_range = std::nullopt) {
  const IntInterval domain = tn_range ? intersect(*tn_range, IntInterval{0, n}) : IntInterval{0, n};
  if (!score.depends_on_tn()) return IntInterval{0, n};
  const auto meets = [&](const IntInterval& tn_sub) {
    return intersects(evaluate_interval(score, tp_box, tn_sub, p, n), target);
  };
  const auto lo = detail::extreme_feasible(domain, true, meets);
  if (!lo) return IntInterval::empty_set();
  const auto hi = detail::extreme_feasible(IntInterval{*lo, domain.hi}, false, meets);
  return IntInterval{*lo, *hi};
}

/// Affine form of a linear score on a testset (p, n). nullopt when the score
/// is undefined there (e.g. sensitivity with p = 0).
inline std::optional<AffineForm> affine_form(const ScoreDefinition& score, Count p, Count n) {
  if (!score.linear_in_counts) {
    throw Error(ErrorCode::nonlinear_score_unsupported, "score '" + score.id + "' is not affine in the counts");
  }
  const AffineExtraction e = extract_affine(score.formula, p, n);
  if (e.status == AffineExtraction::Status::undefined) return std::nullopt;
  if (e.status != AffineExtraction::Status::affine) {
    throw std::logic_error("score '" + score.id + "' is flagged linear but its formula is not affine");
  }
  return e.form;
}

}  // namespace scoresleuth

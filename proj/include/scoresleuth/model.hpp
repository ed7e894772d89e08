#pragma once

// Experiment descriptions, score reports, uncertainty and verdicts.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scoresleuth/errors.hpp"
#include "scoresleuth/interval.hpp"
#include "scoresleuth/rational.hpp"
#include "scoresleuth/surd.hpp"

namespace scoresleuth {

/// Binary evaluation set: p positives, n negatives.
struct Testset {
  Count p = 0;
  Count n = 0;

  Count total() const { return p + n; }
  friend bool operator==(const Testset&, const Testset&) = default;
};

/// Per-class sample counts of a multiclass evaluation set.
struct MulticlassTestset {
  std::vector<Count> class_counts;

  std::size_t classes() const { return class_counts.size(); }
  Count total() const { return std::accumulate(class_counts.begin(), class_counts.end(), Count{0}); }
  friend bool operator==(const MulticlassTestset&, const MulticlassTestset&) = default;
};

using AnyTestset = std::variant<Testset, MulticlassTestset>;

inline Count total_of(const AnyTestset& t) {
  return std::visit([](const auto& x) { return x.total(); }, t);
}

inline bool is_multiclass(const AnyTestset& t) { return std::holds_alternative<MulticlassTestset>(t); }

/// Class counts as a vector; binary testsets map to {p, n}.
inline std::vector<Count> class_vector(const AnyTestset& t) {
  if (const auto* b = std::get_if<Testset>(&t)) return {b->p, b->n};
  return std::get<MulticlassTestset>(t).class_counts;
}

enum class FoldingKind { none, known_folds, stratified_kfold, unknown_folds_kfold };

struct FoldingScheme {
  FoldingKind kind = FoldingKind::none;
  std::vector<AnyTestset> folds;  // known_folds only
  Count k = 0;                    // stratified_kfold and unknown_folds_kfold only

  static FoldingScheme none() { return {}; }
  static FoldingScheme known(std::vector<AnyTestset> folds) {
    return {FoldingKind::known_folds, std::move(folds), 0};
  }
  static FoldingScheme stratified(Count k) { return {FoldingKind::stratified_kfold, {}, k}; }
  static FoldingScheme unknown(Count k) { return {FoldingKind::unknown_folds_kfold, {}, k}; }

  friend bool operator==(const FoldingScheme&, const FoldingScheme&) = default;
};

enum class AggregationMode { score_of_means, mean_of_scores };

/// How one-vs-rest scores of a multiclass confusion matrix are combined.
enum class ClassAggregation { micro, macro };

struct DatasetSpec {
  AnyTestset testset;
  FoldingScheme folding;

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct ExperimentSpec {
  std::vector<DatasetSpec> datasets;
  std::optional<AggregationMode> fold_aggregation;
  std::optional<AggregationMode> dataset_aggregation;
  std::optional<ClassAggregation> class_aggregation;

  static ExperimentSpec single(AnyTestset testset) {
    ExperimentSpec spec;
    spec.datasets.push_back({std::move(testset), FoldingScheme::none()});
    return spec;
  }

  bool multiclass() const { return !datasets.empty() && is_multiclass(datasets.front().testset); }
  bool any_folding() const {
    for (const auto& d : datasets) {
      if (d.folding.kind != FoldingKind::none) return true;
    }
    return false;
  }

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

inline std::string_view to_string(FoldingKind k) {
  switch (k) {
    case FoldingKind::none: return "none";
    case FoldingKind::known_folds: return "known_folds";
    case FoldingKind::stratified_kfold: return "stratified_kfold";
    case FoldingKind::unknown_folds_kfold: return "unknown_folds_kfold";
  }
  return "none";
}

inline std::string_view to_string(AggregationMode m) {
  return m == AggregationMode::score_of_means ? "score_of_means" : "mean_of_scores";
}

inline std::string_view to_string(ClassAggregation m) {
  return m == ClassAggregation::micro ? "micro" : "macro";
}

namespace detail {

inline std::string describe(const AnyTestset& t) {
  if (const auto* b = std::get_if<Testset>(&t)) {
    return "{p:" + std::to_string(b->p) + ", n:" + std::to_string(b->n) + "}";
  }
  std::string s = "(";
  const auto& counts = std::get<MulticlassTestset>(t).class_counts;
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "," : "") + std::to_string(counts[i]);
  return s + ")";
}

inline void validate_testset(const AnyTestset& t, const std::string& where) {
  if (const auto* b = std::get_if<Testset>(&t)) {
    if (b->p < 0 || b->n < 0) throw Error(ErrorCode::invalid_spec, where + ": negative class count");
  } else {
    const auto& counts = std::get<MulticlassTestset>(t).class_counts;
    if (counts.size() < 2) throw Error(ErrorCode::invalid_spec, where + ": a multiclass testset needs at least 2 classes");
    for (Count c : counts) {
      if (c < 0) throw Error(ErrorCode::invalid_spec, where + ": negative class count");
    }
  }
  if (total_of(t) < 1) throw Error(ErrorCode::empty_experiment, where + ": testset " + describe(t) + " is empty");
}

}  // namespace detail

/// Returns the spec unchanged when every invariant holds; throws otherwise.
inline const ExperimentSpec& validate_experiment(const ExperimentSpec& spec) {
  if (spec.datasets.empty()) throw Error(ErrorCode::empty_experiment, "experiment has no datasets");

  const bool multiclass = spec.multiclass();
  const std::size_t classes = class_vector(spec.datasets.front().testset).size();
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    const auto& ds = spec.datasets[d];
    const std::string where = "dataset " + std::to_string(d);
    detail::validate_testset(ds.testset, where);
    if (is_multiclass(ds.testset) != multiclass || class_vector(ds.testset).size() != classes) {
      throw Error(ErrorCode::invalid_spec, where + ": all datasets must share the same task and class count");
    }
    const auto& scheme = ds.folding;
    switch (scheme.kind) {
      case FoldingKind::none:
        break;
      case FoldingKind::known_folds: {
        if (scheme.folds.empty()) throw Error(ErrorCode::invalid_spec, where + ": known_folds without folds");
        std::vector<Count> totals(classes, 0);
        for (std::size_t j = 0; j < scheme.folds.size(); ++j) {
          const auto& fold = scheme.folds[j];
          const std::string fw = where + ", fold " + std::to_string(j);
          if (is_multiclass(fold) != multiclass || class_vector(fold).size() != classes) {
            throw Error(ErrorCode::invalid_spec, fw + ": fold kind differs from its dataset");
          }
          detail::validate_testset(fold, fw);
          const auto v = class_vector(fold);
          for (std::size_t c = 0; c < classes; ++c) totals[c] += v[c];
        }
        const auto parent = class_vector(ds.testset);
        for (std::size_t c = 0; c < classes; ++c) {
          if (totals[c] != parent[c]) {
            const std::string label = multiclass ? "class " + std::to_string(c) : (c == 0 ? "positives" : "negatives");
            throw Error(ErrorCode::fold_totals_mismatch,
                        where + ": " + label + " " + std::to_string(totals[c]) + " != " + std::to_string(parent[c]));
          }
        }
        break;
      }
      case FoldingKind::stratified_kfold:
      case FoldingKind::unknown_folds_kfold:
        if (scheme.k < 1) throw Error(ErrorCode::invalid_fold_count, where + ": k must be at least 1");
        if (scheme.k > total_of(ds.testset)) {
          throw Error(ErrorCode::invalid_fold_count, where + ": k exceeds the number of samples, some fold would be empty");
        }
        if (scheme.kind == FoldingKind::stratified_kfold) {
          // the last stratified fold receives floor(c / k) of every class
          const auto counts = class_vector(ds.testset);
          if (*std::max_element(counts.begin(), counts.end()) < scheme.k) {
            throw Error(ErrorCode::invalid_fold_count, where + ": stratified split into " +
                                                           std::to_string(scheme.k) + " folds leaves a fold empty");
          }
        }
        break;
    }
  }

  if (spec.any_folding()) {
    if (!spec.fold_aggregation) throw Error(ErrorCode::missing_aggregation_mode, "fold_aggregation is required with k-fold schemes");
  } else if (spec.fold_aggregation) {
    throw Error(ErrorCode::invalid_spec, "fold_aggregation must be absent when no dataset uses folding");
  }
  if (spec.datasets.size() > 1 && !spec.dataset_aggregation) {
    throw Error(ErrorCode::missing_aggregation_mode, "dataset_aggregation is required with more than one dataset");
  }
  return spec;
}

/// Reported score values, keyed by score id. Values keep their source text
/// so that radii can be inferred from the number of decimals.
struct ReportedScore {
  Rational value;
  std::optional<std::string> text;
};

class ScoreReport {
 public:
  ScoreReport() = default;

  /// Parses each value from decimal text.
  static ScoreReport from_text(const std::map<std::string, std::string>& entries) {
    ScoreReport r;
    for (const auto& [id, text] : entries) r.set(id, text);
    return r;
  }

  void set(const std::string& id, const std::string& text) {
    entries_[id] = ReportedScore{parse_rational(text), text};
  }
  void set(const std::string& id, const Rational& value) { entries_[id] = ReportedScore{value, std::nullopt}; }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  const ReportedScore& at(const std::string& id) const { return entries_.at(id); }
  const std::map<std::string, ReportedScore>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Copy restricted to a subset of ids.
  ScoreReport subset(const std::vector<std::string>& ids) const {
    ScoreReport r;
    for (const auto& id : ids) r.entries_[id] = entries_.at(id);
    return r;
  }

 private:
  std::map<std::string, ReportedScore> entries_;
};

struct Uncertainty {
  Rational default_radius{0};
  std::map<std::string, Rational> per_score_radius;
  /// Added to every constraint; reproduces verdicts of floating-point solvers.
  Rational solver_slack{0};

  static Uncertainty eps(const Rational& radius) { return Uncertainty{radius, {}, Rational(0)}; }

  /// One radius per reported score, derived from its decimal text.
  static Uncertainty inferred_from(const ScoreReport& report) {
    Uncertainty u;
    for (const auto& [id, entry] : report) {
      if (!entry.text) {
        throw Error(ErrorCode::parse_error, "score '" + id + "' has no decimal text to infer a radius from");
      }
      u.per_score_radius[id] = infer_radius_from_text(*entry.text);
    }
    return u;
  }

  const Rational& radius_for(const std::string& id) const {
    const auto it = per_score_radius.find(id);
    return it == per_score_radius.end() ? default_radius : it->second;
  }

  /// [v - radius - slack, v + radius + slack]
  RationalInterval interval_for(const std::string& id, const Rational& value) const {
    return RationalInterval::centered(value, radius_for(id) + solver_slack);
  }

  void validate() const {
    if (sgn(default_radius) < 0 || sgn(solver_slack) < 0) throw Error(ErrorCode::invalid_spec, "negative uncertainty radius");
    for (const auto& [id, r] : per_score_radius) {
      if (sgn(r) < 0) throw Error(ErrorCode::invalid_spec, "negative radius for '" + id + "'");
    }
  }
};

// ---------------------------------------------------------------------------
// Outcomes: concrete confusion counts for every leaf of an experiment. A
// witness is an outcome that reproduces all reported scores.

struct BinaryOutcome {
  Testset testset;
  Count tp = 0;
  Count tn = 0;

  Count fp() const { return testset.n - tn; }
  Count fn() const { return testset.p - tp; }
  friend bool operator==(const BinaryOutcome&, const BinaryOutcome&) = default;
};

/// matrix[i][j]: samples of class i predicted as class j.
struct MulticlassOutcome {
  MulticlassTestset testset;
  std::vector<std::vector<Count>> matrix;

  Count trace() const {
    Count t = 0;
    for (std::size_t i = 0; i < matrix.size(); ++i) t += matrix[i][i];
    return t;
  }
  friend bool operator==(const MulticlassOutcome&, const MulticlassOutcome&) = default;
};

using UnitOutcome = std::variant<BinaryOutcome, MulticlassOutcome>;

struct DatasetOutcome {
  /// One entry per fold; a single entry when the dataset is not folded.
  std::vector<UnitOutcome> folds;
  friend bool operator==(const DatasetOutcome&, const DatasetOutcome&) = default;
};

struct Witness {
  std::vector<DatasetOutcome> datasets;

  static Witness single(UnitOutcome unit) {
    Witness w;
    w.datasets.push_back(DatasetOutcome{{std::move(unit)}});
    return w;
  }

  /// The (tp, tn) pair of a single binary testset.
  const BinaryOutcome& binary() const { return std::get<BinaryOutcome>(datasets.at(0).folds.at(0)); }

  friend bool operator==(const Witness&, const Witness&) = default;
};

// ---------------------------------------------------------------------------
// Verdicts

struct ScoreEvidence {
  std::string id;
  Rational reported;
  Rational radius;
  /// [v - radius - slack, v + radius + slack], or for regression the set of
  /// values still feasible after all relations were applied.
  RationalInterval target;
  std::optional<Surd> witness_value;
};

struct Violation {
  /// e.g. "value_out_of_range", "pruned_empty", "no_integer_solution", "R2"
  std::string kind;
  std::string subject;
  std::string detail;
};

struct ConsistencyResult {
  bool inconsistency = false;
  std::optional<Witness> witness;
  std::vector<ScoreEvidence> evidence;
  std::optional<Violation> violation;
  std::string procedure;
  std::vector<std::string> notes;
};

}  // namespace scoresleuth

#pragma once

// Exact score evaluation on concrete outcomes under the aggregation
// semantics of an experiment, plus helpers that lay pooled counts out over
// folds. Used to verify witnesses and to generate reports from hidden
// outcomes; independent of the pruning and propagation code.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scoresleuth/folds.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/scores.hpp"

namespace scoresleuth {

/// One-vs-rest counts of class i in a multiclass matrix.
inline ConfusionCounts one_vs_rest(const MulticlassOutcome& m, std::size_t i) {
  const Count total = m.testset.total();
  const Count ci = m.testset.class_counts[i];
  Count column = 0;
  for (std::size_t r = 0; r < m.matrix.size(); ++r) column += m.matrix[r][i];
  const Count fp = column - m.matrix[i][i];
  return ConfusionCounts{m.matrix[i][i], total - ci - fp, ci, total - ci};
}

/// Micro-averaged counts: one-vs-rest counts summed over classes. With trace
/// t and N samples: TP = t, FN = FP = N - t, TN = N(C - 2) + t.
inline ConfusionCounts micro_counts(const MulticlassTestset& testset, Count trace) {
  const Count total = testset.total();
  const auto classes = static_cast<Count>(testset.classes());
  return ConfusionCounts{trace, total * (classes - 2) + trace, total, total * (classes - 1)};
}

/// Score of a single confusion matrix. Multiclass matrices need the class
/// aggregation.
inline std::optional<Surd> unit_score(const ScoreDefinition& score, const UnitOutcome& unit,
                                      std::optional<ClassAggregation> classes = std::nullopt) {
  if (const auto* b = std::get_if<BinaryOutcome>(&unit)) {
    return evaluate(score, ConfusionCounts{b->tp, b->tn, b->testset.p, b->testset.n});
  }
  const auto& m = std::get<MulticlassOutcome>(unit);
  if (!classes) throw std::logic_error("multiclass outcome evaluated without a class aggregation");
  if (*classes == ClassAggregation::micro) return evaluate(score, micro_counts(m.testset, m.trace()));
  Surd sum(Rational(0));
  for (std::size_t i = 0; i < m.testset.classes(); ++i) {
    const auto v = evaluate(score, one_vs_rest(m, i));
    if (!v) return std::nullopt;
    sum = sum + *v;
  }
  return sum * Surd(make_rational(1, static_cast<Count>(m.testset.classes())));
}

/// Counts of several units added together.
inline UnitOutcome pool(const std::vector<UnitOutcome>& units) {
  if (units.empty()) throw std::logic_error("pooling an empty list of outcomes");
  if (std::holds_alternative<BinaryOutcome>(units.front())) {
    BinaryOutcome out;
    for (const auto& u : units) {
      const auto& b = std::get<BinaryOutcome>(u);
      out.testset.p += b.testset.p;
      out.testset.n += b.testset.n;
      out.tp += b.tp;
      out.tn += b.tn;
    }
    return out;
  }
  const auto& first = std::get<MulticlassOutcome>(units.front());
  const std::size_t c = first.testset.classes();
  MulticlassOutcome out{MulticlassTestset{std::vector<Count>(c, 0)}, std::vector<std::vector<Count>>(c, std::vector<Count>(c, 0))};
  for (const auto& u : units) {
    const auto& m = std::get<MulticlassOutcome>(u);
    for (std::size_t i = 0; i < c; ++i) {
      out.testset.class_counts[i] += m.testset.class_counts[i];
      for (std::size_t j = 0; j < c; ++j) out.matrix[i][j] += m.matrix[i][j];
    }
  }
  return out;
}

namespace detail {

inline std::optional<Surd> mean_of(const std::vector<std::optional<Surd>>& values) {
  Surd sum(Rational(0));
  for (const auto& v : values) {
    if (!v) return std::nullopt;
    sum = sum + *v;
  }
  return sum * Surd(make_rational(1, static_cast<Count>(values.size())));
}

}  // namespace detail

/// The value an experiment reports for `score` when its leaves produced
/// `outcome`. nullopt when some averaged term is undefined.
inline std::optional<Surd> aggregate_score(const ExperimentSpec& spec, const Witness& outcome,
                                           const ScoreDefinition& score) {
  if (outcome.datasets.size() != spec.datasets.size()) throw std::logic_error("outcome does not match the experiment");
  const bool fold_mos = spec.fold_aggregation == AggregationMode::mean_of_scores;
  const auto classes = spec.class_aggregation;

  if (spec.datasets.size() > 1 && spec.dataset_aggregation == AggregationMode::score_of_means) {
    std::vector<UnitOutcome> all;
    for (const auto& d : outcome.datasets) all.insert(all.end(), d.folds.begin(), d.folds.end());
    return unit_score(score, pool(all), classes);
  }
  std::vector<std::optional<Surd>> per_dataset;
  for (const auto& d : outcome.datasets) {
    if (fold_mos && d.folds.size() > 1) {
      std::vector<std::optional<Surd>> per_fold;
      for (const auto& f : d.folds) per_fold.push_back(unit_score(score, f, classes));
      per_dataset.push_back(detail::mean_of(per_fold));
    } else {
      per_dataset.push_back(unit_score(score, pool(d.folds), classes));
    }
  }
  return detail::mean_of(per_dataset);
}

/// A matrix with row sums `testset` and the given trace: the diagonal is
/// filled greedily and each remaining sample goes to the next class.
inline MulticlassOutcome matrix_with_trace(const MulticlassTestset& testset, Count trace) {
  const std::size_t c = testset.classes();
  MulticlassOutcome out{testset, std::vector<std::vector<Count>>(c, std::vector<Count>(c, 0))};
  Count left = trace;
  for (std::size_t i = 0; i < c; ++i) {
    const Count diag = std::min(left, testset.class_counts[i]);
    out.matrix[i][i] = diag;
    left -= diag;
    out.matrix[i][(i + 1) % c] += testset.class_counts[i] - diag;
  }
  if (left != 0) throw std::logic_error("trace exceeds the number of samples");
  return out;
}

/// Splits pooled counts over units of the given shapes (greedy in order).
inline std::vector<UnitOutcome> distribute(const UnitOutcome& pooled, const std::vector<AnyTestset>& shapes) {
  std::vector<UnitOutcome> out;
  if (const auto* b = std::get_if<BinaryOutcome>(&pooled)) {
    Count tp = b->tp;
    Count tn = b->tn;
    for (const auto& s : shapes) {
      const auto& t = std::get<Testset>(s);
      const Count a = std::min(tp, t.p);
      const Count c = std::min(tn, t.n);
      tp -= a;
      tn -= c;
      out.emplace_back(BinaryOutcome{t, a, c});
    }
    return out;
  }
  auto remaining = std::get<MulticlassOutcome>(pooled).matrix;
  for (const auto& s : shapes) {
    const auto& t = std::get<MulticlassTestset>(s);
    const std::size_t c = t.classes();
    MulticlassOutcome m{t, std::vector<std::vector<Count>>(c, std::vector<Count>(c, 0))};
    for (std::size_t i = 0; i < c; ++i) {
      Count need = t.class_counts[i];
      for (std::size_t j = 0; j < c && need > 0; ++j) {
        const Count take = std::min(need, remaining[i][j]);
        m.matrix[i][j] = take;
        remaining[i][j] -= take;
        need -= take;
      }
    }
    out.emplace_back(std::move(m));
  }
  return out;
}

/// Fold testsets a dataset is laid out over. Unknown configurations use the
/// stratified split as a representative.
inline std::vector<AnyTestset> representative_folds(const DatasetSpec& dataset) {
  const bool multiclass = is_multiclass(dataset.testset);
  switch (dataset.folding.kind) {
    case FoldingKind::none: return {dataset.testset};
    case FoldingKind::known_folds: return dataset.folding.folds;
    case FoldingKind::stratified_kfold:
    case FoldingKind::unknown_folds_kfold: {
      const auto counts = class_vector(dataset.testset);
      const Count k = dataset.folding.k;
      std::vector<FoldShape> shapes;
      if (*std::max_element(counts.begin(), counts.end()) >= k) {
        shapes = stratified_fold_shapes(counts, k);
      } else {
        // unknown folds only: one sample in each of the first k - 1 folds
        shapes.assign(static_cast<std::size_t>(k), FoldShape(counts.size(), 0));
        auto rest = counts;
        std::size_t cls = 0;
        for (Count j = 0; j + 1 < k; ++j) {
          while (rest[cls] == 0) ++cls;
          shapes[static_cast<std::size_t>(j)][cls] = 1;
          --rest[cls];
        }
        shapes.back() = rest;
      }
      std::vector<AnyTestset> out;
      for (const auto& f : shapes) out.push_back(testset_from_shape(f, multiclass));
      return out;
    }
  }
  return {dataset.testset};
}

}  // namespace scoresleuth

#pragma once

// Aggregated experiments: score-of-means pooling, mean-of-scores integer
// feasibility over folds and datasets, unknown fold configurations, and the
// dispatcher over an experiment description.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/folds.hpp"
#include "scoresleuth/linear.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/multiclass.hpp"
#include "scoresleuth/outcome.hpp"
#include "scoresleuth/single.hpp"

namespace scoresleuth {

/// Identifiers reported in ConsistencyResult::procedure.
inline const std::vector<std::string>& procedure_ids() {
  static const std::vector<std::string> ids{
      "single_testset",
      "som_pooled",
      "mos_known_folds",
      "mos_unknown_folds",
      "multiclass_micro",
      "multiclass_macro",
      "multiclass_micro_mos_known_folds",
      "multiclass_micro_mos_unknown_folds",
      "multiclass_macro_mos_known_folds",
      "multiclass_macro_mos_unknown_folds",
      "regression",
  };
  return ids;
}

namespace detail {

/// Checks a witness against every target with the aggregation semantics of
/// `spec`, independently of how it was found, and records the values.
inline void verify_witness(const ExperimentSpec& spec, const Witness& witness, const std::vector<ScoreTarget>& targets,
                           std::vector<ScoreEvidence>& evidence) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto v = aggregate_score(spec, witness, *targets[i].score);
    if (!v || !targets[i].interval.contains(*v)) {
      throw std::logic_error("witness fails verification for '" + targets[i].id + "'");
    }
    evidence[i].witness_value = v;
  }
}

/// Lays pooled counts out over the datasets and folds of `spec`.
inline Witness layout_pooled(const ExperimentSpec& spec, const UnitOutcome& pooled) {
  std::vector<AnyTestset> dataset_sets;
  for (const auto& d : spec.datasets) dataset_sets.push_back(d.testset);
  const auto per_dataset = distribute(pooled, dataset_sets);
  Witness w;
  for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
    w.datasets.push_back(DatasetOutcome{distribute(per_dataset[d], representative_folds(spec.datasets[d]))});
  }
  return w;
}

inline std::string describe_configuration(const std::vector<AnyTestset>& folds) {
  std::string s = "[";
  for (std::size_t j = 0; j < folds.size(); ++j) s += (j ? ", " : "") + describe(folds[j]);
  return s + "]";
}

inline ConsistencyResult inconsistent(ConsistencyResult result, std::optional<Violation> violation) {
  result.inconsistency = true;
  result.violation = std::move(violation);
  return result;
}

/// Mean-of-scores leaves of one dataset: either fixed fold testsets or, for
/// unknown folds, one of several configurations.
struct DatasetLeaves {
  std::vector<std::vector<AnyTestset>> choices;
  bool unknown = false;
};

inline DatasetLeaves leaves_of(const ExperimentSpec& spec, const DatasetSpec& dataset, std::size_t cap) {
  const bool fold_mos = spec.fold_aggregation == AggregationMode::mean_of_scores;
  DatasetLeaves out;
  if (!fold_mos || dataset.folding.kind == FoldingKind::none) {
    out.choices.push_back({dataset.testset});
    return out;
  }
  if (dataset.folding.kind != FoldingKind::unknown_folds_kfold) {
    out.choices.push_back(representative_folds(dataset));
    return out;
  }
  out.unknown = true;
  const bool multiclass = is_multiclass(dataset.testset);
  for (const auto& config : enumerate_fold_shapes(class_vector(dataset.testset), dataset.folding.k, cap)) {
    std::vector<AnyTestset> folds;
    for (const auto& f : config) folds.push_back(testset_from_shape(f, multiclass));
    out.choices.push_back(std::move(folds));
  }
  return out;
}

/// Mean-of-scores check over all leaves of `spec`; targets are resolved.
inline ConsistencyResult check_mos(const ExperimentSpec& spec, const PreparedTargets& prepared,
                                   std::optional<ClassAggregation> classes, const CheckOptions& options) {
  require_linear(prepared.targets, "mean-of-scores aggregation");
  std::vector<DatasetLeaves> leaves;
  bool unknown = false;
  unsigned __int128 combinations = 1;
  for (const auto& d : spec.datasets) {
    leaves.push_back(leaves_of(spec, d, options.configuration_cap));
    unknown = unknown || leaves.back().unknown;
    combinations *= leaves.back().choices.size();
    if (combinations > options.configuration_cap) {
      throw TooManyConfigurations(static_cast<std::size_t>(std::min<unsigned __int128>(combinations, SIZE_MAX)),
                                  options.configuration_cap);
    }
  }

  ConsistencyResult result;
  result.procedure = std::string(classes ? (*classes == ClassAggregation::micro ? "multiclass_micro_" : "multiclass_macro_") : "") +
                     (unknown ? "mos_unknown_folds" : "mos_known_folds");
  result.evidence = evidence_of(prepared.targets);
  if (prepared.violation) return inconsistent(std::move(result), prepared.violation);

  const Rational dataset_weight = make_rational(1, static_cast<Count>(spec.datasets.size()));
  std::vector<std::size_t> pick(leaves.size(), 0);  // odometer, last dataset fastest
  std::optional<Violation> last;
  std::size_t tried = 0;
  std::size_t excluded = 0;
  while (true) {
    std::vector<WeightedUnit> units;
    for (std::size_t d = 0; d < leaves.size(); ++d) {
      const auto& folds = leaves[d].choices[pick[d]];
      const Rational w = dataset_weight / make_rational(static_cast<Count>(folds.size()));
      for (const auto& f : folds) units.push_back(WeightedUnit{f, w});
    }
    ++tried;
    const LinearSolve solved = solve_linear(units, prepared.targets, classes, options.node_limit);
    if (solved.units) {
      Witness witness;
      std::size_t next = 0;
      for (std::size_t d = 0; d < leaves.size(); ++d) {
        DatasetOutcome outcome;
        const auto& folds = leaves[d].choices[pick[d]];
        for (std::size_t j = 0; j < folds.size(); ++j) outcome.folds.push_back((*solved.units)[next++]);
        if (unknown && leaves[d].unknown) {
          result.notes.push_back("dataset " + std::to_string(d) + " fold configuration " + describe_configuration(folds));
        }
        witness.datasets.push_back(std::move(outcome));
      }
      verify_witness(spec, witness, prepared.targets, result.evidence);
      result.witness = std::move(witness);
      return result;
    }
    if (solved.violation && solved.violation->kind == "undefined_score") ++excluded;
    last = solved.violation;

    bool advanced = false;
    for (std::size_t d = leaves.size(); d-- > 0;) {
      if (++pick[d] < leaves[d].choices.size()) {
        advanced = true;
        break;
      }
      pick[d] = 0;
    }
    if (!advanced) break;
  }

  if (unknown) {
    result.notes.push_back(std::to_string(tried) + " fold configurations tried, " + std::to_string(excluded) +
                           " excluded because a reported score is undefined on some fold");
    return inconsistent(std::move(result),
                        Violation{"no_integer_solution", tried == 1 && last ? last->subject : "",
                                  "no fold configuration admits confusion counts reproducing all reported means"});
  }
  return inconsistent(std::move(result), last);
}

/// Exact check of a single pooled unit with any registered score.
inline ConsistencyResult check_pooled(const AnyTestset& testset, const ScoreReport& scores, const Uncertainty& uncertainty,
                                      std::optional<ClassAggregation> classes, const CheckOptions& options) {
  if (const auto* b = std::get_if<Testset>(&testset)) return check_single_testset(*b, scores, uncertainty, options);
  const auto& mt = std::get<MulticlassTestset>(testset);
  if (*classes == ClassAggregation::micro) return check_multiclass_micro(mt, scores, uncertainty, options);
  return check_multiclass_macro(mt, scores, uncertainty, options);
}

}  // namespace detail

/// Mean of per-fold scores over known folds of one binary dataset.
inline ConsistencyResult check_mos_known_folds(const std::vector<Testset>& folds, const ScoreReport& scores,
                                               const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  if (folds.empty()) throw Error(ErrorCode::invalid_spec, "no folds given");
  ExperimentSpec spec;
  std::vector<AnyTestset> any(folds.begin(), folds.end());
  spec.datasets.push_back(DatasetSpec{reduce_som(any), FoldingScheme::known(any)});
  spec.fold_aggregation = AggregationMode::mean_of_scores;
  validate_experiment(spec);
  const PreparedTargets prepared = prepare_targets(scores, uncertainty, options.scores());
  return detail::check_mos(spec, prepared, std::nullopt, options);
}

/// Mean of per-fold scores when only the fold count is known: consistent iff
/// some fold configuration admits a witness.
inline ConsistencyResult check_mos_unknown_folds(const Testset& testset, Count k, const ScoreReport& scores,
                                                 const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  ExperimentSpec spec;
  spec.datasets.push_back(DatasetSpec{testset, FoldingScheme::unknown(k)});
  spec.fold_aggregation = AggregationMode::mean_of_scores;
  validate_experiment(spec);
  const PreparedTargets prepared = prepare_targets(scores, uncertainty, options.scores());
  return detail::check_mos(spec, prepared, std::nullopt, options);
}

inline ConsistencyResult check_experiment(const ExperimentSpec& spec, const ScoreReport& scores,
                                          const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  validate_experiment(spec);
  if (scores.empty()) throw Error(ErrorCode::invalid_spec, "no scores reported");

  std::optional<ClassAggregation> classes;
  if (spec.multiclass()) classes = class_aggregation_for(scores, spec.class_aggregation);

  const bool multi_dataset = spec.datasets.size() > 1;
  const bool fold_mos = spec.any_folding() && spec.fold_aggregation == AggregationMode::mean_of_scores;
  const bool dataset_som = multi_dataset && spec.dataset_aggregation == AggregationMode::score_of_means;
  if (dataset_som && fold_mos) {
    throw Error(ErrorCode::invalid_spec,
                "score-of-means over datasets cannot pool fold-level means; use mean_of_scores for datasets");
  }

  if (!fold_mos && (!multi_dataset || dataset_som)) {
    // every level pools counts: one exact check on the totals
    std::vector<AnyTestset> sets;
    for (const auto& d : spec.datasets) sets.push_back(d.testset);
    const AnyTestset pooled = reduce_som(sets);
    ConsistencyResult result = detail::check_pooled(pooled, scores, uncertainty, classes, options);
    if (!multi_dataset && !spec.any_folding()) return result;
    if (!spec.multiclass()) result.procedure = "som_pooled";
    result.notes.insert(result.notes.begin(), "pooled testset " + detail::describe(pooled));
    if (result.witness) {
      const auto prepared = prepare_targets(scores, uncertainty, options.scores(),
                                            classes ? strip_class_prefix : std::function<std::string(const std::string&)>{});
      result.witness = detail::layout_pooled(spec, result.witness->datasets.front().folds.front());
      detail::verify_witness(spec, *result.witness, prepared.targets, result.evidence);
    }
    return result;
  }

  const PreparedTargets prepared = prepare_targets(
      scores, uncertainty, options.scores(), classes ? strip_class_prefix : std::function<std::string(const std::string&)>{});
  ConsistencyResult result = detail::check_mos(spec, prepared, classes, options);
  if (result.witness) {
    // folds pooled under score-of-means keep a per-fold layout in the witness
    for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
      auto& folds = result.witness->datasets[d].folds;
      if (!fold_mos && spec.datasets[d].folding.kind != FoldingKind::none) {
        folds = distribute(folds.front(), representative_folds(spec.datasets[d]));
      }
    }
    detail::verify_witness(spec, *result.witness, prepared.targets, result.evidence);
  }
  return result;
}

}  // namespace scoresleuth

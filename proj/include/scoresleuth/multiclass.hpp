#pragma once

// Multiclass checks through one-vs-rest reductions. Micro averaging leaves a
// single free variable (the trace), so it is decided by enumeration for any
// score; macro averaging is an integer program over the full matrix.

#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/linear.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/outcome.hpp"
#include "scoresleuth/single.hpp"

namespace scoresleuth {

inline constexpr std::string_view kMicroPrefix = "micro-";
inline constexpr std::string_view kMacroPrefix = "macro-";

inline std::optional<ClassAggregation> class_prefix_of(const std::string& id) {
  if (id.rfind(kMicroPrefix, 0) == 0) return ClassAggregation::micro;
  if (id.rfind(kMacroPrefix, 0) == 0) return ClassAggregation::macro;
  return std::nullopt;
}

/// Registry id behind a possibly prefixed multiclass id.
inline std::string strip_class_prefix(const std::string& id) {
  return class_prefix_of(id) ? id.substr(kMicroPrefix.size()) : id;
}

/// The class aggregation a report asks for: the declared one, or the one
/// its prefixes agree on. Mixed or contradicting prefixes are spec errors.
inline ClassAggregation class_aggregation_for(const ScoreReport& report, std::optional<ClassAggregation> declared) {
  std::optional<ClassAggregation> found = declared;
  for (const auto& [id, entry] : report) {
    const auto prefix = class_prefix_of(id);
    if (!prefix) continue;
    if (found && *found != *prefix) {
      throw Error(ErrorCode::invalid_spec, "score '" + id + "' conflicts with " + std::string(to_string(*found)) +
                                               " class aggregation");
    }
    found = prefix;
  }
  if (!found) {
    throw Error(ErrorCode::missing_aggregation_mode,
                "multiclass scores need class_aggregation or micro-/macro- prefixed ids");
  }
  return *found;
}

namespace detail {

inline PreparedTargets prepare_multiclass_targets(const MulticlassTestset& testset, const ScoreReport& scores,
                                                  const Uncertainty& uncertainty, ClassAggregation mode,
                                                  const CheckOptions& options) {
  validate_testset(testset, "testset");
  if (class_aggregation_for(scores, mode) != mode) throw std::logic_error("class aggregation mismatch");
  return prepare_targets(scores, uncertainty, options.scores(), strip_class_prefix);
}

}  // namespace detail

inline ConsistencyResult check_multiclass_micro(const MulticlassTestset& testset, const ScoreReport& scores,
                                                const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  const PreparedTargets prepared =
      detail::prepare_multiclass_targets(testset, scores, uncertainty, ClassAggregation::micro, options);
  ConsistencyResult result;
  result.procedure = "multiclass_micro";
  result.evidence = detail::evidence_of(prepared.targets);
  if (prepared.violation) {
    result.inconsistency = true;
    result.violation = prepared.violation;
    return result;
  }
  for (Count t = 0; t <= testset.total(); ++t) {
    const ConfusionCounts counts = micro_counts(testset, t);
    if (!matches_all(prepared.targets, counts)) continue;
    result.witness = Witness::single(matrix_with_trace(testset, t));
    for (std::size_t i = 0; i < prepared.targets.size(); ++i) {
      result.evidence[i].witness_value = evaluate(*prepared.targets[i].score, counts);
    }
    result.notes.push_back("trace " + std::to_string(t));
    return result;
  }
  result.inconsistency = true;
  result.violation = Violation{"no_integer_solution", "",
                               "no trace in [0, " + std::to_string(testset.total()) +
                                   "] reproduces all micro-averaged scores"};
  return result;
}

inline ConsistencyResult check_multiclass_macro(const MulticlassTestset& testset, const ScoreReport& scores,
                                                const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  const PreparedTargets prepared =
      detail::prepare_multiclass_targets(testset, scores, uncertainty, ClassAggregation::macro, options);
  require_linear(prepared.targets, "macro averaging");
  ConsistencyResult result;
  result.procedure = "multiclass_macro";
  result.evidence = detail::evidence_of(prepared.targets);
  if (prepared.violation) {
    result.inconsistency = true;
    result.violation = prepared.violation;
    return result;
  }
  const LinearSolve solved = solve_linear({WeightedUnit{testset, Rational(1)}}, prepared.targets,
                                          ClassAggregation::macro, options.node_limit);
  if (!solved.units) {
    result.inconsistency = true;
    result.violation = solved.violation;
    return result;
  }
  const UnitOutcome& matrix = solved.units->front();
  for (std::size_t i = 0; i < prepared.targets.size(); ++i) {
    const auto v = unit_score(*prepared.targets[i].score, matrix, ClassAggregation::macro);
    if (!v || !prepared.targets[i].interval.contains(*v)) {
      throw std::logic_error("macro witness fails verification for '" + prepared.targets[i].id + "'");
    }
    result.evidence[i].witness_value = v;
  }
  result.witness = Witness::single(matrix);
  return result;
}

}  // namespace scoresleuth

#pragma once

// Exact decision procedure for one binary confusion matrix: does any
// (tp, tn) in [0, p] x [0, n] reproduce every reported score within its
// radius? Interval inversion prunes the box to a fixpoint, then the
// remaining candidates are verified pointwise in (tp, tn) order.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/model.hpp"
#include "scoresleuth/scores.hpp"

namespace scoresleuth {

struct CheckOptions {
  /// nullptr selects default_registry().
  const ScoreRegistry* registry = nullptr;
  std::size_t configuration_cap = 1'000'000;
  /// Candidate (tp, tn) pairs allowed in feasible_region after pruning.
  std::size_t region_cap = 10'000'000;
  /// Branch-and-bound nodes per integer program.
  std::size_t node_limit = 20'000'000;

  const ScoreRegistry& scores() const { return registry ? *registry : default_registry(); }
};

/// A reported score resolved against the registry.
struct ScoreTarget {
  std::string id;  // as reported
  const ScoreDefinition* score = nullptr;
  Rational reported;
  Rational radius;
  RationalInterval interval;  // [v - r - slack, v + r + slack]
};

struct PreparedTargets {
  std::vector<ScoreTarget> targets;
  std::optional<Violation> violation;
};

namespace detail {

inline std::vector<ScoreEvidence> evidence_of(const std::vector<ScoreTarget>& targets) {
  std::vector<ScoreEvidence> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(ScoreEvidence{t.id, t.reported, t.radius, t.interval, std::nullopt});
  return out;
}

}  // namespace detail

/// Resolves ids and builds target intervals. A value that cannot lie in the
/// score's theoretical range is reported as a violation, not thrown.
inline PreparedTargets prepare_targets(const ScoreReport& report, const Uncertainty& uncertainty,
                                       const ScoreRegistry& registry,
                                       const std::function<std::string(const std::string&)>& resolve_id = {}) {
  if (report.empty()) throw Error(ErrorCode::invalid_spec, "no scores reported");
  uncertainty.validate();
  PreparedTargets out;
  for (const auto& [id, entry] : report) {
    const std::string key = resolve_id ? resolve_id(id) : id;
    const ScoreDefinition& def = registry.at(key);
    ScoreTarget t{id, &def, entry.value, uncertainty.radius_for(id), uncertainty.interval_for(id, entry.value)};
    if (!out.violation && !intersects(t.interval, def.range)) {
      out.violation = Violation{"value_out_of_range", id,
                                "reported " + to_string(entry.value) + " +/- " +
                                    to_string(t.radius + uncertainty.solver_slack) + " lies outside the range " +
                                    def.range.to_string() + " of " + def.name};
    }
    out.targets.push_back(std::move(t));
  }
  return out;
}

/// Every target contains the exact score value of `counts`.
inline bool matches_all(const std::vector<ScoreTarget>& targets, const ConfusionCounts& counts) {
  for (const auto& t : targets) {
    const auto v = evaluate(*t.score, counts);
    if (!v || !t.interval.contains(*v)) return false;
  }
  return true;
}

struct PrunedBox {
  IntInterval tp;
  IntInterval tn;
  /// Score whose inversion emptied the box, if it became empty.
  std::optional<std::string> emptied_by;
  int rounds = 0;
};

/// Alternating invert_tp / invert_tn over all targets until the box stops
/// shrinking (at most 100 rounds).
inline PrunedBox prune_box(const Testset& testset, const std::vector<ScoreTarget>& targets) {
  PrunedBox box{IntInterval{0, testset.p}, IntInterval{0, testset.n}, std::nullopt, 0};
  bool changed = true;
  while (changed && box.rounds < 100) {
    changed = false;
    ++box.rounds;
    for (const auto& t : targets) {
      const IntInterval tp =
          intersect(box.tp, invert_tp(*t.score, t.interval, box.tn, testset.p, testset.n, box.tp));
      changed = changed || !(tp == box.tp);
      box.tp = tp;
      if (tp.empty()) {
        box.emptied_by = t.id;
        return box;
      }
      const IntInterval tn =
          intersect(box.tn, invert_tn(*t.score, t.interval, box.tp, testset.p, testset.n, box.tn));
      changed = changed || !(tn == box.tn);
      box.tn = tn;
      if (tn.empty()) {
        box.emptied_by = t.id;
        return box;
      }
    }
  }
  return box;
}

namespace detail {

// tn candidates for a fixed tp: the pruned tn box narrowed by every target.
inline IntInterval tn_candidates(const Testset& testset, const std::vector<ScoreTarget>& targets, Count tp,
                                 IntInterval tn_box) {
  for (const auto& t : targets) {
    tn_box = intersect(tn_box, invert_tn(*t.score, t.interval, IntInterval::point(tp), testset.p, testset.n, tn_box));
    if (tn_box.empty()) break;
  }
  return tn_box;
}

inline void validate_binary(const Testset& t) {
  if (t.p < 0 || t.n < 0) throw Error(ErrorCode::invalid_spec, "negative class count");
  if (t.total() < 1) throw Error(ErrorCode::empty_experiment, "testset is empty");
}

}  // namespace detail

inline ConsistencyResult check_single_testset(const Testset& testset, const ScoreReport& scores,
                                              const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  detail::validate_binary(testset);
  const PreparedTargets prepared = prepare_targets(scores, uncertainty, options.scores());

  ConsistencyResult result;
  result.procedure = "single_testset";
  result.evidence = detail::evidence_of(prepared.targets);
  if (prepared.violation) {
    result.inconsistency = true;
    result.violation = prepared.violation;
    return result;
  }

  const PrunedBox box = prune_box(testset, prepared.targets);
  if (box.emptied_by) {
    result.inconsistency = true;
    result.violation = Violation{"pruned_empty", *box.emptied_by,
                                 "interval pruning left no (tp, tn) compatible with '" + *box.emptied_by +
                                     "' and the other scores"};
    return result;
  }

  for (Count tp = box.tp.lo; tp <= box.tp.hi; ++tp) {
    const IntInterval tns = detail::tn_candidates(testset, prepared.targets, tp, box.tn);
    for (Count tn = tns.lo; tn <= tns.hi; ++tn) {
      const ConfusionCounts counts{tp, tn, testset.p, testset.n};
      if (!matches_all(prepared.targets, counts)) continue;
      result.witness = Witness::single(BinaryOutcome{testset, tp, tn});
      for (std::size_t i = 0; i < prepared.targets.size(); ++i) {
        result.evidence[i].witness_value = evaluate(*prepared.targets[i].score, counts);
      }
      return result;
    }
  }

  result.inconsistency = true;
  result.violation = Violation{"no_integer_solution", "",
                               "no (tp, tn) in tp " + box.tp.to_string() + " x tn " + box.tn.to_string() +
                                   " reproduces all reported scores"};
  return result;
}

/// Every witness (tp, tn), in ascending (tp, tn) order.
inline std::vector<BinaryOutcome> feasible_region(const Testset& testset, const ScoreReport& scores,
                                                  const Uncertainty& uncertainty, const CheckOptions& options = {}) {
  detail::validate_binary(testset);
  const PreparedTargets prepared = prepare_targets(scores, uncertainty, options.scores());
  std::vector<BinaryOutcome> out;
  if (prepared.violation) return out;

  const PrunedBox box = prune_box(testset, prepared.targets);
  if (box.emptied_by) return out;
  const auto candidates = static_cast<unsigned __int128>(box.tp.size()) * static_cast<unsigned __int128>(box.tn.size());
  if (candidates > options.region_cap) {
    throw Error(ErrorCode::region_too_large, "pruned region tp " + box.tp.to_string() + " x tn " +
                                                 box.tn.to_string() + " exceeds the cap of " +
                                                 std::to_string(options.region_cap) + " candidate pairs");
  }
  for (Count tp = box.tp.lo; tp <= box.tp.hi; ++tp) {
    const IntInterval tns = detail::tn_candidates(testset, prepared.targets, tp, box.tn);
    for (Count tn = tns.lo; tn <= tns.hi; ++tn) {
      if (matches_all(prepared.targets, ConfusionCounts{tp, tn, testset.p, testset.n})) {
        out.push_back(BinaryOutcome{testset, tp, tn});
      }
    }
  }
  return out;
}

}  // namespace scoresleuth

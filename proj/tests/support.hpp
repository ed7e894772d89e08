#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "scoresleuth/scoresleuth.hpp"

namespace scoresleuth::testing {

inline ScoreReport report(const std::map<std::string, std::string>& entries) { return ScoreReport::from_text(entries); }

inline Uncertainty eps(int k) { return Uncertainty::eps(ten_to_minus(k)); }

inline Rational q(const char* text) { return parse_rational(text); }

inline std::vector<std::pair<Count, Count>> pairs_of(const std::vector<BinaryOutcome>& region) {
  std::vector<std::pair<Count, Count>> out;
  for (const auto& o : region) out.emplace_back(o.tp, o.tn);
  return out;
}

inline std::vector<std::pair<Count, Count>> pairs_of(const std::vector<Witness>& witnesses) {
  std::vector<std::pair<Count, Count>> out;
  for (const auto& w : witnesses) out.emplace_back(w.binary().tp, w.binary().tn);
  return out;
}

/// Per-fold (tp, tn) of the first dataset of a binary witness.
inline std::vector<std::pair<Count, Count>> fold_pairs(const Witness& w, std::size_t dataset = 0) {
  std::vector<std::pair<Count, Count>> out;
  for (const auto& f : w.datasets.at(dataset).folds) {
    const auto& b = std::get<BinaryOutcome>(f);
    out.emplace_back(b.tp, b.tn);
  }
  return out;
}

inline const MulticlassOutcome& matrix_of(const Witness& w) {
  return std::get<MulticlassOutcome>(w.datasets.at(0).folds.at(0));
}

/// Every reported score is reproduced by the witness under the spec's
/// aggregation.
inline ::testing::AssertionResult reproduces(const ExperimentSpec& spec, const Witness& w, const ScoreReport& scores,
                                             const Uncertainty& unc) {
  for (const auto& [id, entry] : scores) {
    std::string base = id;
    if (class_prefix_of(id)) base = strip_class_prefix(id);
    const auto v = aggregate_score(spec, w, default_registry().at(base));
    if (!v) return ::testing::AssertionFailure() << id << " undefined on the witness";
    if (!unc.interval_for(id, entry.value).contains(*v)) {
      return ::testing::AssertionFailure() << id << " = " << v->to_string() << " outside "
                                           << unc.interval_for(id, entry.value).to_string();
    }
  }
  return ::testing::AssertionSuccess();
}

#define EXPECT_THROWS_CODE(stmt, expected)                                         \
  do {                                                                             \
    try {                                                                          \
      stmt;                                                                        \
      ADD_FAILURE() << "no exception from " #stmt;                                 \
    } catch (const ::scoresleuth::Error& e_) {                                     \
      EXPECT_EQ(::scoresleuth::to_string(e_.code()), ::scoresleuth::to_string(expected)) << e_.what(); \
    }                                                                              \
  } while (0)

}  // namespace scoresleuth::testing

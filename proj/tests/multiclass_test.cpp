#include <random>

#include "support.hpp"

using namespace scoresleuth;
using namespace scoresleuth::testing;

namespace {

ExperimentSpec multiclass(std::vector<Count> counts, std::optional<ClassAggregation> mode) {
  ExperimentSpec spec = ExperimentSpec::single(MulticlassTestset{std::move(counts)});
  spec.class_aggregation = mode;
  return spec;
}

void expect_rows_match(const MulticlassOutcome& m) {
  for (std::size_t i = 0; i < m.matrix.size(); ++i) {
    Count row = 0;
    for (Count x : m.matrix[i]) {
      EXPECT_GE(x, 0);
      row += x;
    }
    EXPECT_EQ(row, m.testset.class_counts[i]);
  }
}

}  // namespace

TEST(Multiclass, OneVsRestCounts) {
  const MulticlassOutcome m{MulticlassTestset{{3, 3, 3}}, {{2, 1, 0}, {0, 3, 0}, {1, 1, 1}}};
  const auto c0 = one_vs_rest(m, 0);
  EXPECT_EQ(c0.tp, 2);
  EXPECT_EQ(c0.p, 3);
  EXPECT_EQ(c0.n, 6);
  EXPECT_EQ(c0.tn, 6 - 1);  // class 2 predicted as 0 once
  const auto micro = micro_counts(m.testset, m.trace());
  EXPECT_EQ(micro.tp, 6);
  EXPECT_EQ(micro.p, 9);
  EXPECT_EQ(micro.n, 18);
  EXPECT_EQ(micro.tn, 9 + 6);
}

TEST(Multiclass, MicroAveraging) {
  const MulticlassTestset t{{3, 3, 3}};
  const auto r = check_multiclass_micro(t, report({{"micro-sens", "0.6667"}, {"micro-spec", "0.8333"}}), eps(4));
  EXPECT_FALSE(r.inconsistency);
  EXPECT_EQ(r.procedure, "multiclass_micro");
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(matrix_of(*r.witness).trace(), 6);
  expect_rows_match(matrix_of(*r.witness));

  // micro sens is trace / 9
  EXPECT_TRUE(check_multiclass_micro(t, report({{"micro-sens", "0.5"}}), eps(4)).inconsistency);
  // micro acc is (2 * trace + 9) / 27
  EXPECT_TRUE(check_multiclass_micro(t, report({{"micro-sens", "0.6667"}, {"micro-acc", "0.8889"}}), eps(4)).inconsistency);
  EXPECT_FALSE(check_multiclass_micro(t, report({{"micro-f1", "0.6667"}, {"micro-mcc", "0.5"}}), eps(4)).inconsistency);
}

TEST(Multiclass, MacroAveraging) {
  const auto r = check_multiclass_macro(MulticlassTestset{{2, 2}}, report({{"macro-sens", "0.75"}}), eps(2));
  EXPECT_FALSE(r.inconsistency);
  EXPECT_EQ(r.procedure, "multiclass_macro");
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(matrix_of(*r.witness).matrix, (std::vector<std::vector<Count>>{{1, 1}, {0, 2}}));

  const auto bad = check_multiclass_macro(MulticlassTestset{{2, 2}}, report({{"macro-sens", "0.30"}}), eps(2));
  EXPECT_TRUE(bad.inconsistency);
  ASSERT_TRUE(bad.violation);
  EXPECT_EQ(bad.violation->kind, "no_integer_solution");

  const auto diag = check_multiclass_macro(MulticlassTestset{{3, 4, 5}}, report({{"macro-sens", "1.0"}}), eps(4));
  ASSERT_TRUE(diag.witness);
  EXPECT_EQ(matrix_of(*diag.witness).matrix, (std::vector<std::vector<Count>>{{3, 0, 0}, {0, 4, 0}, {0, 0, 5}}));

  EXPECT_THROWS_CODE(check_multiclass_macro(MulticlassTestset{{2, 2}}, report({{"macro-f1", "0.5"}}), eps(2)),
                     ErrorCode::nonlinear_score_unsupported);
}

TEST(Multiclass, AggregationModeFromPrefixes) {
  const auto scores = report({{"macro-sens", "0.75"}});
  EXPECT_EQ(check_experiment(multiclass({2, 2}, std::nullopt), scores, eps(2)).procedure, "multiclass_macro");
  EXPECT_EQ(check_experiment(multiclass({2, 2}, ClassAggregation::macro), report({{"sens", "0.75"}}), eps(2)).procedure,
            "multiclass_macro");
  EXPECT_THROWS_CODE(check_experiment(multiclass({2, 2}, std::nullopt), report({{"sens", "0.75"}}), eps(2)),
                     ErrorCode::missing_aggregation_mode);
  EXPECT_THROWS_CODE(check_experiment(multiclass({2, 2}, ClassAggregation::micro), scores, eps(2)),
                     ErrorCode::invalid_spec);
  EXPECT_THROWS_CODE(
      check_experiment(multiclass({2, 2}, std::nullopt), report({{"macro-sens", "0.7"}, {"micro-acc", "0.7"}}), eps(2)),
      ErrorCode::invalid_spec);
}

TEST(Multiclass, FoldedMulticlass) {
  ExperimentSpec spec;
  spec.datasets.push_back({MulticlassTestset{{4, 4, 4}}, FoldingScheme::stratified(2)});
  spec.fold_aggregation = AggregationMode::mean_of_scores;
  spec.class_aggregation = ClassAggregation::macro;
  const auto scores = report({{"sens", "0.5"}, {"spec", "0.75"}});
  const auto r = check_experiment(spec, scores, eps(2));
  EXPECT_FALSE(r.inconsistency);
  EXPECT_EQ(r.procedure, "multiclass_macro_mos_known_folds");
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(reproduces(spec, *r.witness, scores, eps(2)));

  spec.datasets[0].folding = FoldingScheme::unknown(2);
  spec.class_aggregation = ClassAggregation::micro;
  const auto u = check_experiment(spec, report({{"acc", "0.75"}}), eps(2));
  EXPECT_FALSE(u.inconsistency);
  EXPECT_EQ(u.procedure, "multiclass_micro_mos_unknown_folds");
}

// Macro checks agree with enumerating every confusion matrix.
TEST(MulticlassProperty, MacroAgreesWithBruteForce) {
  std::mt19937_64 rng(13);
  const auto pick = [&](Count lo, Count hi) { return std::uniform_int_distribution<Count>(lo, hi)(rng); };
  const std::vector<std::string> linear{"acc", "sens", "spec", "bacc", "bm", "fpr", "err"};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t c = static_cast<std::size_t>(pick(2, 3));
    std::vector<Count> counts;
    for (std::size_t i = 0; i < c; ++i) counts.push_back(pick(1, c == 2 ? 4 : 3));
    const MulticlassTestset t{counts};
    ScoreReport scores;
    for (int s = 0; s < static_cast<int>(pick(1, 2)); ++s) {
      scores.set("macro-" + linear[static_cast<std::size_t>(pick(0, 6))], "0." + std::to_string(pick(0, 9)));
    }
    const auto engine = check_multiclass_macro(t, scores, eps(2));
    const auto oracle = brute_force_macro(t, scores, eps(2));
    ASSERT_EQ(!engine.inconsistency, oracle.consistent) << "trial " << trial;
    if (engine.witness) {
      expect_rows_match(matrix_of(*engine.witness));
      ASSERT_TRUE(reproduces(multiclass(counts, ClassAggregation::macro), *engine.witness, scores, eps(2)));
    }
  }
}

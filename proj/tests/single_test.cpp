#include <chrono>

#include "support.hpp"

using namespace scoresleuth;
using namespace scoresleuth::testing;

namespace {

const ScoreReport kCounts = report({{"acc", "0.8464"}, {"sens", "0.81"}, {"f1", "0.4894"}});

}  // namespace

TEST(SingleTestset, ReportedScoresAreConsistent) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = check_single_testset(Testset{100, 1000}, kCounts, eps(4));
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
  EXPECT_FALSE(r.inconsistency);
  EXPECT_EQ(r.procedure, "single_testset");
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->binary().tp, 81);
  EXPECT_EQ(r.witness->binary().tn, 850);
  ASSERT_EQ(r.evidence.size(), 3u);
  for (const auto& ev : r.evidence) {
    ASSERT_TRUE(ev.witness_value);
    EXPECT_TRUE(ev.target.contains(*ev.witness_value)) << ev.id;
    EXPECT_EQ(ev.radius, Rational(1, 10000));
  }
}

// Regions frozen from a fraction-arithmetic scan of every (tp, tn).
TEST(SingleTestset, FeasibleRegions) {
  EXPECT_EQ(pairs_of(feasible_region(Testset{100, 1000}, kCounts, eps(4))),
            (std::vector<std::pair<Count, Count>>{{81, 850}}));
  EXPECT_EQ(pairs_of(feasible_region(Testset{75, 304}, report({{"acc", "0.7916"}, {"sens", "0.2933"}, {"spec", "0.9145"}}),
                                     eps(4))),
            (std::vector<std::pair<Count, Count>>{{22, 278}}));
  EXPECT_EQ(feasible_region(Testset{100, 1000}, report({{"acc", "0.8464"}}), eps(4)).size(), 101u);
  EXPECT_EQ(feasible_region(Testset{10, 20}, report({{"sens", "0.5"}}), eps(2)).size(), 21u);
  EXPECT_EQ(pairs_of(feasible_region(Testset{10, 20}, report({{"acc", "0.5"}, {"f1", "0.4"}}), eps(2))),
            (std::vector<std::pair<Count, Count>>{{5, 10}}));
}

TEST(SingleTestset, PerturbedReportsAreInconsistent) {
  const auto acc = check_single_testset(Testset{100, 1000}, report({{"acc", "0.8474"}, {"sens", "0.81"}, {"f1", "0.4894"}}),
                                        eps(4));
  EXPECT_TRUE(acc.inconsistency);
  EXPECT_FALSE(acc.witness);
  ASSERT_TRUE(acc.violation);

  const auto p = check_single_testset(Testset{110, 1000}, kCounts, eps(4));
  EXPECT_TRUE(p.inconsistency);
  ASSERT_TRUE(p.violation);
  EXPECT_FALSE(p.violation->kind.empty());
}

TEST(SingleTestset, OutOfRangeValues) {
  const auto r = check_single_testset(Testset{10, 10}, report({{"acc", "1.2"}}), eps(2));
  EXPECT_TRUE(r.inconsistency);
  ASSERT_TRUE(r.violation);
  EXPECT_EQ(r.violation->kind, "value_out_of_range");
  EXPECT_EQ(r.violation->subject, "acc");
  EXPECT_FALSE(check_single_testset(Testset{10, 10}, report({{"bm", "-0.9"}}), eps(2)).inconsistency);
}

TEST(SingleTestset, SlackWidensEveryTarget) {
  const auto scores = report({{"acc", "0.8474"}, {"sens", "0.81"}, {"f1", "0.4894"}});
  Uncertainty u = eps(4);
  EXPECT_TRUE(check_single_testset(Testset{100, 1000}, scores, u).inconsistency);
  u.solver_slack = Rational(1, 1000);
  EXPECT_FALSE(check_single_testset(Testset{100, 1000}, scores, u).inconsistency);
}

TEST(SingleTestset, IrrationalScores) {
  // fm and gm at (81, 850) of (100, 1000), truncated to 4 decimals
  const auto r = check_single_testset(Testset{100, 1000}, report({{"fm", "0.5329"}, {"gm", "0.8297"}, {"acc", "0.8464"}}),
                                      eps(4));
  EXPECT_FALSE(r.inconsistency);
  const auto region = feasible_region(Testset{100, 1000}, report({{"fm", "0.5329"}, {"gm", "0.8297"}, {"acc", "0.8464"}}),
                                      eps(4));
  EXPECT_NE(std::find(region.begin(), region.end(), BinaryOutcome{Testset{100, 1000}, 81, 850}), region.end());
  const auto mcc = check_single_testset(Testset{100, 1000}, report({{"mcc", "0.4658"}, {"sens", "0.81"}, {"spec", "0.85"}}),
                                        eps(4));
  EXPECT_FALSE(mcc.inconsistency);
  EXPECT_TRUE(check_single_testset(Testset{100, 1000}, report({{"mcc", "0.4758"}, {"sens", "0.81"}, {"spec", "0.85"}}),
                                   eps(4))
                  .inconsistency);
}

TEST(SingleTestset, Errors) {
  EXPECT_THROWS_CODE(check_single_testset(Testset{0, 0}, kCounts, eps(4)), ErrorCode::empty_experiment);
  EXPECT_THROWS_CODE(check_single_testset(Testset{5, 5}, ScoreReport{}, eps(4)), ErrorCode::invalid_spec);
  EXPECT_THROWS_CODE(check_single_testset(Testset{5, 5}, report({{"auc", "0.5"}}), eps(4)), ErrorCode::unknown_score_id);
  CheckOptions tight;
  tight.region_cap = 10;
  EXPECT_THROWS_CODE(feasible_region(Testset{100, 1000}, report({{"acc", "0.8464"}}), eps(4), tight),
                     ErrorCode::region_too_large);
}

TEST(SingleTestset, DisabledScoresStillCheckable) {
  // lrp is not in the default set but can be named explicitly
  const auto r = check_single_testset(Testset{100, 1000}, report({{"lrp", "5.4"}, {"sens", "0.81"}}), eps(4));
  EXPECT_FALSE(r.inconsistency);
}

#include <random>

#include "support.hpp"

using namespace scoresleuth;
using namespace scoresleuth::testing;

namespace {

const ConfusionCounts kCounts{81, 850, 100, 1000};

Rational exact(const std::string& id, const ConfusionCounts& c) {
  const auto v = evaluate(id, c);
  EXPECT_TRUE(v && v->is_rational()) << id;
  return v->rational();
}

}  // namespace

TEST(Registry, ShapeOfTheStandardSet) {
  const auto& reg = default_registry();
  EXPECT_EQ(reg.all().size(), 22u);
  EXPECT_EQ(reg.enabled().size(), 20u);
  EXPECT_FALSE(reg.at("lrp").enabled_by_default);
  EXPECT_FALSE(reg.at("lrn").enabled_by_default);
  for (const char* id : {"acc", "err", "sens", "spec", "fpr", "fnr", "bacc", "bm"}) {
    EXPECT_TRUE(reg.at(id).linear_in_counts) << id;
  }
  for (const char* id : {"ppv", "f1", "fm", "mcc", "kappa", "ji"}) EXPECT_FALSE(reg.at(id).linear_in_counts) << id;
  EXPECT_THROWS_CODE(reg.at("auc"), ErrorCode::unknown_score_id);
}

// Values from an independent fraction-arithmetic script at (81, 850; 100, 1000).
TEST(Scores, ExactValuesAtFixedCounts) {
  EXPECT_EQ(exact("acc", kCounts), Rational(931, 1100));
  EXPECT_EQ(exact("err", kCounts), Rational(169, 1100));
  EXPECT_EQ(exact("sens", kCounts), Rational(81, 100));
  EXPECT_EQ(exact("spec", kCounts), Rational(17, 20));
  EXPECT_EQ(exact("ppv", kCounts), Rational(27, 77));
  EXPECT_EQ(exact("npv", kCounts), Rational(850, 869));
  EXPECT_EQ(exact("fpr", kCounts), Rational(3, 20));
  EXPECT_EQ(exact("fnr", kCounts), Rational(19, 100));
  EXPECT_EQ(exact("fdr", kCounts), Rational(50, 77));
  EXPECT_EQ(exact("for", kCounts), Rational(19, 869));
  EXPECT_EQ(exact("f1", kCounts), Rational(162, 331));
  EXPECT_EQ(exact("fbeta", kCounts), Rational(405, 631));
  EXPECT_EQ(exact("bacc", kCounts), Rational(83, 100));
  EXPECT_EQ(exact("bm", kCounts), Rational(33, 50));
  EXPECT_EQ(exact("mk", kCounts), Rational(2000, 6083));
  EXPECT_EQ(exact("kappa", kCounts), Rational(120, 289));
  EXPECT_EQ(exact("ji", kCounts), Rational(81, 250));
  EXPECT_EQ(exact("lrp", kCounts), Rational(27, 5));
  EXPECT_EQ(exact("lrn", kCounts), Rational(19, 85));

  const auto fm = *evaluate("fm", kCounts);
  EXPECT_EQ(fm.compare(Rational(2187, 7700)), 1);  // sqrt(x) > x below 1
  EXPECT_EQ((fm * fm).rational(), Rational(2187, 7700));
  EXPECT_NEAR(fm.to_double(), 0.5329408729174129, 1e-12);
  const auto gm = *evaluate("gm", kCounts);
  EXPECT_EQ((gm * gm).rational(), Rational(1377, 2000));
  EXPECT_NEAR(gm.to_double(), 0.8297590011563598, 1e-12);
  const auto mcc = *evaluate("mcc", kCounts);
  // mcc^2 = 66000^2 / 20073900000
  EXPECT_EQ((mcc * mcc).rational(), Rational(120, 553));
  EXPECT_NEAR(mcc.to_double(), 0.46583064699709914, 1e-12);
}

TEST(Scores, FbetaUsesTheRegistryBeta) {
  const ScoreRegistry one = ScoreRegistry::standard(Rational(1));
  EXPECT_EQ(evaluate(one.at("fbeta"), kCounts)->rational(), Rational(162, 331));
  const ScoreRegistry half = ScoreRegistry::standard(Rational(1, 2));
  // (1 + 1/4) tp / ((1 + 1/4) tp + fn / 4 + fp)
  EXPECT_EQ(evaluate(half.at("fbeta"), kCounts)->rational(), Rational(405, 1024));
}

TEST(Scores, UndefinedWhenADenominatorVanishes) {
  EXPECT_FALSE(evaluate("sens", ConfusionCounts{0, 3, 0, 5}));
  EXPECT_FALSE(evaluate("ppv", ConfusionCounts{0, 5, 4, 5}));
  EXPECT_EQ(evaluate("mcc", ConfusionCounts{4, 5, 4, 5})->rational(), Rational(1));
  EXPECT_FALSE(evaluate("mcc", ConfusionCounts{0, 5, 4, 5}));
  EXPECT_TRUE(evaluate("acc", ConfusionCounts{0, 0, 4, 5}));
}

TEST(Scores, AffineFormsOfLinearScores) {
  const auto acc = *affine_form(default_registry().at("acc"), 100, 1000);
  EXPECT_EQ(acc, (AffineForm{Rational(1, 1100), Rational(1, 1100), Rational(0)}));
  const auto bm = *affine_form(default_registry().at("bm"), 4, 5);
  EXPECT_EQ(bm, (AffineForm{Rational(1, 4), Rational(1, 5), Rational(-1)}));
  const auto fnr = *affine_form(default_registry().at("fnr"), 4, 5);
  EXPECT_EQ(fnr, (AffineForm{Rational(-1, 4), Rational(0), Rational(1)}));
  EXPECT_FALSE(affine_form(default_registry().at("sens"), 0, 5));
  EXPECT_THROWS_CODE(affine_form(default_registry().at("f1"), 4, 5), ErrorCode::nonlinear_score_unsupported);
}

// Interval bounds over a box must contain every defined point value.
TEST(ScoresProperty, IntervalBoundsAreSound) {
  std::mt19937_64 rng(7);
  const auto pick = [&](Count lo, Count hi) { return std::uniform_int_distribution<Count>(lo, hi)(rng); };
  for (int trial = 0; trial < 300; ++trial) {
    const Count p = pick(0, 12);
    const Count n = pick(0, 12);
    if (p + n == 0) continue;
    const Count a = pick(0, p);
    const Count b = pick(a, p);
    const Count c = pick(0, n);
    const Count d = pick(c, n);
    for (const auto& def : default_registry().all()) {
      const RationalInterval box = evaluate_interval(def, IntInterval{a, b}, IntInterval{c, d}, p, n);
      for (Count tp = a; tp <= b; ++tp) {
        for (Count tn = c; tn <= d; ++tn) {
          const auto v = evaluate(def, ConfusionCounts{tp, tn, p, n});
          if (v) {
            ASSERT_TRUE(box.contains(*v)) << def.id << " at " << tp << "," << tn << " / " << p << "," << n << " box "
                                          << box.to_string();
            ASSERT_TRUE(def.range.contains(*v)) << def.id;
          }
        }
      }
    }
  }
}

// invert_tp keeps every tp that has a matching tn; likewise invert_tn.
TEST(ScoresProperty, InversionNeverDropsFeasibleCounts) {
  std::mt19937_64 rng(11);
  const auto pick = [&](Count lo, Count hi) { return std::uniform_int_distribution<Count>(lo, hi)(rng); };
  const auto ids = default_registry().enabled();
  for (int trial = 0; trial < 400; ++trial) {
    const Count p = pick(1, 15);
    const Count n = pick(1, 15);
    const auto& def = *ids[static_cast<std::size_t>(pick(0, static_cast<Count>(ids.size()) - 1))];
    const auto v = evaluate(def, ConfusionCounts{pick(0, p), pick(0, n), p, n});
    if (!v) continue;
    const RationalInterval target = RationalInterval::centered(v->lower_bound(2), Rational(1, 100));
    const IntInterval tps = invert_tp(def, target, IntInterval{0, n}, p, n);
    const IntInterval tns = invert_tn(def, target, IntInterval{0, p}, p, n);
    for (Count tp = 0; tp <= p; ++tp) {
      for (Count tn = 0; tn <= n; ++tn) {
        const auto w = evaluate(def, ConfusionCounts{tp, tn, p, n});
        if (w && target.contains(*w)) {
          ASSERT_TRUE(tps.contains(tp)) << def.id << " tp " << tp;
          ASSERT_TRUE(tns.contains(tn)) << def.id << " tn " << tn;
        }
      }
    }
  }
}

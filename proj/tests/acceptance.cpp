// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Seeds are fixed so every run checks the same instances.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "families.hpp"

using namespace scoresleuth;
using namespace scoresleuth::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int number, const char* title, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  if (!out.pass) ++failures;
  std::printf("criterion %d %s  %s: %s (%.2f s)\n", number, out.pass ? "PASS" : "FAIL", title, out.detail.c_str(),
              seconds_since(start));
  std::fflush(stdout);
}

ScoreReport report(const std::map<std::string, std::string>& entries) { return ScoreReport::from_text(entries); }

Uncertainty eps(int k) { return Uncertainty::eps(ten_to_minus(k)); }

std::string pair_text(const BinaryOutcome& b) {
  return "(" + std::to_string(b.tp) + ", " + std::to_string(b.tn) + ")";
}

/// A hidden-truth report, then perturbed so that both verdicts occur. When no
/// requested score can be defined on the spec (sens without positives), the
/// ids are redrawn from `pool`.
ScoreReport noisy_report(Rng& rng, const ExperimentSpec& spec, std::vector<std::string> ids, unsigned k,
                         const std::vector<std::string>& pool, int most = 4) {
  while (true) {
    try {
      const auto honest = generate_true_report(spec, rng(), k, RoundingMode::round, ids);
      return perturb(rng, honest.report, k);
    } catch (const std::runtime_error&) {
      ids = pick_ids(rng, pool, most);
    }
  }
}

Outcome reproduced() {
  const auto start = Clock::now();
  const auto r = check_single_testset(Testset{100, 1000},
                                      report({{"acc", "0.8464"}, {"sens", "0.81"}, {"f1", "0.4894"}}), eps(4));
  const double t = seconds_since(start);
  if (r.inconsistency || !r.witness) return {false, "reported inconsistent"};
  const auto& b = r.witness->binary();
  return {b.tp == 81 && b.tn == 850 && t < 1.0, "witness " + pair_text(b)};
}

Outcome perturbations() {
  auto start = Clock::now();
  const auto typo = check_single_testset(Testset{100, 1000},
                                         report({{"acc", "0.8474"}, {"sens", "0.81"}, {"f1", "0.4894"}}), eps(4));
  const double t1 = seconds_since(start);
  start = Clock::now();
  const auto wrong_p = check_single_testset(Testset{110, 1000},
                                            report({{"acc", "0.8464"}, {"sens", "0.81"}, {"f1", "0.4894"}}), eps(4));
  const double t2 = seconds_since(start);
  std::ostringstream d;
  d << "acc 0.8474 " << (typo.inconsistency ? "inconsistent" : "consistent") << ", p=110 "
    << (wrong_p.inconsistency ? "inconsistent" : "consistent");
  return {typo.inconsistency && wrong_p.inconsistency && t1 < 1.0 && t2 < 1.0, d.str()};
}

Outcome isic() {
  const auto ok = check_bundle("isic2016", report({{"acc", "0.7916"}, {"sens", "0.2933"}, {"spec", "0.9145"}}), eps(4));
  const auto bad =
      check_bundle("isic2016", report({{"acc", "0.7926"}, {"sens", "0.2933"}, {"spec", "0.9145"}}), eps(4));
  std::string d = ok.inconsistency ? "reported scores inconsistent" : "witness " + pair_text(ok.witness->binary());
  d += bad.inconsistency ? ", acc 0.7926 inconsistent" : ", acc 0.7926 consistent";
  return {!ok.inconsistency && bad.inconsistency, d};
}

Outcome single_vs_oracle() {
  Rng rng(4);
  const auto start = Clock::now();
  int consistent = 0;
  int inconsistent = 0;
  const int total = 1200;
  for (int i = 0; i < total; ++i) {
    Testset t{draw(rng, 0, 50), draw(rng, 0, 50)};
    if (t.total() == 0) t.n = 1;
    const unsigned k = static_cast<unsigned>(draw(rng, 2, 4));
    const auto scores = noisy_report(rng, ExperimentSpec::single(t), pick_ids(rng, all_score_ids()), k, all_score_ids());
    const auto unc = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));

    const auto oracle = brute_force_single(t, scores, unc);
    std::vector<std::pair<Count, Count>> expected;
    for (const auto& w : oracle.witnesses) expected.emplace_back(w.binary().tp, w.binary().tn);
    std::vector<std::pair<Count, Count>> region;
    for (const auto& b : feasible_region(t, scores, unc)) region.emplace_back(b.tp, b.tn);
    const auto r = check_single_testset(t, scores, unc);

    const std::string where = "instance " + std::to_string(i) + " (" + std::to_string(t.p) + ", " +
                              std::to_string(t.n) + ") " + to_json(scores).dump();
    if (region != expected) return {false, where + ": region differs from enumeration"};
    if (r.inconsistency != !oracle.consistent) return {false, where + ": verdict differs from enumeration"};
    if (r.witness) {
      const std::pair<Count, Count> w{r.witness->binary().tp, r.witness->binary().tn};
      if (std::find(expected.begin(), expected.end(), w) == expected.end()) return {false, where + ": witness not in region"};
    }
    ++(oracle.consistent ? consistent : inconsistent);
  }
  const double t = seconds_since(start);
  return {t < 60.0, std::to_string(total) + " instances agree (" + std::to_string(consistent) + " consistent, " +
                        std::to_string(inconsistent) + " inconsistent)"};
}

Outcome mos_vs_oracle() {
  Rng rng(5);
  const auto start = Clock::now();
  int consistent = 0;
  const int total = 600;
  for (int i = 0; i < total; ++i) {
    std::vector<Testset> folds(static_cast<std::size_t>(draw(rng, 1, 3)));
    std::vector<AnyTestset> any;
    for (auto& f : folds) {
      f = Testset{draw(rng, 0, 6), draw(rng, 0, 6)};
      if (f.total() == 0) f.p = 1;
      any.emplace_back(f);
    }
    ExperimentSpec spec;
    spec.datasets.push_back({reduce_som(any), FoldingScheme::known(any)});
    spec.fold_aggregation = AggregationMode::mean_of_scores;
    const unsigned k = static_cast<unsigned>(draw(rng, 1, 3));
    const auto scores = noisy_report(rng, spec, pick_ids(rng, linear_score_ids(), 3), k, linear_score_ids(), 3);
    const auto unc = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));

    const auto oracle = brute_force_mos(folds, scores, unc);
    const auto r = check_mos_known_folds(folds, scores, unc);
    const std::string where = "instance " + std::to_string(i) + " " + to_json(scores).dump();
    if (r.inconsistency != !oracle.consistent) return {false, where + ": verdict differs from enumeration"};
    if (r.witness) {
      const auto miss = witness_mismatch(spec, *r.witness, scores, unc);
      if (!miss.empty()) return {false, where + ": " + miss};
    }
    consistent += oracle.consistent ? 1 : 0;
  }
  return {seconds_since(start) < 60.0,
          std::to_string(total) + " instances agree (" + std::to_string(consistent) + " consistent)"};
}

Outcome macro_vs_oracle() {
  Rng rng(6);
  const auto start = Clock::now();
  int consistent = 0;
  const int total = 400;
  for (int i = 0; i < total; ++i) {
    std::vector<Count> counts(static_cast<std::size_t>(draw(rng, 2, 3)));
    Count budget = 9;
    for (auto& c : counts) {
      c = draw(rng, 1, budget - static_cast<Count>(counts.size()) + 1);
      budget -= c - 1;
    }
    const MulticlassTestset t{counts};
    ExperimentSpec spec = ExperimentSpec::single(t);
    spec.class_aggregation = ClassAggregation::macro;
    const unsigned k = static_cast<unsigned>(draw(rng, 1, 3));
    const auto scores = noisy_report(rng, spec, pick_ids(rng, linear_score_ids(), 3), k, linear_score_ids(), 3);
    const auto unc = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));

    const auto oracle = brute_force_macro(t, scores, unc);
    const auto r = check_multiclass_macro(t, scores, unc);
    const std::string where = "instance " + std::to_string(i) + " " + to_json(scores).dump();
    if (r.inconsistency != !oracle.consistent) return {false, where + ": verdict differs from enumeration"};
    if (r.witness) {
      const auto miss = witness_mismatch(spec, *r.witness, scores, unc);
      if (!miss.empty()) return {false, where + ": " + miss};
    }
    consistent += oracle.consistent ? 1 : 0;
  }
  return {seconds_since(start) < 60.0,
          std::to_string(total) + " instances agree (" + std::to_string(consistent) + " consistent)"};
}

Outcome no_false_alarms() {
  Rng rng(7);
  const auto families = classification_families();
  const std::size_t slots = families.size() + 1;
  std::vector<int> per_family(slots, 0);
  const int total = 2400;
  for (int i = 0; i < total; ++i) {
    const std::size_t slot = static_cast<std::size_t>(i) % slots;
    const unsigned k = static_cast<unsigned>(1 + (i / static_cast<int>(slots)) % 4);
    const RoundingMode mode = (i / static_cast<int>(slots * 4)) % 2 == 0 ? RoundingMode::round : RoundingMode::truncate;
    const std::uint64_t seed = rng();
    if (slot == families.size()) {
      const auto t = generate_regression_report(seed, k, mode);
      const auto r = check_regression(t.context, t.report, t.uncertainty);
      if (r.inconsistency) return {false, "regression seed " + std::to_string(seed) + ": " + r.violation->detail};
    } else {
      const Draw d = families[slot].make(rng);
      const auto t = generate_true_report(d.spec, seed, k, mode, d.scores);
      const auto r = check_experiment(d.spec, t.report, t.uncertainty);
      const std::string where = families[slot].name + " " + to_json(d.spec).dump() + " " + to_json(t.report).dump();
      if (r.inconsistency) return {false, where + ": flagged (" + r.violation->detail + ")"};
      if (!r.witness) return {false, where + ": no witness"};
      const auto miss = witness_mismatch(d.spec, *r.witness, t.report, t.uncertainty);
      if (!miss.empty()) return {false, where + ": " + miss};
    }
    ++per_family[slot];
  }
  std::string d = std::to_string(total) + " honest reports, none flagged (";
  for (std::size_t s = 0; s < slots; ++s) {
    d += (s ? ", " : "") + (s < families.size() ? families[s].name : std::string("regression")) + " " +
         std::to_string(per_family[s]);
  }
  return {true, d + ")"};
}

Outcome regression() {
  const RegressionContext var4{std::nullopt, Rational(4)};
  const bool examples =
      !check_regression(var4, report({{"mae", "0.0"}, {"mse", "0.0"}, {"r2", "1.0"}}), eps(4)).inconsistency &&
      check_regression(RegressionContext{}, report({{"mae", "2.0"}, {"mse", "1.0"}}), eps(4)).inconsistency &&
      !check_regression(var4, report({{"mse", "1.0"}, {"r2", "0.75"}}), eps(4)).inconsistency &&
      check_regression(var4, report({{"mse", "1.0"}, {"r2", "0.8"}}), eps(4)).inconsistency;
  if (!examples) return {false, "a worked example has the wrong verdict"};
  const int total = 600;
  for (int i = 0; i < total; ++i) {
    const auto seed = static_cast<std::uint64_t>(10'000 + i);
    const auto t = generate_regression_report(seed, static_cast<unsigned>(1 + i % 4),
                                              i % 2 ? RoundingMode::truncate : RoundingMode::round);
    const auto r = check_regression(t.context, t.report, t.uncertainty);
    if (r.inconsistency) return {false, "seed " + std::to_string(seed) + " flagged: " + r.violation->detail};
  }
  return {true, "4 examples, " + std::to_string(total) + " random vectors consistent"};
}

bool consistent(const ExperimentSpec& spec, const ScoreReport& scores, const Uncertainty& unc) {
  return !check_experiment(spec, scores, unc).inconsistency;
}

Outcome monotonicity() {
  Rng rng(9);
  const auto families = classification_families();
  int eps_pairs = 0;
  int eps_premise = 0;
  int subset_pairs = 0;
  int subset_premise = 0;
  for (int i = 0; eps_pairs < 600 || subset_pairs < 600; ++i) {
    const Family& f = families[static_cast<std::size_t>(i) % families.size()];
    const Draw d = f.make(rng);
    const unsigned k = static_cast<unsigned>(draw(rng, 2, 3));
    const auto scores = noisy_report(rng, d.spec, d.scores, k, d.scores);
    const std::string where = f.name + " " + to_json(d.spec).dump() + " " + to_json(scores).dump();

    const auto tight = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));
    const auto loose = Uncertainty::eps(ten_to_minus(static_cast<int>(k)) * Rational(draw(rng, 2, 20)));
    const bool at_tight = consistent(d.spec, scores, tight);
    if (eps_pairs < 600) {
      ++eps_pairs;
      if (at_tight) {
        ++eps_premise;
        if (!consistent(d.spec, scores, loose)) return {false, where + ": lost consistency as eps grew"};
      }
    }

    if (scores.size() < 2) continue;
    ScoreReport fewer;
    const auto drop = static_cast<std::size_t>(draw(rng, 0, static_cast<Count>(scores.size()) - 1));
    std::size_t idx = 0;
    for (const auto& [id, entry] : scores) {
      if (idx++ != drop) fewer.set(id, *entry.text);
    }
    ++subset_pairs;
    if (at_tight) {
      ++subset_premise;
      if (!consistent(d.spec, fewer, tight)) return {false, where + ": lost consistency when a score was dropped"};
    }
  }
  return {true, std::to_string(eps_pairs) + " eps pairs (" + std::to_string(eps_premise) + " consistent at the smaller eps), " +
                      std::to_string(subset_pairs) + " score-subset pairs (" + std::to_string(subset_premise) +
                      " consistent on the full set)"};
}

}  // namespace

int main() {
  run(1, "100 + 1000 testset is reproduced", reproduced);
  run(2, "perturbed report and testset are refuted", perturbations);
  run(3, "isic2016 bundle", isic);
  run(4, "single testset against enumeration", single_vs_oracle);
  run(5, "mean of scores against enumeration", mos_vs_oracle);
  run(6, "macro averaging against enumeration", macro_vs_oracle);
  run(7, "no false alarms on honest reports", no_false_alarms);
  run(8, "regression relations", regression);
  run(9, "monotonicity in eps and in the score set", monotonicity);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

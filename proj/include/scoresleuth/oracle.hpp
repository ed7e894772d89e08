#pragma once

// Brute-force oracles and report generators. The oracles enumerate every
// outcome and evaluate scores exactly; they share no code with the pruning,
// inversion or branch-and-bound paths, so agreement with the engine is
// independent evidence. Exponentially slow by design.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scoresleuth/folds.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/outcome.hpp"
#include "scoresleuth/regression.hpp"
#include "scoresleuth/scores.hpp"

namespace scoresleuth {

inline constexpr std::uint64_t kOracleLimit = 1'000'000;

struct OracleVerdict {
  bool consistent = false;
  /// Every witness for brute_force_single (ascending (tp, tn)); the first
  /// witness in enumeration order for the other oracles.
  std::vector<Witness> witnesses;
};

namespace detail {

struct OracleTarget {
  const ScoreDefinition* score;
  RationalInterval interval;
};

inline std::vector<OracleTarget> oracle_targets(const ScoreReport& scores, const Uncertainty& uncertainty,
                                                const ScoreRegistry& registry) {
  std::vector<OracleTarget> out;
  for (const auto& [id, entry] : scores) {
    const auto sep = id.find('-');
    const std::string base = sep == std::string::npos ? id : id.substr(sep + 1);
    out.push_back(OracleTarget{&registry.at(base), uncertainty.interval_for(id, entry.value)});
  }
  return out;
}

inline void check_size(std::uint64_t size, std::uint64_t factor) {
  if (factor != 0 && size > kOracleLimit / factor) {
    throw Error(ErrorCode::instance_too_large, "brute force over more than " + std::to_string(kOracleLimit) + " outcomes");
  }
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative counts,
/// in lexicographic order.
inline void compositions(Count total, std::size_t parts, std::vector<Count>& current,
                         std::vector<std::vector<Count>>& out) {
  if (current.size() + 1 == parts) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (Count x = 0; x <= total; ++x) {
    current.push_back(x);
    compositions(total - x, parts, current, out);
    current.pop_back();
  }
}

inline std::vector<std::vector<Count>> compositions(Count total, std::size_t parts) {
  std::vector<std::vector<Count>> out;
  std::vector<Count> current;
  compositions(total, parts, current, out);
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kOracleLimit * 16) return r;
  }
  return r;
}

}  // namespace detail

inline OracleVerdict brute_force_single(const Testset& testset, const ScoreReport& scores, const Uncertainty& uncertainty,
                                        const ScoreRegistry& registry = default_registry()) {
  const auto pairs = static_cast<std::uint64_t>(testset.p + 1) * static_cast<std::uint64_t>(testset.n + 1);
  if (pairs > kOracleLimit) {
    throw Error(ErrorCode::instance_too_large, std::to_string(pairs) + " (tp, tn) pairs exceed the oracle limit");
  }
  const auto targets = detail::oracle_targets(scores, uncertainty, registry);
  OracleVerdict out;
  for (Count tp = 0; tp <= testset.p; ++tp) {
    for (Count tn = 0; tn <= testset.n; ++tn) {
      bool ok = true;
      for (const auto& t : targets) {
        const auto v = evaluate(*t.score, ConfusionCounts{tp, tn, testset.p, testset.n});
        if (!v || !t.interval.contains(*v)) {
          ok = false;
          break;
        }
      }
      if (ok) out.witnesses.push_back(Witness::single(BinaryOutcome{testset, tp, tn}));
    }
  }
  out.consistent = !out.witnesses.empty();
  return out;
}

/// Mean of per-fold scores over known folds, all (tp_j, tn_j) enumerated.
inline OracleVerdict brute_force_mos(const std::vector<Testset>& folds, const ScoreReport& scores,
                                     const Uncertainty& uncertainty, const ScoreRegistry& registry = default_registry()) {
  std::uint64_t size = 1;
  for (const auto& f : folds) {
    const auto d = static_cast<std::uint64_t>(f.p + 1) * static_cast<std::uint64_t>(f.n + 1);
    detail::check_size(size, d);
    size *= d;
  }
  const auto targets = detail::oracle_targets(scores, uncertainty, registry);
  std::vector<BinaryOutcome> current;
  for (const auto& f : folds) current.push_back(BinaryOutcome{f, 0, 0});
  OracleVerdict out;
  while (true) {
    bool ok = true;
    for (const auto& t : targets) {
      Surd sum(Rational(0));
      bool defined = true;
      for (const auto& b : current) {
        const auto v = evaluate(*t.score, ConfusionCounts{b.tp, b.tn, b.testset.p, b.testset.n});
        if (!v) {
          defined = false;
          break;
        }
        sum = sum + *v;
      }
      if (!defined || !t.interval.contains(sum * Surd(make_rational(1, static_cast<Count>(folds.size()))))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Witness w;
      w.datasets.push_back(DatasetOutcome{std::vector<UnitOutcome>(current.begin(), current.end())});
      out.witnesses.push_back(std::move(w));
      out.consistent = true;
      return out;
    }
    // odometer over (tp_0, tn_0, tp_1, ...), last component fastest
    std::size_t j = current.size();
    bool advanced = false;
    while (j-- > 0 && !advanced) {
      auto& b = current[j];
      if (b.tn < b.testset.n) {
        ++b.tn;
        advanced = true;
      } else if (b.tp < b.testset.p) {
        ++b.tp;
        b.tn = 0;
        advanced = true;
      } else {
        b.tp = 0;
        b.tn = 0;
      }
    }
    if (!advanced) return out;
  }
}

/// Macro-averaged scores over every matrix with the given row sums. Score ids
/// may carry a "macro-" prefix.
inline OracleVerdict brute_force_macro(const MulticlassTestset& testset, const ScoreReport& scores,
                                       const Uncertainty& uncertainty, const ScoreRegistry& registry = default_registry()) {
  const std::size_t c = testset.classes();
  std::vector<std::vector<std::vector<Count>>> rows;
  std::uint64_t size = 1;
  for (Count ci : testset.class_counts) {
    const std::uint64_t count = detail::binomial(static_cast<std::uint64_t>(ci) + c - 1, c - 1);
    detail::check_size(size, count);
    size *= count;
    rows.push_back(detail::compositions(ci, c));
  }
  const auto targets = detail::oracle_targets(scores, uncertainty, registry);
  std::vector<std::size_t> pick(c, 0);
  OracleVerdict out;
  while (true) {
    MulticlassOutcome m{testset, {}};
    for (std::size_t i = 0; i < c; ++i) m.matrix.push_back(rows[i][pick[i]]);
    bool ok = true;
    for (const auto& t : targets) {
      const auto v = unit_score(*t.score, m, ClassAggregation::macro);
      if (!v || !t.interval.contains(*v)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.witnesses.push_back(Witness::single(std::move(m)));
      out.consistent = true;
      return out;
    }
    std::size_t i = c;
    bool advanced = false;
    while (i-- > 0) {
      if (++pick[i] < rows[i].size()) {
        advanced = true;
        break;
      }
      pick[i] = 0;
    }
    if (!advanced) return out;
  }
}

// -- generators --------------------------------------------------------------

enum class RoundingMode { round, truncate };

/// A report produced honestly from a hidden outcome.
struct TrueReport {
  Witness hidden;
  ScoreReport report;
  Uncertainty uncertainty;  // 10^-k for every score
};

namespace detail {

inline std::string reported_text(const Surd& v, unsigned k, RoundingMode mode) {
  return format_scaled_decimal(mode == RoundingMode::round ? v.round_scaled(k) : v.trunc_scaled(k), k);
}

inline Count uniform(std::mt19937_64& rng, Count lo, Count hi) {
  return std::uniform_int_distribution<Count>(lo, hi)(rng);
}

inline UnitOutcome random_unit(const AnyTestset& t, std::mt19937_64& rng) {
  if (const auto* b = std::get_if<Testset>(&t)) return BinaryOutcome{*b, uniform(rng, 0, b->p), uniform(rng, 0, b->n)};
  const auto& mt = std::get<MulticlassTestset>(t);
  const std::size_t c = mt.classes();
  MulticlassOutcome m{mt, std::vector<std::vector<Count>>(c, std::vector<Count>(c, 0))};
  for (std::size_t i = 0; i < c; ++i) {
    // a random accuracy level per class keeps diagonal-heavy matrices common
    const Count correct = uniform(rng, 0, mt.class_counts[i]);
    m.matrix[i][i] = correct;
    for (Count s = correct; s < mt.class_counts[i]; ++s) {
      m.matrix[i][static_cast<std::size_t>(uniform(rng, 0, static_cast<Count>(c) - 1))] += 1;
    }
  }
  return m;
}

/// k nonempty folds with every sample placed uniformly at random.
inline std::vector<std::vector<Count>> scattered_shapes(const std::vector<Count>& classes, Count k, std::mt19937_64& rng) {
  while (true) {
    std::vector<std::vector<Count>> shapes(static_cast<std::size_t>(k), std::vector<Count>(classes.size(), 0));
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (Count s = 0; s < classes[c]; ++s) ++shapes[static_cast<std::size_t>(uniform(rng, 0, k - 1))][c];
    }
    const bool nonempty = std::all_of(shapes.begin(), shapes.end(), [](const std::vector<Count>& f) {
      return std::any_of(f.begin(), f.end(), [](Count x) { return x > 0; });
    });
    if (nonempty) return shapes;
  }
}

/// A fold configuration drawn uniformly from the enumeration, or by scattering
/// samples when there are more than `cap` configurations.
inline std::vector<AnyTestset> random_folds(const DatasetSpec& d, std::mt19937_64& rng, std::size_t cap) {
  if (d.folding.kind != FoldingKind::unknown_folds_kfold) return representative_folds(d);
  const auto classes = class_vector(d.testset);
  std::vector<std::vector<Count>> pick;
  try {
    const auto configs = enumerate_fold_shapes(classes, d.folding.k, cap);
    pick = configs[static_cast<std::size_t>(uniform(rng, 0, static_cast<Count>(configs.size()) - 1))];
  } catch (const Error& e) {
    if (e.code() != ErrorCode::too_many_configurations) throw;
    pick = scattered_shapes(classes, d.folding.k, rng);
  }
  std::vector<AnyTestset> out;
  for (const auto& f : pick) out.push_back(testset_from_shape(f, is_multiclass(d.testset)));
  return out;
}

}  // namespace detail

/// Samples an outcome of `spec`, evaluates `score_ids` exactly under its
/// aggregation, and rounds or truncates to k decimals. Scores undefined on
/// the sample are left out; at least one score is always reported. Multiclass
/// ids get the micro-/macro- prefix of spec.class_aggregation.
inline TrueReport generate_true_report(const ExperimentSpec& spec, std::uint64_t seed, unsigned k, RoundingMode mode,
                                       const std::vector<std::string>& score_ids,
                                       const ScoreRegistry& registry = default_registry()) {
  validate_experiment(spec);
  std::mt19937_64 rng(seed);
  const std::string prefix =
      spec.multiclass() ? std::string(to_string(spec.class_aggregation.value_or(ClassAggregation::micro))) + "-" : "";
  for (int attempt = 0; attempt < 1000; ++attempt) {
    TrueReport out;
    for (const auto& d : spec.datasets) {
      DatasetOutcome outcome;
      for (const auto& f : detail::random_folds(d, rng, 100'000)) outcome.folds.push_back(detail::random_unit(f, rng));
      out.hidden.datasets.push_back(std::move(outcome));
    }
    for (const auto& id : score_ids) {
      const auto v = aggregate_score(spec, out.hidden, registry.at(id));
      if (v) out.report.set(prefix + id, detail::reported_text(*v, k, mode));
    }
    if (!out.report.empty()) {
      out.uncertainty = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));
      return out;
    }
  }
  throw std::runtime_error("could not sample an outcome on which any requested score is defined");
}

/// A regression report from random targets and predictions.
struct TrueRegressionReport {
  std::vector<Rational> targets;
  std::vector<Rational> predictions;
  RegressionContext context;
  ScoreReport report;
  Uncertainty uncertainty;
};

struct RegressionScores {
  Rational mae;
  Rational mse;
  Surd rmse;
  Rational r2;
  Rational variance;
};

/// Exact scores of a prediction vector; population variance of the targets.
inline RegressionScores regression_scores(const std::vector<Rational>& y, const std::vector<Rational>& yhat) {
  const Rational count = make_rational(static_cast<Count>(y.size()));
  Rational abs_sum = 0;
  Rational sq_sum = 0;
  Rational mean = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Rational e = y[i] - yhat[i];
    abs_sum += abs(e);
    sq_sum += e * e;
    mean += y[i];
  }
  mean /= count;
  Rational var = 0;
  for (const auto& v : y) var += (v - mean) * (v - mean);
  var /= count;
  RegressionScores s{abs_sum / count, sq_sum / count, Surd::sqrt_of(sq_sum / count), Rational(0), var};
  if (sgn(var) != 0) s.r2 = 1 - s.mse / var;
  return s;
}

inline TrueRegressionReport generate_regression_report(std::uint64_t seed, unsigned k, RoundingMode mode) {
  std::mt19937_64 rng(seed);
  while (true) {
    TrueRegressionReport out;
    const Count len = detail::uniform(rng, 2, 50);
    const Count noise = detail::uniform(rng, 0, 40);
    for (Count i = 0; i < len; ++i) {
      const Count y = detail::uniform(rng, -40, 40);
      out.targets.push_back(make_rational(y, 4));
      out.predictions.push_back(make_rational(y + detail::uniform(rng, -noise, noise), 4));
    }
    const RegressionScores s = regression_scores(out.targets, out.predictions);
    if (sgn(s.variance) == 0) continue;
    out.context = RegressionContext{len, s.variance};
    out.report.set("mae", detail::reported_text(Surd(s.mae), k, mode));
    out.report.set("mse", detail::reported_text(Surd(s.mse), k, mode));
    out.report.set("rmse", detail::reported_text(s.rmse, k, mode));
    out.report.set("r2", detail::reported_text(Surd(s.r2), k, mode));
    out.uncertainty = Uncertainty::eps(ten_to_minus(static_cast<int>(k)));
    return out;
  }
}

}  // namespace scoresleuth

#pragma once

// Integer programs for mean-of-scores aggregation. Each leaf confusion
// matrix contributes integer variables; each reported score becomes one
// interval constraint on the weighted mean of its affine per-leaf forms.

#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/feasibility.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/outcome.hpp"
#include "scoresleuth/single.hpp"

namespace scoresleuth {

struct WeightedUnit {
  AnyTestset testset;
  Rational weight;
};

/// Variables of a binary unit: tp, tn. Micro unit: the trace t. Macro unit:
/// the C x C matrix row by row.
struct UnitVariables {
  std::size_t first = 0;
  std::size_t count = 0;
};

struct LinearModel {
  IntegerProblem problem;
  std::vector<WeightedUnit> units;
  std::vector<UnitVariables> variables;
  std::optional<ClassAggregation> classes;
  /// Set when some reported score is undefined on a unit, which makes the
  /// reported finite mean impossible.
  std::optional<Violation> undefined;
};

inline void require_linear(const std::vector<ScoreTarget>& targets, const std::string& context) {
  for (const auto& t : targets) {
    if (!t.score->linear_in_counts) {
      throw Error(ErrorCode::nonlinear_score_unsupported,
                  "'" + t.id + "' is not affine in the confusion counts and cannot be tested under " + context);
    }
  }
}

namespace detail {

struct AffineAccumulator {
  std::map<std::size_t, Rational> coefficients;
  Rational constant{0};

  void add(std::size_t var, const Rational& c) {
    if (sgn(c) == 0) return;
    coefficients[var] += c;
  }
};

}  // namespace detail

inline LinearModel build_linear_model(const std::vector<WeightedUnit>& units, const std::vector<ScoreTarget>& targets,
                                      std::optional<ClassAggregation> classes = std::nullopt) {
  LinearModel model;
  model.units = units;
  model.classes = classes;

  for (std::size_t u = 0; u < units.size(); ++u) {
    UnitVariables vars{model.problem.variable_count(), 0};
    const std::string tag = "u" + std::to_string(u) + ".";
    if (const auto* b = std::get_if<Testset>(&units[u].testset)) {
      model.problem.add_variable(0, b->p, tag + "tp");
      model.problem.add_variable(0, b->n, tag + "tn");
      vars.count = 2;
    } else {
      if (!classes) throw std::logic_error("multiclass unit without a class aggregation");
      const auto& counts = std::get<MulticlassTestset>(units[u].testset).class_counts;
      const std::size_t c = counts.size();
      if (*classes == ClassAggregation::micro) {
        model.problem.add_variable(0, std::accumulate(counts.begin(), counts.end(), Count{0}), tag + "trace");
        vars.count = 1;
      } else {
        for (std::size_t i = 0; i < c; ++i) {
          for (std::size_t j = 0; j < c; ++j) {
            model.problem.add_variable(0, counts[i], tag + "m" + std::to_string(i) + std::to_string(j));
          }
        }
        vars.count = c * c;
        for (std::size_t i = 0; i < c; ++i) {
          LinearConstraint row;
          for (std::size_t j = 0; j < c; ++j) row.terms.emplace_back(vars.first + i * c + j, Rational(1));
          row.bounds = RationalInterval::point(make_rational(counts[i]));
          row.label = tag + "row" + std::to_string(i);
          model.problem.add_constraint(std::move(row));
        }
      }
    }
    model.variables.push_back(vars);
  }

  for (const auto& target : targets) {
    detail::AffineAccumulator acc;
    for (std::size_t u = 0; u < units.size() && !model.undefined; ++u) {
      const Rational& w = units[u].weight;
      const std::size_t first = model.variables[u].first;
      const auto undefined_here = [&] {
        model.undefined = Violation{"undefined_score", target.id,
                                    "'" + target.id + "' is undefined on leaf " + std::to_string(u) + " " +
                                        detail::describe(units[u].testset) + ", so no finite mean could be reported"};
      };
      if (const auto* b = std::get_if<Testset>(&units[u].testset)) {
        const auto f = affine_form(*target.score, b->p, b->n);
        if (!f) {
          undefined_here();
          break;
        }
        acc.add(first, w * f->tp_coef);
        acc.add(first + 1, w * f->tn_coef);
        acc.constant += w * f->constant;
        continue;
      }
      const MulticlassTestset& mt = std::get<MulticlassTestset>(units[u].testset);
      const Count total = mt.total();
      const auto c = mt.classes();
      if (*classes == ClassAggregation::micro) {
        const ConfusionCounts shape = micro_counts(mt, 0);
        const auto f = affine_form(*target.score, shape.p, shape.n);
        if (!f) {
          undefined_here();
          break;
        }
        // tp = t, tn = N(C - 2) + t
        acc.add(first, w * (f->tp_coef + f->tn_coef));
        acc.constant += w * (f->tn_coef * make_rational(total * (static_cast<Count>(c) - 2)) + f->constant);
        continue;
      }
      const Rational wc = w / make_rational(static_cast<Count>(c));
      bool defined = true;
      for (std::size_t i = 0; i < c; ++i) {
        const Count ci = mt.class_counts[i];
        const auto f = affine_form(*target.score, ci, total - ci);
        if (!f) {
          defined = false;
          break;
        }
        // tp_i = m_ii, tn_i = N - c_i - sum_{j != i} m_ji
        acc.add(first + i * c + i, wc * f->tp_coef);
        for (std::size_t j = 0; j < c; ++j) {
          if (j != i) acc.add(first + j * c + i, -wc * f->tn_coef);
        }
        acc.constant += wc * (f->tn_coef * make_rational(total - ci) + f->constant);
      }
      if (!defined) {
        undefined_here();
        break;
      }
    }
    if (model.undefined) break;

    LinearConstraint row;
    for (const auto& [var, coef] : acc.coefficients) {
      if (sgn(coef) != 0) row.terms.emplace_back(var, coef);
    }
    row.bounds = target.interval - RationalInterval::point(acc.constant);
    row.label = target.id;
    model.problem.add_constraint(std::move(row));
  }
  return model;
}

/// Unit outcomes read off a solution vector.
inline std::vector<UnitOutcome> extract_units(const LinearModel& model, const std::vector<Count>& x) {
  std::vector<UnitOutcome> out;
  for (std::size_t u = 0; u < model.units.size(); ++u) {
    const std::size_t first = model.variables[u].first;
    if (const auto* b = std::get_if<Testset>(&model.units[u].testset)) {
      out.emplace_back(BinaryOutcome{*b, x[first], x[first + 1]});
      continue;
    }
    const auto& mt = std::get<MulticlassTestset>(model.units[u].testset);
    if (*model.classes == ClassAggregation::micro) {
      out.emplace_back(matrix_with_trace(mt, x[first]));
      continue;
    }
    const std::size_t c = mt.classes();
    MulticlassOutcome m{mt, std::vector<std::vector<Count>>(c, std::vector<Count>(c, 0))};
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) m.matrix[i][j] = x[first + i * c + j];
    }
    out.emplace_back(std::move(m));
  }
  return out;
}

struct LinearSolve {
  std::optional<std::vector<UnitOutcome>> units;
  std::optional<Violation> violation;
  std::size_t nodes = 0;
};

/// Builds and decides the weighted-mean program. Throws SearchLimitExceeded
/// when the node budget runs out.
inline LinearSolve solve_linear(const std::vector<WeightedUnit>& units, const std::vector<ScoreTarget>& targets,
                                std::optional<ClassAggregation> classes, std::size_t node_limit) {
  LinearSolve out;
  const LinearModel model = build_linear_model(units, targets, classes);
  if (model.undefined) {
    out.violation = model.undefined;
    return out;
  }
  const FeasibilityOutcome r = BranchAndBound(node_limit).solve(model.problem);
  out.nodes = r.nodes;
  if (!r.feasible) {
    std::string subject;
    for (const auto& t : targets) {
      if (r.root_refutation && *r.root_refutation == t.id) subject = t.id;
    }
    out.violation = Violation{"no_integer_solution", subject,
                              subject.empty()
                                  ? "no integer assignment of the leaf confusion counts meets every mean constraint"
                                  : "the mean constraint of '" + subject + "' is infeasible even before branching"};
    return out;
  }
  out.units = extract_units(model, r.solution);
  return out;
}

}  // namespace scoresleuth

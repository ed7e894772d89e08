#pragma once

// JSON forms of specs, score reports, verdicts and the score registry.
// Exact values travel as strings ("3/4", "0.8464"); JSON numbers are
// accepted on input but carry no decimal text.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "scoresleuth/errors.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/regression.hpp"
#include "scoresleuth/scores.hpp"

namespace scoresleuth {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where + ": missing \"" + key + "\"");
  return *it;
}

inline Count count_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + ": expected an integer");
  return j.get<Count>();
}

/// Exact value of a JSON string or number, plus the decimal text when it was
/// a string.
inline ReportedScore reported_of(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return ReportedScore{parse_rational(j.get<std::string>()), j.get<std::string>()};
    if (j.is_number_integer()) return ReportedScore{Rational(BigInt(j.dump())), std::nullopt};
    // shortest text that reads back as the same double
    if (j.is_number_float()) return ReportedScore{parse_rational(j.dump()), std::nullopt};
  } catch (const Error& e) {
    bad(where + ": " + e.what());
  }
  bad(where + ": expected a number or a decimal string");
}

inline Rational rational_of(const Json& j, const std::string& where) { return reported_of(j, where).value; }

}  // namespace detail

// -- testsets and specs ------------------------------------------------------

inline Json to_json(const AnyTestset& t) {
  if (const auto* b = std::get_if<Testset>(&t)) return Json{{"p", b->p}, {"n", b->n}};
  return Json{{"class_counts", std::get<MulticlassTestset>(t).class_counts}};
}

inline AnyTestset testset_from_json(const Json& j, const std::string& where = "testset") {
  if (!j.is_object()) detail::bad(where + ": expected an object");
  if (j.contains("class_counts")) {
    const Json& counts = j["class_counts"];
    if (!counts.is_array()) detail::bad(where + ": class_counts must be an array");
    MulticlassTestset m;
    for (const auto& c : counts) m.class_counts.push_back(detail::count_of(c, where + ".class_counts"));
    return m;
  }
  return Testset{detail::count_of(detail::field(j, "p", where), where + ".p"),
                 detail::count_of(detail::field(j, "n", where), where + ".n")};
}

inline Json to_json(const FoldingScheme& f) {
  Json j{{"kind", std::string(to_string(f.kind))}};
  if (f.kind == FoldingKind::known_folds) {
    j["folds"] = Json::array();
    for (const auto& fold : f.folds) j["folds"].push_back(to_json(fold));
  }
  if (f.kind == FoldingKind::stratified_kfold || f.kind == FoldingKind::unknown_folds_kfold) j["k"] = f.k;
  return j;
}

inline FoldingScheme folding_from_json(const Json& j, const std::string& where) {
  const Json& kind = detail::field(j, "kind", where);
  if (!kind.is_string()) detail::bad(where + ".kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "none") return FoldingScheme::none();
  if (k == "known_folds") {
    const Json& folds = detail::field(j, "folds", where);
    if (!folds.is_array()) detail::bad(where + ".folds: expected an array");
    std::vector<AnyTestset> out;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      out.push_back(testset_from_json(folds[i], where + ".folds[" + std::to_string(i) + "]"));
    }
    return FoldingScheme::known(std::move(out));
  }
  if (k == "stratified_kfold") return FoldingScheme::stratified(detail::count_of(detail::field(j, "k", where), where + ".k"));
  if (k == "unknown_folds_kfold") return FoldingScheme::unknown(detail::count_of(detail::field(j, "k", where), where + ".k"));
  detail::bad(where + ".kind: unknown folding kind '" + k + "'");
}

namespace detail {

inline AggregationMode aggregation_of(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "score_of_means") return AggregationMode::score_of_means;
    if (s == "mean_of_scores") return AggregationMode::mean_of_scores;
  }
  bad(where + ": expected \"score_of_means\" or \"mean_of_scores\"");
}

inline ClassAggregation class_aggregation_of(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "micro") return ClassAggregation::micro;
    if (s == "macro") return ClassAggregation::macro;
  }
  bad(where + ": expected \"micro\" or \"macro\"");
}

}  // namespace detail

inline Json to_json(const ExperimentSpec& spec) {
  Json j;
  j["datasets"] = Json::array();
  for (const auto& d : spec.datasets) {
    Json dj{{"testset", to_json(d.testset)}, {"folding", to_json(d.folding)}};
    j["datasets"].push_back(std::move(dj));
  }
  if (spec.fold_aggregation) j["fold_aggregation"] = std::string(to_string(*spec.fold_aggregation));
  if (spec.dataset_aggregation) j["dataset_aggregation"] = std::string(to_string(*spec.dataset_aggregation));
  if (spec.class_aggregation) j["class_aggregation"] = std::string(to_string(*spec.class_aggregation));
  return j;
}

/// Structural parse only; call validate_experiment for the invariants.
inline ExperimentSpec spec_from_json(const Json& j) {
  const Json& datasets = detail::field(j, "datasets", "spec");
  if (!datasets.is_array()) detail::bad("spec.datasets: expected an array");
  ExperimentSpec spec;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const std::string where = "spec.datasets[" + std::to_string(i) + "]";
    DatasetSpec d{testset_from_json(detail::field(datasets[i], "testset", where), where + ".testset"), {}};
    if (datasets[i].contains("folding")) d.folding = folding_from_json(datasets[i]["folding"], where + ".folding");
    spec.datasets.push_back(std::move(d));
  }
  if (j.contains("fold_aggregation")) spec.fold_aggregation = detail::aggregation_of(j["fold_aggregation"], "spec.fold_aggregation");
  if (j.contains("dataset_aggregation")) {
    spec.dataset_aggregation = detail::aggregation_of(j["dataset_aggregation"], "spec.dataset_aggregation");
  }
  if (j.contains("class_aggregation")) {
    spec.class_aggregation = detail::class_aggregation_of(j["class_aggregation"], "spec.class_aggregation");
  }
  return spec;
}

inline Json to_json(const RegressionContext& ctx) {
  Json j = Json::object();
  if (ctx.target_variance) j["target_variance"] = to_string(*ctx.target_variance);
  if (ctx.n_samples) j["n_samples"] = *ctx.n_samples;
  return Json{{"regression", j}};
}

inline RegressionContext regression_from_json(const Json& j) {
  const Json& r = detail::field(j, "regression", "spec");
  if (!r.is_object()) detail::bad("spec.regression: expected an object");
  RegressionContext ctx;
  if (r.contains("target_variance")) ctx.target_variance = detail::rational_of(r["target_variance"], "spec.regression.target_variance");
  if (r.contains("n_samples")) ctx.n_samples = detail::count_of(r["n_samples"], "spec.regression.n_samples");
  return ctx;
}

inline bool is_regression_spec(const Json& j) { return j.is_object() && j.contains("regression"); }

// -- reports -----------------------------------------------------------------

inline ScoreReport report_from_json(const Json& j) {
  if (!j.is_object()) detail::bad("scores: expected an object mapping score ids to values");
  ScoreReport report;
  for (const auto& [id, value] : j.items()) {
    const ReportedScore r = detail::reported_of(value, "scores." + id);
    if (r.text) {
      report.set(id, *r.text);
    } else {
      report.set(id, r.value);
    }
  }
  return report;
}

inline Json to_json(const ScoreReport& report) {
  Json j = Json::object();
  for (const auto& [id, entry] : report) j[id] = entry.text ? *entry.text : to_string(entry.value);
  return j;
}

// {"eps": "1e-4", "per_score": {"acc": "0.005"}, "solver_slack": "0"}; every
// field is optional and missing radii are 0.
inline Json to_json(const Uncertainty& u) {
  Json per = Json::object();
  for (const auto& [id, r] : u.per_score_radius) per[id] = to_string(r);
  return Json{{"eps", to_string(u.default_radius)}, {"per_score", per}, {"solver_slack", to_string(u.solver_slack)}};
}

inline Uncertainty uncertainty_from_json(const Json& j) {
  if (!j.is_object()) detail::bad("uncertainty: expected an object");
  for (const auto& [key, unused] : j.items()) {
    if (key != "eps" && key != "per_score" && key != "solver_slack") detail::bad("uncertainty: unknown field \"" + key + "\"");
  }
  Uncertainty u;
  if (j.contains("eps")) u.default_radius = detail::rational_of(j["eps"], "uncertainty.eps");
  if (j.contains("solver_slack")) u.solver_slack = detail::rational_of(j["solver_slack"], "uncertainty.solver_slack");
  if (j.contains("per_score")) {
    const Json& per = j["per_score"];
    if (!per.is_object()) detail::bad("uncertainty.per_score: expected an object");
    for (const auto& [id, r] : per.items()) u.per_score_radius[id] = detail::rational_of(r, "uncertainty.per_score." + id);
  }
  try {
    u.validate();
  } catch (const Error& e) {
    detail::bad(std::string("uncertainty: ") + e.what());
  }
  return u;
}

// -- verdicts ----------------------------------------------------------------

inline Json to_json(const RationalInterval& a) {
  if (a.empty()) return Json{{"empty", true}};
  return Json{{"lo", a.bounded_below() ? Json(to_string(a.lo())) : Json(nullptr)},
              {"hi", a.bounded_above() ? Json(to_string(a.hi())) : Json(nullptr)}};
}

inline Json to_json(const Surd& v) {
  Json j{{"exact", v.to_string()}, {"approx", v.to_double()}};
  return j;
}

inline Json to_json(const UnitOutcome& unit) {
  if (const auto* b = std::get_if<BinaryOutcome>(&unit)) {
    return Json{{"p", b->testset.p}, {"n", b->testset.n}, {"tp", b->tp}, {"tn", b->tn}, {"fp", b->fp()}, {"fn", b->fn()}};
  }
  const auto& m = std::get<MulticlassOutcome>(unit);
  return Json{{"class_counts", m.testset.class_counts}, {"matrix", m.matrix}};
}

inline Json to_json(const Witness& w) {
  Json j{{"datasets", Json::array()}};
  for (const auto& d : w.datasets) {
    Json folds = Json::array();
    for (const auto& f : d.folds) folds.push_back(to_json(f));
    j["datasets"].push_back(Json{{"folds", std::move(folds)}});
  }
  return j;
}

inline Json to_json(const ConsistencyResult& r) {
  Json j;
  j["inconsistency"] = r.inconsistency;
  j["procedure"] = r.procedure;
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["evidence"] = Json::array();
  for (const auto& e : r.evidence) {
    Json ej{{"id", e.id},
            {"reported", to_string(e.reported)},
            {"radius", to_string(e.radius)},
            {"target", to_json(e.target)},
            {"witness_value", e.witness_value ? to_json(*e.witness_value) : Json(nullptr)}};
    j["evidence"].push_back(std::move(ej));
  }
  j["violation"] = r.violation ? Json{{"kind", r.violation->kind}, {"subject", r.violation->subject},
                                      {"detail", r.violation->detail}}
                               : Json(nullptr);
  j["notes"] = r.notes;
  return j;
}

// -- registry ----------------------------------------------------------------

inline Json to_json(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::tp:
    case Expr::Kind::tn:
    case Expr::Kind::fp:
    case Expr::Kind::fn:
    case Expr::Kind::p:
    case Expr::Kind::n:
      return Json{{"var", std::string(to_string(e.kind()))}};
    case Expr::Kind::constant:
      return Json{{"const", to_string(e.value())}};
    default: {
      Json args = Json::array();
      for (const auto& a : e.args()) args.push_back(to_json(a));
      return Json{{"op", std::string(to_string(e.kind()))}, {"args", std::move(args)}};
    }
  }
}

inline Expr expr_from_json(const Json& j) {
  if (!j.is_object()) detail::bad("formula: expected an object");
  if (j.contains("var")) {
    const auto k = j["var"].is_string() ? expr_kind_from_string(j["var"].get<std::string>()) : std::nullopt;
    if (!k || static_cast<int>(*k) > static_cast<int>(Expr::Kind::n)) detail::bad("formula: unknown variable");
    return Expr::var(*k);
  }
  if (j.contains("const")) return Expr::constant(detail::rational_of(j["const"], "formula.const"));
  const Json& op = detail::field(j, "op", "formula");
  const auto k = op.is_string() ? expr_kind_from_string(op.get<std::string>()) : std::nullopt;
  if (!k || static_cast<int>(*k) <= static_cast<int>(Expr::Kind::constant)) detail::bad("formula: unknown operator");
  const Json& args = detail::field(j, "args", "formula");
  if (!args.is_array()) detail::bad("formula.args: expected an array");
  std::vector<Expr> out;
  for (const auto& a : args) out.push_back(expr_from_json(a));
  const std::size_t arity = *k == Expr::Kind::sqrt ? 1 : 2;
  if (out.size() != arity) detail::bad("formula: '" + op.get<std::string>() + "' takes " + std::to_string(arity) + " arguments");
  return Expr::node(*k, std::move(out));
}

inline Json to_json(const ScoreDefinition& d) {
  return Json{{"id", d.id},
              {"name", d.name},
              {"formula", to_json(d.formula)},
              {"range", to_json(d.range)},
              {"linear_in_counts", d.linear_in_counts},
              {"monotone", d.monotone},
              {"enabled_by_default", d.enabled_by_default}};
}

inline ScoreDefinition score_definition_from_json(const Json& j) {
  ScoreDefinition d{detail::field(j, "id", "score").get<std::string>(),
                    detail::field(j, "name", "score").get<std::string>(),
                    expr_from_json(detail::field(j, "formula", "score")),
                    RationalInterval::whole(),
                    detail::field(j, "linear_in_counts", "score").get<bool>(),
                    detail::field(j, "monotone", "score").get<bool>(),
                    detail::field(j, "enabled_by_default", "score").get<bool>()};
  const Json& range = detail::field(j, "range", "score");
  if (range.contains("empty")) {
    d.range = RationalInterval::empty_set();
  } else {
    const Json& lo = detail::field(range, "lo", "score.range");
    const Json& hi = detail::field(range, "hi", "score.range");
    if (!lo.is_null() && !hi.is_null()) {
      d.range = RationalInterval::closed(detail::rational_of(lo, "lo"), detail::rational_of(hi, "hi"));
    } else if (!lo.is_null()) {
      d.range = RationalInterval::at_least(detail::rational_of(lo, "lo"));
    } else if (!hi.is_null()) {
      d.range = RationalInterval::at_most(detail::rational_of(hi, "hi"));
    }
  }
  return d;
}

// -- files -------------------------------------------------------------------

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    detail::bad(source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::bad("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json(text.str(), path);
}

}  // namespace scoresleuth

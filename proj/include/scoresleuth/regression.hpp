#pragma once

// Regression reports: necessary relations between MAE, MSE, RMSE and r^2.
//   R1  mae, mse, rmse >= 0 and r2 <= 1
//   R2  mae^2 <= mse (power-mean inequality)
//   R3  rmse^2 = mse
//   R4  r2 = 1 - mse / Var(y), population variance
// All of them constrain the MSE, so the check propagates one feasible MSE
// set and reports the first relation that empties it.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scoresleuth/errors.hpp"
#include "scoresleuth/interval.hpp"
#include "scoresleuth/model.hpp"

namespace scoresleuth {

inline const std::vector<std::string>& regression_score_ids() {
  static const std::vector<std::string> ids{"mae", "mse", "rmse", "r2"};
  return ids;
}

struct RegressionContext {
  std::optional<Count> n_samples;
  /// Population variance of the targets (divisor N).
  std::optional<Rational> target_variance;

  friend bool operator==(const RegressionContext&, const RegressionContext&) = default;
};

namespace detail {

/// Square of a nonnegative interval.
inline RationalInterval square_nonneg(const RationalInterval& a) {
  if (a.empty()) return a;
  const Rational lo = a.lo() * a.lo();
  if (!a.bounded_above()) return RationalInterval::at_least(lo);
  return RationalInterval::closed(lo, a.hi() * a.hi());
}

}  // namespace detail

inline ConsistencyResult check_regression(const RegressionContext& ctx, const ScoreReport& scores,
                                          const Uncertainty& uncertainty) {
  if (scores.empty()) throw Error(ErrorCode::invalid_spec, "no scores reported");
  uncertainty.validate();
  for (const auto& [id, entry] : scores) {
    bool known = false;
    for (const auto& r : regression_score_ids()) known = known || r == id;
    if (!known) throw Error(ErrorCode::unknown_score_id, "'" + id + "' is not a regression score (mae, mse, rmse, r2)");
  }
  if (ctx.n_samples && *ctx.n_samples < 2) throw Error(ErrorCode::invalid_spec, "n_samples must be at least 2");
  if (ctx.target_variance && sgn(*ctx.target_variance) <= 0) {
    throw Error(ErrorCode::invalid_spec, "target_variance must be positive");
  }
  if (scores.contains("r2") && !ctx.target_variance) {
    throw Error(ErrorCode::missing_variance, "r2 is reported but the target variance is unknown");
  }

  ConsistencyResult result;
  result.procedure = "regression";
  result.notes.push_back("only necessary relations are tested; consistency is not proof that a prediction vector exists");
  if (ctx.n_samples) result.notes.push_back("n_samples " + std::to_string(*ctx.n_samples) + " recorded, not used");

  std::map<std::string, RationalInterval> given;
  for (const auto& [id, entry] : scores) given[id] = uncertainty.interval_for(id, entry.value);
  const auto fail = [&](const std::string& relation, const std::string& subject, const std::string& detail) {
    result.inconsistency = true;
    result.violation = Violation{relation, subject, detail};
  };

  // R1
  const RationalInterval nonneg = RationalInterval::at_least(Rational(0));
  std::map<std::string, RationalInterval> range;
  for (const auto& [id, interval] : given) {
    range[id] = intersect(interval, id == "r2" ? RationalInterval::at_most(Rational(1)) : nonneg);
  }
  for (const auto& id : regression_score_ids()) {
    if (range.count(id) && range[id].empty() && !result.inconsistency) {
      fail("R1", id, id + " interval " + given[id].to_string() + (id == "r2" ? " lies above 1" : " is negative"));
    }
  }

  RationalInterval mse = nonneg;
  if (!result.inconsistency && range.count("mse")) mse = range["mse"];
  if (!result.inconsistency && range.count("rmse")) {
    mse = intersect(mse, detail::square_nonneg(range["rmse"]));
    if (mse.empty()) {
      fail("R3", "rmse", "rmse^2 " + detail::square_nonneg(range["rmse"]).to_string() + " misses mse " +
                             range["mse"].to_string());
    }
  }
  if (!result.inconsistency && range.count("r2")) {
    const RationalInterval implied =
        (RationalInterval::point(Rational(1)) - range["r2"]) * RationalInterval::point(*ctx.target_variance);
    const RationalInterval before = mse;
    mse = intersect(mse, implied);
    if (mse.empty()) {
      fail("R4", "r2", "(1 - r2) * Var = " + implied.to_string() + " misses the mse range " + before.to_string());
    }
  }
  if (!result.inconsistency && range.count("mae")) {
    const Rational floor_sq = range["mae"].lo() * range["mae"].lo();
    if (mse.bounded_above() && floor_sq > mse.hi()) {
      fail("R2", "mae", "smallest mae^2 " + to_string(floor_sq) + " exceeds the largest feasible mse " +
                            to_string(mse.hi()));
    } else {
      mse = intersect(mse, RationalInterval::at_least(floor_sq));
    }
  }

  for (const auto& [id, entry] : scores) {
    ScoreEvidence ev{id, entry.value, uncertainty.radius_for(id), range[id], std::nullopt};
    if (!result.inconsistency) {
      if (id == "mse") {
        ev.target = mse;
      } else if (id == "rmse") {
        ev.target = intersect(range[id], sqrt_outer(mse));
      } else if (id == "r2") {
        const auto ratio = divide(mse, RationalInterval::point(*ctx.target_variance));
        ev.target = intersect(range[id], RationalInterval::point(Rational(1)) - *ratio);
      } else if (mse.bounded_above()) {
        ev.target = intersect(range[id], RationalInterval::at_most(sqrt_outer(mse).hi()));
      }
    }
    result.evidence.push_back(std::move(ev));
  }
  return result;
}

}  // namespace scoresleuth

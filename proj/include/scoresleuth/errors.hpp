#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scoresleuth {

enum class ErrorCode {
  parse_error,
  empty_experiment,
  fold_totals_mismatch,
  missing_aggregation_mode,
  invalid_spec,
  unknown_score_id,
  nonlinear_score_unsupported,
  invalid_fold_count,
  missing_variance,
  unknown_bundle,
  too_many_configurations,
  region_too_large,
  search_limit_exceeded,
  instance_too_large,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::empty_experiment: return "EmptyExperiment";
    case ErrorCode::fold_totals_mismatch: return "FoldTotalsMismatch";
    case ErrorCode::missing_aggregation_mode: return "MissingAggregationMode";
    case ErrorCode::invalid_spec: return "InvalidSpec";
    case ErrorCode::unknown_score_id: return "UnknownScoreId";
    case ErrorCode::nonlinear_score_unsupported: return "NonlinearScoreUnsupported";
    case ErrorCode::invalid_fold_count: return "InvalidFoldCount";
    case ErrorCode::missing_variance: return "MissingVariance";
    case ErrorCode::unknown_bundle: return "UnknownBundle";
    case ErrorCode::too_many_configurations: return "TooManyConfigurations";
    case ErrorCode::region_too_large: return "RegionTooLarge";
    case ErrorCode::search_limit_exceeded: return "SearchLimitExceeded";
    case ErrorCode::instance_too_large: return "InstanceTooLarge";
  }
  return "Unknown";
}

/// True for errors meaning "refused to decide" rather than "bad input".
inline bool is_resource_refusal(ErrorCode code) {
  return code == ErrorCode::too_many_configurations || code == ErrorCode::region_too_large ||
         code == ErrorCode::search_limit_exceeded || code == ErrorCode::instance_too_large;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class TooManyConfigurations : public Error {
 public:
  /// `count` is a lower bound: enumeration stops as soon as the cap is exceeded.
  TooManyConfigurations(std::size_t count, std::size_t cap)
      : Error(ErrorCode::too_many_configurations,
              "at least " + std::to_string(count) + " fold configurations exceed the cap of " +
                  std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::size_t count() const noexcept { return count_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t count_;
  std::size_t cap_;
};

}  // namespace scoresleuth

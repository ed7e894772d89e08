// scoresleuth: consistency checks for reported performance scores.
//
// exit codes: 0 consistent, 1 inconsistency identified, 2 usage or input
// error, 3 resource refusal (the instance was too large to decide).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "scoresleuth/scoresleuth.hpp"

namespace {

using namespace scoresleuth;

constexpr int kConsistent = 0;
constexpr int kInconsistent = 1;
constexpr int kUsage = 2;
constexpr int kRefused = 3;

struct ReportArgs {
  std::string scores_path;
  std::string eps;
  bool infer_eps = false;
  std::string uncertainty_path;
  std::string slack;
  std::string out;
};

void add_report_options(CLI::App* cmd, ReportArgs& args) {
  cmd->add_option("--scores", args.scores_path, "JSON object mapping score ids to decimal strings")->required();
  auto* eps = cmd->add_option("--eps", args.eps, "uncertainty radius, e.g. 1e-4 or 1/10000");
  auto* infer = cmd->add_flag("--infer-eps", args.infer_eps, "radius 10^-k from the k decimals of each value");
  auto* file = cmd->add_option("--uncertainty", args.uncertainty_path, "radii as JSON: {eps, per_score, solver_slack}");
  eps->excludes(infer)->excludes(file);
  infer->excludes(file);
  cmd->add_option("--slack", args.slack, "extra radius added to every score (default 0)");
  cmd->add_option("--out", args.out, "write the verdict here instead of stdout");
}

Uncertainty uncertainty_for(const ReportArgs& args, const ScoreReport& report) {
  Uncertainty u;
  if (args.infer_eps) {
    for (const auto& [id, entry] : report) {
      if (!entry.text) {
        throw Error(ErrorCode::parse_error, "--infer-eps needs decimal strings, but '" + id + "' is a JSON number");
      }
    }
    u = Uncertainty::inferred_from(report);
  } else if (!args.uncertainty_path.empty()) {
    u = uncertainty_from_json(read_json_file(args.uncertainty_path));
  } else if (!args.eps.empty()) {
    u = Uncertainty::eps(parse_rational(args.eps));
  } else {
    throw CLI::ValidationError("--eps", "one of --eps, --infer-eps or --uncertainty is required");
  }
  if (!args.slack.empty()) u.solver_slack = parse_rational(args.slack);
  return u;
}

std::size_t configuration_cap() {
  const char* env = std::getenv("SCORESLEUTH_CONFIG_CAP");
  if (env == nullptr || *env == '\0') return CheckOptions{}.configuration_cap;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::parse_error, "SCORESLEUTH_CONFIG_CAP must be a positive integer");
}

int emit(const ConsistencyResult& result, const std::string& out) {
  const std::string text = to_json(result).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Error(ErrorCode::parse_error, "cannot write " + out);
    file << text;
  }
  return result.inconsistency ? kInconsistent : kConsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistency checks for reported performance scores"};
  app.require_subcommand(1);

  ReportArgs check_args;
  std::string spec_path;
  std::string beta = "2";
  auto* check = app.add_subcommand("check", "check scores against an experiment description");
  check->add_option("--spec", spec_path, "experiment (or regression) description, JSON")->required();
  check->add_option("--beta", beta, "beta of the fbeta score")->capture_default_str();
  add_report_options(check, check_args);

  ReportArgs bundle_args;
  std::string bundle_name;
  auto* bundle = app.add_subcommand("bundle", "check scores against a predefined dataset");
  bundle->add_option("--name", bundle_name, "bundle id, see `list --bundles`")->required();
  add_report_options(bundle, bundle_args);

  bool list_scores = false;
  bool list_bundles = false;
  bool list_procedures = false;
  auto* list = app.add_subcommand("list", "machine-readable listings, one JSON object per line");
  auto* ls = list->add_flag("--scores", list_scores, "registered scores");
  auto* lb = list->add_flag("--bundles", list_bundles, "dataset bundles");
  auto* lp = list->add_flag("--procedures", list_procedures, "decision procedures");
  ls->excludes(lb)->excludes(lp);
  lb->excludes(lp);
  list->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*list) {
      if (list_scores) {
        for (const auto& d : default_registry().all()) std::cout << to_json(d).dump() << "\n";
      } else if (list_bundles) {
        for (const auto& b : bundle_catalog()) {
          std::cout << Json{{"id", b.id}, {"populated", b.populated}, {"citation", b.citation}}.dump() << "\n";
        }
      } else {
        for (const auto& p : procedure_ids()) std::cout << Json{{"id", p}}.dump() << "\n";
      }
      return kConsistent;
    }

    CheckOptions options;
    options.configuration_cap = configuration_cap();

    if (*check) {
      const ScoreReport report = report_from_json(read_json_file(check_args.scores_path));
      const Uncertainty unc = uncertainty_for(check_args, report);
      const Json spec_json = read_json_file(spec_path);
      if (is_regression_spec(spec_json)) {
        return emit(check_regression(regression_from_json(spec_json), report, unc), check_args.out);
      }
      const Rational fbeta_beta = parse_rational(beta);
      if (sgn(fbeta_beta) <= 0) throw Error(ErrorCode::invalid_spec, "--beta must be positive");
      const ScoreRegistry registry = ScoreRegistry::standard(fbeta_beta);
      options.registry = &registry;
      return emit(check_experiment(spec_from_json(spec_json), report, unc, options), check_args.out);
    }

    const ScoreReport report = report_from_json(read_json_file(bundle_args.scores_path));
    const Uncertainty unc = uncertainty_for(bundle_args, report);
    return emit(check_bundle(bundle_name, report, unc, options), bundle_args.out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_resource_refusal(e.code()) ? kRefused : kUsage;
  }
}

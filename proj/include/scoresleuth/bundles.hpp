#pragma once

// Predefined experiment descriptions for public datasets. Bundles are the
// JSON files under data/bundles, compiled in by the build as text.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scoresleuth/bundle_data.hpp"  // generated: detail::kBundleFiles
#include "scoresleuth/experiment.hpp"
#include "scoresleuth/io.hpp"

namespace scoresleuth {

struct Bundle {
  std::string id;
  ExperimentSpec spec;
  std::string citation;
  std::string notes;
};

/// One bundle file. Placeholders carry metadata but no spec yet.
struct BundleEntry {
  std::string id;
  bool populated = false;
  std::string citation;
  std::string notes;
  std::optional<ExperimentSpec> spec;
};

inline BundleEntry bundle_entry_from_json(const Json& j) {
  BundleEntry e;
  e.id = detail::field(j, "id", "bundle").get<std::string>();
  const std::string where = "bundle '" + e.id + "'";
  e.populated = detail::field(j, "populated", where).get<bool>();
  e.citation = detail::field(j, "citation", where).get<std::string>();
  e.notes = detail::field(j, "notes", where).get<std::string>();
  const Json& spec = detail::field(j, "spec", where);
  if (e.populated) {
    e.spec = spec_from_json(spec);
  } else if (!spec.is_null()) {
    detail::bad(where + ": placeholder bundles must have a null spec");
  }
  return e;
}

inline Json to_json(const BundleEntry& e) {
  return Json{{"id", e.id},
              {"populated", e.populated},
              {"citation", e.citation},
              {"notes", e.notes},
              {"spec", e.spec ? to_json(*e.spec) : Json(nullptr)}};
}

/// Every bundle file, sorted by id. Parsed once.
inline const std::vector<BundleEntry>& bundle_catalog() {
  static const std::vector<BundleEntry> catalog = [] {
    std::vector<BundleEntry> out;
    for (const std::string_view text : detail::kBundleFiles) {
      out.push_back(bundle_entry_from_json(parse_json(std::string(text), "bundle data")));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }();
  return catalog;
}

/// Ids of bundles that can be checked against.
inline std::vector<std::string> bundle_ids() {
  std::vector<std::string> ids;
  for (const auto& e : bundle_catalog()) {
    if (e.populated) ids.push_back(e.id);
  }
  return ids;
}

inline Bundle load_bundle(const std::string& id) {
  for (const auto& e : bundle_catalog()) {
    if (e.id != id) continue;
    if (!e.populated) {
      throw Error(ErrorCode::unknown_bundle, "bundle '" + id + "' is a placeholder without dataset counts");
    }
    return Bundle{e.id, validate_experiment(*e.spec), e.citation, e.notes};
  }
  std::string available;
  for (const auto& b : bundle_ids()) available += (available.empty() ? "" : ", ") + b;
  throw Error(ErrorCode::unknown_bundle, "no bundle '" + id + "'; available: " + available);
}

inline ConsistencyResult check_bundle(const std::string& id, const ScoreReport& scores, const Uncertainty& uncertainty,
                                      const CheckOptions& options = {}) {
  const Bundle bundle = load_bundle(id);
  ConsistencyResult result = check_experiment(bundle.spec, scores, uncertainty, options);
  result.notes.push_back("bundle " + bundle.id + ": " + bundle.notes);
  return result;
}

}  // namespace scoresleuth

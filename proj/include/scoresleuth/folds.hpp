#pragma once

// Fold shapes: pooling, the stratified even split, and enumeration of every
// fold configuration when the split is unknown.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "scoresleuth/errors.hpp"
#include "scoresleuth/model.hpp"

namespace scoresleuth {

/// Class counts of one fold.
using FoldShape = std::vector<Count>;

/// Pooled testset: per-class sums over the folds.
inline AnyTestset reduce_som(const std::vector<AnyTestset>& folds) {
  if (folds.empty()) throw Error(ErrorCode::invalid_spec, "cannot pool an empty fold list");
  std::vector<Count> totals(class_vector(folds.front()).size(), 0);
  for (const auto& f : folds) {
    const auto v = class_vector(f);
    if (v.size() != totals.size()) throw Error(ErrorCode::invalid_spec, "folds disagree on the class count");
    for (std::size_t c = 0; c < v.size(); ++c) totals[c] += v[c];
  }
  if (is_multiclass(folds.front())) return MulticlassTestset{totals};
  return Testset{totals[0], totals[1]};
}

inline Testset reduce_som(const std::vector<Testset>& folds) {
  std::vector<AnyTestset> any(folds.begin(), folds.end());
  return std::get<Testset>(reduce_som(any));
}

inline AnyTestset testset_from_shape(const FoldShape& shape, bool multiclass) {
  if (multiclass) return MulticlassTestset{shape};
  return Testset{shape.at(0), shape.at(1)};
}

/// Even split per class: the first (c mod k) folds get ceil(c/k), the rest
/// floor(c/k); folds are paired by index across classes.
inline std::vector<FoldShape> stratified_fold_shapes(const std::vector<Count>& class_counts, Count k) {
  if (k < 1) throw Error(ErrorCode::invalid_fold_count, "k must be at least 1");
  const Count total = std::accumulate(class_counts.begin(), class_counts.end(), Count{0});
  if (k > total) throw Error(ErrorCode::invalid_fold_count, "k = " + std::to_string(k) + " exceeds the " + std::to_string(total) + " samples");
  std::vector<FoldShape> folds(static_cast<std::size_t>(k), FoldShape(class_counts.size(), 0));
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    const Count base = class_counts[c] / k;
    const Count extra = class_counts[c] % k;
    for (Count j = 0; j < k; ++j) folds[static_cast<std::size_t>(j)][c] = base + (j < extra ? 1 : 0);
  }
  for (const auto& f : folds) {
    if (std::accumulate(f.begin(), f.end(), Count{0}) == 0) {
      throw Error(ErrorCode::invalid_fold_count,
                  "stratified split into " + std::to_string(k) + " folds leaves a fold empty");
    }
  }
  return folds;
}

inline std::vector<Testset> enumerate_stratified_fold_sizes(Count p, Count n, Count k) {
  std::vector<Testset> out;
  for (const auto& f : stratified_fold_shapes({p, n}, k)) out.push_back(Testset{f[0], f[1]});
  return out;
}

namespace detail {

class ConfigurationEnumerator {
 public:
  ConfigurationEnumerator(std::size_t k, std::size_t cap) : k_(k), cap_(cap) {}

  std::vector<std::vector<FoldShape>> run(const FoldShape& totals) {
    FoldShape unbounded(totals.size(), std::numeric_limits<Count>::max());
    std::vector<FoldShape> current;
    place(totals, k_, unbounded, current);
    return std::move(out_);
  }

 private:
  static bool nonzero(const FoldShape& v) {
    for (Count x : v) {
      if (x != 0) return true;
    }
    return false;
  }

  static Count sum(const FoldShape& v) { return std::accumulate(v.begin(), v.end(), Count{0}); }

  static bool lex_le(const FoldShape& a, const FoldShape& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) == false;
  }

  void emit(const std::vector<FoldShape>& config) {
    out_.push_back(config);
    if (out_.size() > cap_) throw TooManyConfigurations(out_.size(), cap_);
  }

  // Places `folds_left` folds summing to `remaining`, each lexicographically
  // at most `bound`, in nonincreasing order.
  void place(const FoldShape& remaining, std::size_t folds_left, const FoldShape& bound,
             std::vector<FoldShape>& current) {
    if (folds_left == 1) {
      if (nonzero(remaining) && lex_le(remaining, bound)) {
        current.push_back(remaining);
        emit(current);
        current.pop_back();
      }
      return;
    }
    if (sum(remaining) < static_cast<Count>(folds_left)) return;
    FoldShape v(remaining.size(), 0);
    choose(remaining, folds_left, bound, current, v, 0, true);
  }

  // Builds the next fold component by component, in decreasing lex order.
  void choose(const FoldShape& remaining, std::size_t folds_left, const FoldShape& bound,
              std::vector<FoldShape>& current, FoldShape& v, std::size_t i, bool tight) {
    if (i == v.size()) {
      if (!nonzero(v)) return;
      FoldShape rest(remaining.size());
      for (std::size_t c = 0; c < rest.size(); ++c) rest[c] = remaining[c] - v[c];
      if (sum(rest) < static_cast<Count>(folds_left - 1)) return;
      // every later fold has first component at most v[0]
      if (rest[0] > static_cast<Count>(folds_left - 1) * v[0]) return;
      current.push_back(v);
      place(rest, folds_left - 1, v, current);
      current.pop_back();
      return;
    }
    const Count top = tight ? std::min(bound[i], remaining[i]) : remaining[i];
    for (Count x = top; x >= 0; --x) {
      v[i] = x;
      choose(remaining, folds_left, bound, current, v, i + 1, tight && x == bound[i]);
    }
    v[i] = 0;
  }

  std::size_t k_;
  std::size_t cap_;
  std::vector<std::vector<FoldShape>> out_;
};

}  // namespace detail

/// Every multiset of k nonempty folds whose class counts sum to `totals`.
/// Each configuration lists its folds in nonincreasing lexicographic order and
/// configurations come in decreasing lexicographic order.
inline std::vector<std::vector<FoldShape>> enumerate_fold_shapes(const FoldShape& totals, Count k,
                                                                 std::size_t cap = 1'000'000) {
  if (k < 1) throw Error(ErrorCode::invalid_fold_count, "k must be at least 1");
  const Count total = std::accumulate(totals.begin(), totals.end(), Count{0});
  if (total < k) {
    throw Error(ErrorCode::invalid_fold_count, "cannot split " + std::to_string(total) + " samples into " +
                                                   std::to_string(k) + " nonempty folds");
  }
  return detail::ConfigurationEnumerator(static_cast<std::size_t>(k), cap).run(totals);
}

inline std::vector<std::vector<Testset>> enumerate_fold_configurations(Count p, Count n, Count k,
                                                                       std::size_t cap = 1'000'000) {
  std::vector<std::vector<Testset>> out;
  for (const auto& config : enumerate_fold_shapes({p, n}, k, cap)) {
    std::vector<Testset> folds;
    for (const auto& f : config) folds.push_back(Testset{f[0], f[1]});
    out.push_back(std::move(folds));
  }
  return out;
}

}  // namespace scoresleuth

#pragma once

// Exact integer feasibility for bounded variables under interval-bounded
// linear constraints: branch-and-bound with bound propagation at every node.
// All arithmetic is on integers after scaling each constraint by the lcm of
// its coefficient denominators, so there are no tolerances anywhere.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scoresleuth/errors.hpp"
#include "scoresleuth/interval.hpp"
#include "scoresleuth/rational.hpp"

namespace scoresleuth {

/// sum_j coefficient_j * x_j must lie in `bounds`.
struct LinearConstraint {
  std::vector<std::pair<std::size_t, Rational>> terms;
  RationalInterval bounds;
  std::string label;
};

class IntegerProblem {
 public:
  std::size_t add_variable(Count lo, Count hi, std::string name = {}) {
    domains_.push_back(IntInterval{lo, hi});
    names_.push_back(std::move(name));
    return domains_.size() - 1;
  }

  void add_constraint(LinearConstraint c) { constraints_.push_back(std::move(c)); }

  std::size_t variable_count() const { return domains_.size(); }
  const std::vector<IntInterval>& domains() const { return domains_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Exact check of a full assignment.
  bool satisfied_by(const std::vector<Count>& x) const {
    if (x.size() != domains_.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!domains_[j].contains(x[j])) return false;
    }
    for (const auto& c : constraints_) {
      Rational sum = 0;
      for (const auto& [j, a] : c.terms) sum += a * make_rational(x[j]);
      if (!c.bounds.contains(sum)) return false;
    }
    return true;
  }

 private:
  std::vector<IntInterval> domains_;
  std::vector<std::string> names_;
  std::vector<LinearConstraint> constraints_;
};

struct FeasibilityOutcome {
  bool feasible = false;
  std::vector<Count> solution;
  std::size_t nodes = 0;
  /// Label of the constraint refuted by propagation at the root, if any.
  std::optional<std::string> root_refutation;
};

/// Interface for feasibility engines. Verdicts in this library come from
/// BranchAndBound; other engines can be plugged in for benchmarking.
class FeasibilitySolver {
 public:
  virtual ~FeasibilitySolver() = default;
  virtual FeasibilityOutcome solve(const IntegerProblem& problem) const = 0;
};

class BranchAndBound final : public FeasibilitySolver {
 public:
  explicit BranchAndBound(std::size_t node_limit = 20'000'000) : node_limit_(node_limit) {}

  /// Depth-first search. Branches on the variable with the largest remaining
  /// domain (ties: lowest index), lower half first, so the first solution
  /// found is deterministic.
  FeasibilityOutcome solve(const IntegerProblem& problem) const override {
    const Merged merged = merge_identical_columns(problem);
    FeasibilityOutcome out = solve_reduced(merged.problem);
    if (out.feasible) out.solution = merged.expand(out.solution, problem.domains());
    return out;
  }

 private:
  // Variables with the same coefficient in every constraint only matter
  // through their sum, and any integer sum within the summed bounds splits
  // back into integer values within the individual bounds. Identically shaped
  // folds produce such variables, and merging them removes a symmetry that
  // interval propagation alone cannot break.
  struct Merged {
    IntegerProblem problem;
    std::vector<std::vector<std::size_t>> members;  // reduced variable -> originals

    std::vector<Count> expand(const std::vector<Count>& reduced, const std::vector<IntInterval>& domains) const {
      std::vector<Count> x(domains.size(), 0);
      for (std::size_t g = 0; g < members.size(); ++g) {
        Count left = reduced[g];
        for (std::size_t j : members[g]) left -= domains[j].lo;
        for (std::size_t j : members[g]) {
          const Count extra = std::min(left, domains[j].hi - domains[j].lo);
          x[j] = domains[j].lo + extra;
          left -= extra;
        }
      }
      return x;
    }
  };

  static Merged merge_identical_columns(const IntegerProblem& problem) {
    const std::size_t count = problem.variable_count();
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(count);
    for (std::size_t r = 0; r < problem.constraints().size(); ++r) {
      for (const auto& [j, a] : problem.constraints()[r].terms) {
        if (sgn(a) != 0) columns[j].emplace_back(r, a);
      }
    }
    Merged m;
    std::vector<std::size_t> group_of(count);
    std::vector<std::size_t> representative;
    for (std::size_t j = 0; j < count; ++j) {
      std::optional<std::size_t> found;
      for (std::size_t g = 0; g < representative.size() && !found; ++g) {
        if (columns[representative[g]] == columns[j]) found = g;
      }
      if (!found) {
        found = representative.size();
        representative.push_back(j);
        m.members.emplace_back();
      }
      group_of[j] = *found;
      m.members[*found].push_back(j);
    }
    for (const auto& group : m.members) {
      Count lo = 0;
      Count hi = 0;
      std::string name;
      for (std::size_t j : group) {
        lo += problem.domains()[j].lo;
        hi += problem.domains()[j].hi;
        name += (name.empty() ? "" : "+") + problem.names()[j];
      }
      m.problem.add_variable(lo, hi, name);
    }
    for (const auto& c : problem.constraints()) {
      LinearConstraint reduced{{}, c.bounds, c.label};
      std::vector<bool> seen(m.members.size(), false);
      for (const auto& [j, a] : c.terms) {
        if (sgn(a) == 0 || seen[group_of[j]]) continue;
        seen[group_of[j]] = true;
        reduced.terms.emplace_back(group_of[j], a);
      }
      m.problem.add_constraint(std::move(reduced));
    }
    return m;
  }

  FeasibilityOutcome solve_reduced(const IntegerProblem& problem) const {
    const std::vector<Row<BigInt>> rows = scale(problem);
    FeasibilityOutcome out;
    for (const auto& row : rows) {
      if (row.trivially_infeasible) {
        out.root_refutation = row.label;
        return out;
      }
    }
    // native arithmetic when no activity can come near the 128-bit range
    if (fits_native(rows, problem.domains())) return search(narrow(rows), problem.domains());
    return search(rows, problem.domains());
  }

  using Native = __int128;

  template <typename Int>
  struct Row {
    std::vector<std::pair<std::size_t, Int>> terms;
    std::optional<Int> lo;  // integer bounds after scaling
    std::optional<Int> hi;
    std::string label;
    bool trivially_infeasible = false;
  };

  static std::vector<Row<BigInt>> scale(const IntegerProblem& problem) {
    std::vector<Row<BigInt>> rows;
    for (const auto& c : problem.constraints()) {
      Row<BigInt> row;
      row.label = c.label;
      if (c.bounds.empty()) {
        row.trivially_infeasible = true;
        rows.push_back(std::move(row));
        continue;
      }
      BigInt denominator_lcm = 1;
      for (const auto& [j, a] : c.terms) mpz_lcm(denominator_lcm.get_mpz_t(), denominator_lcm.get_mpz_t(), a.get_den_mpz_t());
      const Rational factor(denominator_lcm);
      for (const auto& [j, a] : c.terms) {
        if (sgn(a) == 0) continue;
        const Rational scaled = a * factor;
        row.terms.emplace_back(j, scaled.get_num());
      }
      // the scaled left-hand side is an integer, so bounds round inward
      if (c.bounds.bounded_below()) row.lo = ceil_of(c.bounds.lo() * factor);
      if (c.bounds.bounded_above()) row.hi = floor_of(c.bounds.hi() * factor);
      if (row.lo && row.hi && *row.lo > *row.hi) row.trivially_infeasible = true;
      rows.push_back(std::move(row));
    }
    return rows;
  }

  static bool fits_native(const std::vector<Row<BigInt>>& rows, const std::vector<IntInterval>& domains) {
    const BigInt limit = BigInt(1) << 100;
    for (const auto& row : rows) {
      BigInt reach = 0;
      for (const auto& [j, a] : row.terms) {
        const Count m = std::max(domains[j].hi < 0 ? -domains[j].hi : domains[j].hi,
                                 domains[j].lo < 0 ? -domains[j].lo : domains[j].lo);
        reach += abs(a) * BigInt(static_cast<long>(m));
      }
      if (reach > limit) return false;
      if (row.lo && abs(*row.lo) > limit) return false;
      if (row.hi && abs(*row.hi) > limit) return false;
    }
    return true;
  }

  static Native to_native(const BigInt& v) {
    // |v| <= 2^100: split into high and low 64-bit halves
    const BigInt mag = abs(v);
    const BigInt high = mag >> 64;
    const BigInt low = mag - (high << 64);
    Native r = (static_cast<Native>(high.get_ui()) << 64) | static_cast<Native>(low.get_ui());
    return sgn(v) < 0 ? -r : r;
  }

  static std::vector<Row<Native>> narrow(const std::vector<Row<BigInt>>& rows) {
    std::vector<Row<Native>> out;
    for (const auto& row : rows) {
      Row<Native> r;
      r.label = row.label;
      for (const auto& [j, a] : row.terms) r.terms.emplace_back(j, to_native(a));
      if (row.lo) r.lo = to_native(*row.lo);
      if (row.hi) r.hi = to_native(*row.hi);
      out.push_back(std::move(r));
    }
    return out;
  }

  static BigInt big(const BigInt&, Count v) { return BigInt(static_cast<long>(v)); }
  static Native big(const Native&, Count v) { return static_cast<Native>(v); }

  static BigInt div_floor(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static BigInt div_ceil(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static Native div_floor(Native a, Native b) {
    const Native q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
  }
  static Native div_ceil(Native a, Native b) {
    const Native q = a / b;
    return (a % b != 0 && ((a < 0) == (b < 0))) ? q + 1 : q;
  }
  static int sign(const BigInt& v) { return sgn(v); }
  static int sign(Native v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
  static Count clamp_count(const BigInt& v) { return to_count(v); }
  static Count clamp_count(Native v) { return static_cast<Count>(v); }

  template <typename Int>
  FeasibilityOutcome search(const std::vector<Row<Int>>& rows, const std::vector<IntInterval>& domains) const {
    FeasibilityOutcome out;
    std::vector<std::vector<IntInterval>> stack{domains};
    bool root = true;
    while (!stack.empty()) {
      std::vector<IntInterval> dom = std::move(stack.back());
      stack.pop_back();
      if (++out.nodes > node_limit_) {
        throw Error(ErrorCode::search_limit_exceeded,
                    "branch-and-bound exceeded " + std::to_string(node_limit_) + " nodes");
      }
      const std::optional<std::size_t> failed = propagate(rows, dom);
      if (failed) {
        if (root) out.root_refutation = rows[*failed].label;
        root = false;
        continue;
      }
      root = false;

      std::optional<std::size_t> branch;
      for (std::size_t j = 0; j < dom.size(); ++j) {
        if (dom[j].size() > 1 && (!branch || dom[j].size() > dom[*branch].size())) branch = j;
      }
      if (!branch) {
        out.feasible = true;
        out.solution.reserve(dom.size());
        for (const auto& d : dom) out.solution.push_back(d.lo);
        return out;
      }
      const IntInterval d = dom[*branch];
      const Count mid = d.lo + (d.hi - d.lo) / 2;
      std::vector<IntInterval> upper = dom;
      upper[*branch] = IntInterval{mid + 1, d.hi};
      dom[*branch] = IntInterval{d.lo, mid};
      stack.push_back(std::move(upper));  // explored after the lower half
      stack.push_back(std::move(dom));
    }
    return out;
  }

  // Tightens `dom` to a propagation fixpoint. Returns the index of a row
  // proven infeasible, or nullopt.
  template <typename Int>
  static std::optional<std::size_t> propagate(const std::vector<Row<Int>>& rows, std::vector<IntInterval>& dom) {
    constexpr int kMaxSweeps = 1000;  // stopping early is sound, only weaker
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool changed = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const Row<Int>& row = rows[r];
        Int min_act = 0;
        Int max_act = 0;
        for (const auto& [j, a] : row.terms) {
          if (sign(a) > 0) {
            min_act += a * big(a, dom[j].lo);
            max_act += a * big(a, dom[j].hi);
          } else {
            min_act += a * big(a, dom[j].hi);
            max_act += a * big(a, dom[j].lo);
          }
        }
        if ((row.hi && min_act > *row.hi) || (row.lo && max_act < *row.lo)) return r;

        for (const auto& [j, a] : row.terms) {
          IntInterval& d = dom[j];
          Int new_lo = big(a, d.lo);
          Int new_hi = big(a, d.hi);
          if (sign(a) > 0) {
            // a*x <= hi - (min_act - a*lo_j),  a*x >= lo - (max_act - a*hi_j)
            if (row.hi) new_hi = div_floor(Int(*row.hi - min_act + a * big(a, d.lo)), a);
            if (row.lo) new_lo = div_ceil(Int(*row.lo - max_act + a * big(a, d.hi)), a);
          } else {
            if (row.hi) new_lo = div_ceil(Int(*row.hi - min_act + a * big(a, d.hi)), a);
            if (row.lo) new_hi = div_floor(Int(*row.lo - max_act + a * big(a, d.lo)), a);
          }
          if (new_lo > big(a, d.lo)) {
            if (new_lo > big(a, d.hi)) return r;
            d.lo = clamp_count(new_lo);
            changed = true;
          }
          if (new_hi < big(a, d.hi)) {
            if (new_hi < big(a, d.lo)) return r;
            d.hi = clamp_count(new_hi);
            changed = true;
          }
          // activities are now stale, i.e. looser than the current domains;
          // bounds derived from them stay valid
        }
      }
      if (!changed) return std::nullopt;
    }
    return std::nullopt;
  }

  std::size_t node_limit_;
};

}  // namespace scoresleuth

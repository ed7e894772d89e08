#include <random>

#include "support.hpp"

using namespace scoresleuth;
using namespace scoresleuth::testing;

namespace {

bool exhaustive(const IntegerProblem& problem) {
  std::vector<Count> x;
  for (const auto& d : problem.domains()) x.push_back(d.lo);
  while (true) {
    if (problem.satisfied_by(x)) return true;
    std::size_t j = 0;
    while (j < x.size() && x[j] == problem.domains()[j].hi) {
      x[j] = problem.domains()[j].lo;
      ++j;
    }
    if (j == x.size()) return false;
    ++x[j];
  }
}

}  // namespace

TEST(BranchAndBound, SmallSystems) {
  IntegerProblem prob;
  const auto a = prob.add_variable(0, 10, "a");
  const auto b = prob.add_variable(0, 10, "b");
  // 3a + 5b = 17 -> (4, 1)
  prob.add_constraint({{{a, Rational(3)}, {b, Rational(5)}}, RationalInterval::point(17), "sum"});
  const auto out = BranchAndBound().solve(prob);
  ASSERT_TRUE(out.feasible);
  EXPECT_TRUE(prob.satisfied_by(out.solution));
  EXPECT_EQ(out.solution, (std::vector<Count>{4, 1}));

  // 2a + 4b = 7 has no integer solution
  IntegerProblem parity;
  const auto c = parity.add_variable(0, 10);
  const auto d = parity.add_variable(0, 10);
  parity.add_constraint({{{c, Rational(2)}, {d, Rational(4)}}, RationalInterval::point(7), "odd"});
  EXPECT_FALSE(BranchAndBound().solve(parity).feasible);
}

TEST(BranchAndBound, RootRefutationLabel) {
  IntegerProblem prob;
  const auto a = prob.add_variable(0, 3);
  prob.add_constraint({{{a, Rational(1, 2)}}, RationalInterval::closed(5, 6), "too big"});
  const auto out = BranchAndBound().solve(prob);
  EXPECT_FALSE(out.feasible);
  ASSERT_TRUE(out.root_refutation);
  EXPECT_EQ(*out.root_refutation, "too big");
}

TEST(BranchAndBound, MergedColumnsExpandWithinBounds) {
  // four identical variables with different bounds, only their sum matters
  IntegerProblem prob;
  std::vector<std::size_t> vars;
  for (Count hi : {2, 5, 1, 3}) vars.push_back(prob.add_variable(0, hi));
  LinearConstraint sum{{}, RationalInterval::point(3), "sum"};
  for (auto v : vars) sum.terms.emplace_back(v, Rational(1, 3));
  prob.add_constraint(sum);
  const auto out = BranchAndBound().solve(prob);
  ASSERT_TRUE(out.feasible);
  EXPECT_TRUE(prob.satisfied_by(out.solution));
}

TEST(BranchAndBound, NodeLimit) {
  // sum of 12 even coefficients equal to an odd target: exhaustive refutation
  IntegerProblem prob;
  LinearConstraint c{{}, RationalInterval::point(1001), "odd"};
  for (int j = 0; j < 12; ++j) c.terms.emplace_back(prob.add_variable(0, 100), Rational(2 * (j + 1)));
  prob.add_constraint(c);
  LinearConstraint d{{}, RationalInterval::closed(0, 5000), "box"};
  for (int j = 0; j < 12; ++j) d.terms.emplace_back(static_cast<std::size_t>(j), Rational(j % 3 + 1));
  prob.add_constraint(d);
  EXPECT_THROWS_CODE(BranchAndBound(50).solve(prob), ErrorCode::search_limit_exceeded);
}

TEST(BranchAndBound, HugeCoefficientsUseTheBigIntPath) {
  IntegerProblem prob;
  const auto a = prob.add_variable(0, 1000);
  const auto b = prob.add_variable(0, 1000);
  const Rational big(BigInt("1000000000000000000000000000000000"));  // 1e33
  prob.add_constraint({{{a, big}, {b, big + 1}}, RationalInterval::point(big * 7 + 3), "wide"});
  const auto out = BranchAndBound().solve(prob);
  ASSERT_TRUE(out.feasible);
  EXPECT_EQ(out.solution, (std::vector<Count>{4, 3}));
}

// Random small systems against exhaustive enumeration.
TEST(BranchAndBoundProperty, AgreesWithEnumeration) {
  std::mt19937_64 rng(3);
  const auto pick = [&](Count lo, Count hi) { return std::uniform_int_distribution<Count>(lo, hi)(rng); };
  for (int trial = 0; trial < 400; ++trial) {
    IntegerProblem prob;
    const auto vars = static_cast<std::size_t>(pick(1, 4));
    for (std::size_t j = 0; j < vars; ++j) {
      const Count lo = pick(-2, 2);
      prob.add_variable(lo, lo + pick(0, 5));
    }
    const int rows = static_cast<int>(pick(1, 3));
    for (int r = 0; r < rows; ++r) {
      LinearConstraint c;
      for (std::size_t j = 0; j < vars; ++j) {
        const Count coef = pick(-4, 4);
        if (coef != 0) c.terms.emplace_back(j, make_rational(coef, pick(1, 3)));
      }
      const Rational lo = make_rational(pick(-20, 20), pick(1, 4));
      c.bounds = RationalInterval::closed(lo, lo + make_rational(pick(0, 6), pick(1, 5)));
      c.label = "r" + std::to_string(r);
      prob.add_constraint(c);
    }
    const auto out = BranchAndBound().solve(prob);
    ASSERT_EQ(out.feasible, exhaustive(prob)) << "trial " << trial;
    if (out.feasible) ASSERT_TRUE(prob.satisfied_by(out.solution));
  }
}

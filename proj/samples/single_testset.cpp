// Checks the scores of a single binary testset, then a perturbed copy.

#include <iostream>

#include "scoresleuth/scoresleuth.hpp"

int main() {
  using namespace scoresleuth;

  const Testset testset{100, 1000};
  const auto scores = ScoreReport::from_text({{"acc", "0.8464"}, {"sens", "0.81"}, {"f1", "0.4894"}});
  const auto eps = Uncertainty::eps(ten_to_minus(4));

  const ConsistencyResult ok = check_single_testset(testset, scores, eps);
  std::cout << to_json(ok).dump(2) << "\n";

  auto typo = scores;
  typo.set("acc", "0.8474");
  const ConsistencyResult bad = check_single_testset(testset, typo, eps);
  std::cout << "acc 0.8474: " << (bad.inconsistency ? "inconsistent" : "consistent") << " ("
            << bad.violation->detail << ")\n";
  return 0;
}

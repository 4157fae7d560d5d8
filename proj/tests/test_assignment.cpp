#include <doctest.h>

#include "entprop/assignment.hpp"
#include "entprop/rng.hpp"
#include "entprop/subclass.hpp"
#include "oracles.hpp"

using entprop::solve_max_assignment;

TEST_SUITE("assignment") {

TEST_CASE("identity-dominant matrix picks the diagonal") {
  Eigen::MatrixXd score(3, 3);
  score << 5, 1, 1, 1, 5, 1, 1, 1, 5;
  const auto result = solve_max_assignment(score);
  CHECK(result.total == doctest::Approx(15.0));
  CHECK(result.assignment == std::vector<int>{0, 1, 2});
}

TEST_CASE("forced off-diagonal assignment") {
  Eigen::MatrixXd score(2, 2);
  score << 1, 10, 10, 1;
  const auto result = solve_max_assignment(score);
  CHECK(result.total == doctest::Approx(20.0));
  CHECK(result.assignment == std::vector<int>{1, 0});
}

TEST_CASE("matches permutation enumeration on random label pairs") {
  entprop::Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + rng.uniform_int(6);  // up to 7 classes
    const int n = 20 + rng.uniform_int(30);
    entprop::Subclassification sub_m, sub_e;
    sub_m.num_classes = sub_e.num_classes = k;
    for (int i = 0; i < n; ++i) {
      sub_m.labels.push_back(rng.uniform_int(k));
      sub_e.labels.push_back(rng.uniform_int(k));
    }
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < n; ++i) counts(sub_m.labels[i], sub_e.labels[i]) += 1.0;
    const double solver_total = solve_max_assignment(counts).total;
    const double oracle = oracles::similarity_by_enumeration(sub_m, sub_e) * n;
    CHECK(solver_total == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("rejects non-square input") {
  CHECK_THROWS_AS(solve_max_assignment(Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
}

}  // TEST_SUITE

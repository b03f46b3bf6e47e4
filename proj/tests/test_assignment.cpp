#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "anderson/assignment.hpp"

using namespace anderson;

namespace {

double brute_force(const Eigen::MatrixXd& c) {
  std::vector<std::size_t> perm(static_cast<std::size_t>(c.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i]));
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("optimal against enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = trial % 2 ? u(rng) : small(rng);  // ties too
    const auto a = solve_assignment(c);
    CHECK(std::abs(a.cost - brute_force(c)) <= 1e-9);
    double s = 0.0;
    for (std::size_t i = 0; i < a.column_of_row.size(); ++i) {
      CHECK(a.row_of_column[a.column_of_row[i]] == i);
      s += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.column_of_row[i]));
    }
    CHECK(std::abs(s - a.cost) <= 1e-9);
  }
}

TEST_CASE("empty and invalid input") {
  CHECK(solve_assignment(Eigen::MatrixXd(0, 0)).column_of_row.empty());
  CHECK_THROWS(solve_assignment(Eigen::MatrixXd::Zero(2, 3)));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(solve_assignment(bad));
}

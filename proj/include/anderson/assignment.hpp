#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace anderson {

struct Assignment {
  std::vector<std::size_t> column_of_row;
  std::vector<std::size_t> row_of_column;
  double cost = 0.0;
};

// Minimum-cost perfect matching of a square cost matrix (Hungarian method with
// potentials, O(n^3)). Entries must be finite.
Assignment solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace anderson

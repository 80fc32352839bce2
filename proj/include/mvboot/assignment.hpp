#pragma once

#include <cstddef>
#include <vector>

#include "mvboot/linalg.hpp"

namespace mvboot {

struct Assignment {
  std::vector<std::size_t> column_of_row;
  double cost = 0.0;  // assignment_cost(costs, column_of_row)
};

// Minimum-cost perfect matching on a square cost matrix by shortest
// augmenting paths with row/column potentials, O(m^3).
Assignment solve_assignment(const Mat& costs);

// sum_i costs(i, column_of_row[i]), accumulated in row order.
double assignment_cost(const Mat& costs, const std::vector<std::size_t>& column_of_row);

}  // namespace mvboot

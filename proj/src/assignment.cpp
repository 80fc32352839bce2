#include "mvboot/assignment.hpp"

#include <algorithm>
#include <limits>

#include "mvboot/error.hpp"

namespace mvboot {

Assignment solve_assignment(const Mat& costs) {
  if (costs.rows() != costs.cols() || costs.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "solve_assignment: cost matrix must be square and nonempty");
  const auto m = static_cast<std::size_t>(costs.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();

  // 1-based bookkeeping; column 0 is a virtual source.
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), min_slack(m + 1);
  std::vector<std::size_t> row_of_col(m + 1, 0), prev(m + 1, 0);
  std::vector<char> visited(m + 1);

  for (std::size_t row = 1; row <= m; ++row) {
    row_of_col[0] = row;
    std::size_t col = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const std::size_t i = row_of_col[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (visited[j]) continue;
        const double slack = costs(static_cast<Index>(i - 1), static_cast<Index>(j - 1)) - u[i] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          prev[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (visited[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of_col[col] != 0);
    // Flip the augmenting path.
    do {
      const std::size_t back = prev[col];
      row_of_col[col] = row_of_col[back];
      col = back;
    } while (col != 0);
  }

  Assignment out;
  out.column_of_row.assign(m, 0);
  for (std::size_t j = 1; j <= m; ++j) out.column_of_row[row_of_col[j] - 1] = j - 1;
  out.cost = assignment_cost(costs, out.column_of_row);
  return out;
}

double assignment_cost(const Mat& costs, const std::vector<std::size_t>& column_of_row) {
  double total = 0.0;
  for (std::size_t i = 0; i < column_of_row.size(); ++i)
    total += costs(static_cast<Index>(i), static_cast<Index>(column_of_row[i]));
  return total;
}

}  // namespace mvboot

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace rdchain {

/// Assigns every row i of `value` (n x K) to a column k, with column k used
/// exactly capacity[k] times (capacities sum to n), maximizing the total value.
/// Exact: successive shortest paths over the K column nodes, one row at a time.
/// Costs O(n K^3 + n K log n), so n in the thousands with K around ten is fast.
double max_value_class_assignment(const Eigen::MatrixXd& value, const std::vector<std::size_t>& capacity,
                                  std::vector<std::size_t>* assignment = nullptr);

}  // namespace rdchain

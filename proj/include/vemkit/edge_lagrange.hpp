#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vemkit {

/// Lagrange polynomials on arbitrary nodes of [0, 1].  Row r of the result
/// holds L_0..L_{n-1} evaluated at s[r].
inline Eigen::MatrixXd lagrange_values(std::span<const double> nodes, std::span<const double> s) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(s.size()), n);
  for (std::size_t r = 0; r < s.size(); ++r)
    for (Eigen::Index m = 0; m < n; ++m) {
      double value = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != m) value *= (s[r] - nodes[j]) / (nodes[m] - nodes[j]);
      out(static_cast<Eigen::Index>(r), m) = value;
    }
  return out;
}

/// Maps [-1, 1] nodes of a segment rule to [0, 1].
inline std::vector<double> to_unit_interval(std::span<const double> nodes) {
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = 0.5 * (nodes[i] + 1.0);
  return out;
}

}  // namespace vemkit

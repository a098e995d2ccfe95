#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hierpareto {

// Nodes on [x_min, 1]: geometric spacing from x_min up to `split`, then a
// power-graded run clustered toward x = 1. Weights are the composite
// trapezoid weights, exact for piecewise-linear integrands.
struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double grading = 1.0;
  double split = 0.5;

  std::size_t size() const noexcept { return nodes.size(); }
  double x_min() const noexcept { return nodes.front(); }

  // Same nodes restricted to [y, 1].
  Grid restricted(double y) const;

  // Piecewise-linear interpolant of node values; held constant below x_min.
  double interpolate(std::span<const double> values, double x) const;
};

Grid build_grid(std::size_t n_nodes, double x_min, double grading, double split = 0.5);

// Grid from explicit nodes (strictly increasing, last node 1).
Grid grid_from_nodes(std::vector<double> nodes);

}  // namespace hierpareto

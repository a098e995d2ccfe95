#include "hierpareto/grid.hpp"

#include "hierpareto/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hierpareto {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double h = x[k + 1] - x[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

Grid grid_from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw DomainError("grid needs at least two nodes");
  if (!(nodes.front() > 0.0)) throw DomainError("grid nodes must be positive");
  for (std::size_t k = 1; k < nodes.size(); ++k)
    if (!(nodes[k] > nodes[k - 1])) throw DomainError("grid nodes must increase strictly");
  if (nodes.back() != 1.0) throw DomainError("last grid node must be 1");
  Grid g;
  g.weights = trapezoid_weights(nodes);
  g.nodes = std::move(nodes);
  return g;
}

Grid build_grid(std::size_t n_nodes, double x_min, double grading, double split) {
  if (n_nodes < 2) throw DomainError("grid needs at least two nodes");
  if (!(x_min > 0.0 && x_min < 1.0)) throw DomainError("grid needs 0 < x_min < 1");
  if (!(grading >= 1.0) || !std::isfinite(grading)) throw DomainError("grid grading must be >= 1");
  if (!(split > 0.0 && split < 1.0)) throw DomainError("grid split must lie in (0, 1)");

  const std::size_t intervals = n_nodes - 1;
  std::vector<double> x;
  x.reserve(n_nodes);

  std::size_t m_log = 0;
  double start = x_min;
  if (x_min < split && intervals >= 2) {
    // Match the geometric step at the split to the first power-graded step.
    const double ratio = split * std::log(split / x_min) / (grading * (1.0 - split));
    m_log = static_cast<std::size_t>(std::lround(intervals * ratio / (1.0 + ratio)));
    m_log = std::clamp<std::size_t>(m_log, 1, intervals - 1);
    for (std::size_t k = 0; k < m_log; ++k)
      x.push_back(x_min * std::pow(split / x_min, static_cast<double>(k) / m_log));
    start = split;
  }
  const std::size_t m_pow = intervals - m_log;
  for (std::size_t k = 0; k <= m_pow; ++k) {
    const double v = static_cast<double>(k) / m_pow;
    x.push_back(1.0 - (1.0 - start) * std::pow(1.0 - v, grading));
  }
  x.front() = x_min;
  x.back() = 1.0;

  Grid g = grid_from_nodes(std::move(x));
  g.grading = grading;
  g.split = split;
  return g;
}

Grid Grid::restricted(double y) const {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("restriction point must lie in (0, 1)");
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), y);
  std::vector<double> sub(it, nodes.end());
  if (sub.size() < 2) throw DomainError("restriction leaves fewer than two nodes");
  Grid g = grid_from_nodes(std::move(sub));
  g.grading = grading;
  g.split = split;
  return g;
}

double Grid::interpolate(std::span<const double> values, double x) const {
  if (values.size() != nodes.size()) throw DomainError("interpolate: value count does not match the grid");
  if (x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return values[j] + t * (values[j + 1] - values[j]);
}

}  // namespace hierpareto

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nslab {

/// Uniform node-centred grid on [x_min, x_max] in the shock frame xi = x - sigma t.
/// Nodes 0 and n_cells carry Dirichlet far-field data.
struct SimGrid {
  double x_min = -400.0;
  double x_max = 400.0;
  std::size_t n_cells = 8192;
  double dx = 800.0 / 8192.0;
  std::vector<double> x;

  static SimGrid uniform(double x_min, double x_max, std::size_t n_cells);
  std::size_t n_nodes() const { return n_cells + 1; }

  /// Trapezoidal rule over all nodes.
  double integrate(std::span<const double> f) const;
};

struct SimState {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> u;
  double X = 0.0;
  double X_dot = 0.0;
};

}  // namespace nslab

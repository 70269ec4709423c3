#pragma once

#include <Eigen/Core>

namespace moyal {

using Index = Eigen::Index;

enum class Axis { x, p };

struct PhaseGrid {
  double x_min = 0, x_max = 0, p_min = 0, p_max = 0;
  Index nx = 0, np = 0;
  double dx = 0, dp = 0;

  double x(Index i) const { return x_min + static_cast<double>(i) * dx; }
  double p(Index j) const { return p_min + static_cast<double>(j) * dp; }
  Eigen::VectorXd xs() const;
  Eigen::VectorXd ps() const;

  Index size(Axis a) const { return a == Axis::x ? nx : np; }
  double spacing(Axis a) const { return a == Axis::x ? dx : dp; }

  bool operator==(const PhaseGrid&) const = default;
};

// Throws std::invalid_argument on reversed or degenerate bounds and on nx, np < 8.
PhaseGrid make_grid(double x_min, double x_max, double p_min, double p_max, Index nx, Index np);

// Same window, spacing divided by `factor` (node count (n-1)*factor+1).
PhaseGrid refine(const PhaseGrid& g, int factor);

}  // namespace moyal

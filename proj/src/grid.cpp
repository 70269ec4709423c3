#include "moyal/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moyal {

namespace {

void check_axis(const char* name, double lo, double hi, Index n) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument(std::string("non-finite ") + name + "-bounds");
  if (lo == hi) throw std::invalid_argument(std::string("degenerate ") + name + "-extent");
  if (lo > hi) throw std::invalid_argument(std::string("reversed ") + name + "-bounds");
  if (n < 8)
    throw std::invalid_argument(std::string("n") + name + " = " + std::to_string(n) +
                                " is below the minimum grid size 8");
}

}  // namespace

Eigen::VectorXd PhaseGrid::xs() const {
  Eigen::VectorXd v(nx);
  for (Index i = 0; i < nx; ++i) v[i] = x(i);
  return v;
}

Eigen::VectorXd PhaseGrid::ps() const {
  Eigen::VectorXd v(np);
  for (Index j = 0; j < np; ++j) v[j] = p(j);
  return v;
}

PhaseGrid make_grid(double x_min, double x_max, double p_min, double p_max, Index nx, Index np) {
  check_axis("x", x_min, x_max, nx);
  check_axis("p", p_min, p_max, np);
  PhaseGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.p_min = p_min;
  g.p_max = p_max;
  g.nx = nx;
  g.np = np;
  g.dx = (x_max - x_min) / static_cast<double>(nx - 1);
  g.dp = (p_max - p_min) / static_cast<double>(np - 1);
  return g;
}

PhaseGrid refine(const PhaseGrid& g, int factor) {
  if (factor < 1) throw std::invalid_argument("refinement factor must be positive");
  return make_grid(g.x_min, g.x_max, g.p_min, g.p_max, (g.nx - 1) * factor + 1, (g.np - 1) * factor + 1);
}

}  // namespace moyal

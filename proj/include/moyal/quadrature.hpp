#pragma once

#include <Eigen/Core>

namespace moyal {

struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// n-point rule on [-1, 1].
GaussLegendre gauss_legendre(int n);

// Composite rule: `panels` equal panels on [a, b].
template <class F>
auto integrate(F&& f, double a, double b, int panels, const GaussLegendre& rule) {
  using R = decltype(f(a));
  R sum = R(0);
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    R s = R(0);
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    sum += s * (0.5 * h);
  }
  return sum;
}

}  // namespace moyal

namespace moyal {

// n-point rule for the weight e^{-u} on [0, inf).
GaussLegendre gauss_laguerre(int n);

}  // namespace moyal

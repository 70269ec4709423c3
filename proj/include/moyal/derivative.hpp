#pragma once

#include <string>
#include <variant>

#include <Eigen/Core>

#include "moyal/symbol.hpp"

namespace moyal {

// Central differences of accuracy `order` (2, 4 or 6); one-sided stencils of the
// same width near the ends, those cells go to the margin.
struct FiniteDifference {
  int order = 4;
};

// Fourier differentiation after an erf-profile window of width taper * extent on
// each side; the windowed bands go to the margin.
struct Spectral {
  double taper = 0.0;
};

using DerivativeBackend = std::variant<FiniteDifference, Spectral>;

SampledSymbol derivative(const SampledSymbol& f, Axis axis, int n, const DerivativeBackend& backend);

// Weights for the m-th derivative at x0 on arbitrary nodes.
Eigen::VectorXd fornberg_weights(double x0, const Eigen::VectorXd& nodes, int m);

Eigen::VectorXd taper_window(Index n, double fraction);
// Number of cells per side covered by the taper.
Index taper_cells(Index n, double fraction);

std::string describe(const DerivativeBackend& backend);
// Parses "fd2", "fd4", "fd6", "spectral" or "spectral:<w>".
DerivativeBackend parse_backend(const std::string& spec);

}  // namespace moyal

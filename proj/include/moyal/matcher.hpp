#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "moyal/catalog.hpp"

namespace moyal {

enum class BasisKind {
  product,   // cos 2kx cos 2px, cos 2kx sin 2px, sin 2kx cos 2px, sin 2kx sin 2px
  shifted,   // cos 2(p+k)x, cos 2(p-k)x, sin 2(p+k)x, sin 2(p-k)x
  exponential,  // e^{2i(p+k)x}, e^{2i(p-k)x}, e^{-2i(p+k)x}, e^{-2i(p-k)x}
  negative,  // e^{2ipx}e^{2 kappa x}, e^{2ipx}e^{-2 kappa x}, e^{-2ipx}e^{2 kappa x}, e^{-2ipx}e^{-2 kappa x}
};

std::string to_string(BasisKind kind);

struct FundamentalBasis {
  BasisKind kind = BasisKind::product;
  double energy = 0;
  double wavenumber = 0;  // k for E > 0, kappa for E < 0
  std::vector<ClosedFormSymbol> elements;

  // Momenta where the elements become dependent.
  std::vector<double> degenerate_momenta() const;
};

// E > 0 gives the product basis unless `kind` asks for another positive-energy view;
// E < 0 gives the negative-energy set. E = 0 is rejected.
FundamentalBasis basis(double energy, BasisKind kind = BasisKind::product);
// Row j holds element j of `kind` in the product basis; constant in x and p.
Eigen::Matrix4cd to_product_basis(BasisKind kind);

struct CoefficientFit {
  BasisKind kind = BasisKind::product;
  double energy = 0;
  std::vector<double> p;
  Eigen::MatrixXcd c;           // p.size() x 4
  std::vector<double> residual;  // sup over collocation points, relative to sup|data|
  std::vector<double> cond;
  std::vector<bool> ill_conditioned;  // cond > 1e10
  std::vector<bool> near_pole;        // within the exclusion band of a data or basis pole

  void write_csv(std::ostream& out) const;
};

// Collocation at 3 x 4 Chebyshev points in [x_lo, x_hi].
CoefficientFit fit_coefficients(const ClosedFormSymbol& data, const FundamentalBasis& b, double x_lo, double x_hi,
                                const std::vector<double>& ps, double band = 1e-3);
// Collocation at the grid nodes inside the region (at least 8 per column).
CoefficientFit fit_coefficients(const SampledSymbol& data, const FundamentalBasis& b, Region region,
                                double band = 1e-3);

// sum_j c_j(p_m) d_x^n b_j(x, p_m).
cplx reconstruct(const CoefficientFit& fit, const FundamentalBasis& b, Index m, double x, int n = 0);

// One side of an interface: d_x^n rho at (x, p).
using InterfaceSide = std::function<cplx(int n, double x, double p)>;
InterfaceSide side_of(const ClosedFormSymbol& s);
InterfaceSide zero_side();

enum InterfaceCondition : unsigned { wall = 1, c0 = 2, c1 = 4 };

struct InterfaceReport {
  double x0 = 0;
  unsigned conditions = 0;
  std::vector<double> p;
  std::vector<double> wall, c0, c1;  // per-p mismatch of each selected condition
  double max_wall = 0, max_c0 = 0, max_c1 = 0;
  nlohmann::json to_json() const;
};

// wall: max(|left|, |right|) at x0; c0: |left - right|; c1: |d_x left - d_x right|.
InterfaceReport assemble_and_match(const InterfaceSide& left, const InterfaceSide& right, double x0,
                                   unsigned conditions, const std::vector<double>& ps);

}  // namespace moyal

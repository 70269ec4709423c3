#include "moyal/derivative.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace moyal {

Eigen::VectorXd fornberg_weights(double x0, const Eigen::VectorXd& nodes, int m) {
  const Index n = nodes.size();
  if (m >= n) throw std::invalid_argument("stencil too small for derivative order");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
  double c1 = 1.0, c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (Index i = 1; i < n; ++i) {
    const Index mn = std::min<Index>(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (Index j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (Index k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (Index k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(m);
}

Index taper_cells(Index n, double fraction) {
  if (fraction < 0 || fraction > 0.25) throw std::invalid_argument("taper fraction must lie in [0, 0.25]");
  return static_cast<Index>(std::ceil(fraction * static_cast<double>(n - 1) - 1e-9));
}

Eigen::VectorXd taper_window(Index n, double fraction) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  const Index m = taper_cells(n, fraction);
  if (m == 0) return w;
  const double width = static_cast<double>(m);
  const double s = 2 * 5.9 / width;
  const double c1 = width / 2, c2 = static_cast<double>(n - 1) - width / 2;
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    w[i] = 0.5 * (std::erf(s * (t - c1)) - std::erf(s * (t - c2)));
  }
  return w;
}

namespace {

// Applies op to every line of f along the axis.
template <class Op>
Field along(const Field& f, Axis axis, Op op) {
  Field out(f.rows(), f.cols());
  if (axis == Axis::x) {
    for (Index j = 0; j < f.cols(); ++j) out.col(j) = op(Eigen::VectorXcd(f.col(j)));
  } else {
    for (Index i = 0; i < f.rows(); ++i) out.row(i) = op(Eigen::VectorXcd(f.row(i).transpose())).transpose();
  }
  return out;
}

void mark_ends(Mask& m, Axis axis, Index cells) {
  if (cells == 0) return;
  if (axis == Axis::x) {
    m.topRows(cells).setConstant(true);
    m.bottomRows(cells).setConstant(true);
  } else {
    m.leftCols(cells).setConstant(true);
    m.rightCols(cells).setConstant(true);
  }
}

SampledSymbol finite_difference(const SampledSymbol& f, Axis axis, int n, int order) {
  if (order != 2 && order != 4 && order != 6) throw std::invalid_argument("finite-difference order must be 2, 4 or 6");
  const Index len = f.grid.size(axis);
  const Index r = (n + 1) / 2 - 1 + order / 2;
  const Index width = 2 * r + 1;
  if (len < width) throw std::invalid_argument("grid too small for the finite-difference stencil");
  const double h = f.grid.spacing(axis);
  Eigen::VectorXd offsets(width);
  for (Index k = 0; k < width; ++k) offsets[k] = static_cast<double>(k);
  // Row s: stencil starting at index start(s) evaluated at a point with offset s.
  std::vector<Eigen::VectorXd> weights;
  for (Index s = 0; s < width; ++s) weights.push_back(fornberg_weights(static_cast<double>(s), offsets, n) / std::pow(h, n));
  auto op = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd d(len);
    for (Index i = 0; i < len; ++i) {
      Index start = i - r, s = r;
      if (start < 0) {
        s = i;
        start = 0;
      } else if (start + width > len) {
        start = len - width;
        s = i - start;
      }
      d[i] = weights[s].cast<cplx>().dot(v.segment(start, width));
    }
    return d;
  };
  Mask m = f.margin;
  mark_ends(m, axis, r);
  return SampledSymbol(f.grid, along(f.values, axis, op), std::move(m), f.real);
}

SampledSymbol spectral(const SampledSymbol& f, Axis axis, int n, double taper) {
  const Index len = f.grid.size(axis);
  const Eigen::VectorXd window = taper_window(len, taper);
  // Periodic extension: the last node coincides with the first image only when
  // the data are periodic over extent + spacing.
  const double period = static_cast<double>(len) * f.grid.spacing(axis);
  Eigen::VectorXcd factor(len);
  for (Index k = 0; k < len; ++k) {
    Index q = k <= len / 2 ? k : k - len;
    if (len % 2 == 0 && k == len / 2 && n % 2 == 1) {
      factor[k] = 0;
      continue;
    }
    const double wave = 2 * std::numbers::pi * static_cast<double>(q) / period;
    factor[k] = std::pow(cplx(0, wave), n);
  }
  Eigen::FFT<double> fft;
  auto op = [&](const Eigen::VectorXcd& v) {
    std::vector<cplx> in(len), spec, back;
    for (Index i = 0; i < len; ++i) in[i] = v[i] * window[i];
    fft.fwd(spec, in);
    for (Index k = 0; k < len; ++k) spec[k] *= factor[k];
    fft.inv(back, spec);
    return Eigen::Map<Eigen::VectorXcd>(back.data(), len).eval();
  };
  Mask m = f.margin;
  mark_ends(m, axis, taper_cells(len, taper));
  return SampledSymbol(f.grid, along(f.values, axis, op), std::move(m), f.real);
}

}  // namespace

SampledSymbol derivative(const SampledSymbol& f, Axis axis, int n, const DerivativeBackend& backend) {
  if (n < 0) throw std::invalid_argument("negative derivative order");
  if (n == 0) return f;
  if (n > 4) return derivative(derivative(f, axis, 4, backend), axis, n - 4, backend);
  if (auto* fd = std::get_if<FiniteDifference>(&backend)) return finite_difference(f, axis, n, fd->order);
  return spectral(f, axis, n, std::get<Spectral>(backend).taper);
}

std::string describe(const DerivativeBackend& backend) {
  if (auto* fd = std::get_if<FiniteDifference>(&backend)) return "fd" + std::to_string(fd->order);
  return "spectral:" + std::to_string(std::get<Spectral>(backend).taper);
}

DerivativeBackend parse_backend(const std::string& spec) {
  if (spec == "fd2") return FiniteDifference{2};
  if (spec == "fd4") return FiniteDifference{4};
  if (spec == "fd6") return FiniteDifference{6};
  if (spec == "spectral") return Spectral{0.0};
  if (spec.rfind("spectral:", 0) == 0) {
    const double w = std::stod(spec.substr(9));
    taper_cells(8, w);
    return Spectral{w};
  }
  throw std::invalid_argument("unknown derivative backend '" + spec + "'");
}

}  // namespace moyal

#include "moyal/poly_symbol.hpp"

#include <stdexcept>
#include <string>

namespace moyal {

PolySymbol::PolySymbol(cplx constant) { c_(0, 0) = constant; }

PolySymbol PolySymbol::monomial(int m, int n, cplx c) {
  PolySymbol a;
  a.set(m, n, c);
  return a;
}

cplx PolySymbol::coeff(int m, int n) const {
  if (m < 0 || n < 0 || m > degree_x() || n > degree_p()) return 0.0;
  return c_(m, n);
}

void PolySymbol::set(int m, int n, cplx c) {
  if (m < 0 || n < 0) throw std::invalid_argument("negative monomial power");
  if (m + n > max_degree) {
    if (c == 0.0) return;
    throw std::invalid_argument("polynomial degree " + std::to_string(m + n) + " exceeds the bound " +
                                std::to_string(max_degree));
  }
  if (m > degree_x() || n > degree_p()) {
    if (c == 0.0) return;
    Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(std::max<Index>(m + 1, c_.rows()), std::max<Index>(n + 1, c_.cols()));
    grown.topLeftCorner(c_.rows(), c_.cols()) = c_;
    c_ = std::move(grown);
  }
  c_(m, n) = c;
  trim();
}

void PolySymbol::trim() {
  Index rows = c_.rows(), cols = c_.cols();
  while (rows > 1 && c_.row(rows - 1).head(cols).isZero(0)) --rows;
  while (cols > 1 && c_.col(cols - 1).head(rows).isZero(0)) --cols;
  if (rows != c_.rows() || cols != c_.cols()) c_ = c_.topLeftCorner(rows, cols).eval();
}

int PolySymbol::degree() const {
  int d = 0;
  for (Index m = 0; m < c_.rows(); ++m)
    for (Index n = 0; n < c_.cols(); ++n)
      if (c_(m, n) != 0.0) d = std::max(d, static_cast<int>(m + n));
  return d;
}

bool PolySymbol::is_zero() const { return c_.isZero(0); }
bool PolySymbol::is_real() const { return c_.imag().isZero(0); }
double PolySymbol::max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

cplx PolySymbol::operator()(double x, double p) const { return eval(cplx(x), cplx(p)); }

PolySymbol PolySymbol::derivative(int a, int b) const {
  PolySymbol d;
  for (int m = a; m <= degree_x(); ++m)
    for (int n = b; n <= degree_p(); ++n) {
      double f = 1;
      for (int k = 0; k < a; ++k) f *= m - k;
      for (int k = 0; k < b; ++k) f *= n - k;
      d.add(m - a, n - b, f * c_(m, n));
    }
  return d;
}

PolySymbol PolySymbol::real_part() const {
  PolySymbol r;
  r.c_ = c_.real().cast<cplx>();
  r.trim();
  return r;
}

PolySymbol PolySymbol::imag_part() const {
  PolySymbol r;
  r.c_ = c_.imag().cast<cplx>();
  r.trim();
  return r;
}

PolySymbol PolySymbol::conj() const {
  PolySymbol r;
  r.c_ = c_.conjugate();
  return r;
}

PolySymbol& PolySymbol::operator+=(const PolySymbol& o) {
  for (int m = 0; m <= o.degree_x(); ++m)
    for (int n = 0; n <= o.degree_p(); ++n)
      if (o.c_(m, n) != 0.0) add(m, n, o.c_(m, n));
  trim();
  return *this;
}

PolySymbol& PolySymbol::operator-=(const PolySymbol& o) { return *this += cplx(-1.0) * o; }

PolySymbol operator*(cplx s, const PolySymbol& a) {
  PolySymbol r;
  r.c_ = s * a.c_;
  r.trim();
  return r;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  PolySymbol r;
  for (int m = 0; m <= a.degree_x(); ++m)
    for (int n = 0; n <= a.degree_p(); ++n) {
      if (a.c_(m, n) == 0.0) continue;
      for (int k = 0; k <= b.degree_x(); ++k)
        for (int l = 0; l <= b.degree_p(); ++l)
          if (b.c_(k, l) != 0.0) r.add(m + k, n + l, a.c_(m, n) * b.c_(k, l));
    }
  return r;
}

nlohmann::json PolySymbol::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (int m = 0; m <= degree_x(); ++m)
    for (int n = 0; n <= degree_p(); ++n)
      if (c_(m, n) != 0.0) j[std::to_string(m) + "," + std::to_string(n)] = {c_(m, n).real(), c_(m, n).imag()};
  return j;
}

PolySymbol PolySymbol::from_json(const nlohmann::json& j) {
  PolySymbol a;
  for (const auto& [key, value] : j.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad monomial key '" + key + "'");
    const int m = std::stoi(key.substr(0, comma)), n = std::stoi(key.substr(comma + 1));
    a.set(m, n, cplx(value.at(0).get<double>(), value.at(1).get<double>()));
  }
  return a;
}

SampledSymbol sample(const PolySymbol& a, const PhaseGrid& g) {
  return sample(g, [&](double x, double p) { return a(x, p); }, a.is_real());
}

double max_coeff_diff(const PolySymbol& a, const PolySymbol& b) {
  const PolySymbol d = a - b;
  return d.max_abs_coeff();
}

}  // namespace moyal

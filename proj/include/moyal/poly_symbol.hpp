#pragma once

#include <json.hpp>

#include "moyal/symbol.hpp"

namespace moyal {

// sum c(m, n) x^m p^n with total degree at most max_degree.
class PolySymbol {
 public:
  static constexpr int max_degree = 12;

  PolySymbol() = default;
  explicit PolySymbol(cplx constant);
  static PolySymbol monomial(int m, int n, cplx c = 1.0);
  static PolySymbol x() { return monomial(1, 0); }
  static PolySymbol p() { return monomial(0, 1); }

  cplx coeff(int m, int n) const;
  void set(int m, int n, cplx c);
  void add(int m, int n, cplx c) { set(m, n, coeff(m, n) + c); }

  // Total degree of the nonzero part; 0 for the zero polynomial.
  int degree() const;
  int degree_x() const { return static_cast<int>(c_.rows()) - 1; }
  int degree_p() const { return static_cast<int>(c_.cols()) - 1; }
  bool is_zero() const;
  bool is_real() const;
  double max_abs_coeff() const;

  // Horner in p, then in x.
  cplx operator()(double x, double p) const;
  template <class S>
  S eval(const S& x, const S& p) const {
    S acc = S(0.0);
    for (int m = degree_x(); m >= 0; --m) {
      S row = S(0.0);
      for (int n = degree_p(); n >= 0; --n) row = row * p + S(coeff(m, n));
      acc = acc * x + row;
    }
    return acc;
  }

  PolySymbol derivative(int a, int b) const;
  PolySymbol real_part() const;
  PolySymbol imag_part() const;
  PolySymbol conj() const;

  PolySymbol& operator+=(const PolySymbol& o);
  PolySymbol& operator-=(const PolySymbol& o);
  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator-(const PolySymbol& a) { return cplx(-1.0) * a; }
  friend PolySymbol operator*(cplx s, const PolySymbol& a);
  // Pointwise product.
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);

  nlohmann::json to_json() const;
  static PolySymbol from_json(const nlohmann::json& j);

  // Coefficient table, rows indexed by the power of x.
  const Eigen::MatrixXcd& table() const { return c_; }

 private:
  void trim();
  Eigen::MatrixXcd c_ = Eigen::MatrixXcd::Zero(1, 1);
};

SampledSymbol sample(const PolySymbol& a, const PhaseGrid& g);

// Largest coefficient difference.
double max_coeff_diff(const PolySymbol& a, const PolySymbol& b);

}  // namespace moyal

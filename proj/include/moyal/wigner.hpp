#pragma once

#include <vector>

#include "moyal/quadrature.hpp"
#include "moyal/symbol.hpp"

namespace moyal {

// c x^m exp(a x + b x^2).
struct ExpTerm {
  cplx c = 1.0;
  int m = 0;
  cplx a = 0.0;
  cplx b = 0.0;
};

// One side of a piecewise wave function: a finite sum of ExpTerms.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<ExpTerm> terms);

  static Profile plane_wave(double k, cplx c = 1.0);        // c e^{ikx}
  static Profile exponential(double kappa, cplx c = 1.0);   // c e^{-kappa x}
  static Profile cosine(double k, double phi, cplx c = 1.0);  // c cos(kx - phi)
  static Profile gaussian(cplx c = 1.0);                    // c e^{-x^2/2}
  static Profile gaussian_moment(int m, cplx c = 1.0);      // c x^m e^{-x^2/2}

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx operator()(double x) const;
  cplx derivative(double x) const;

  // Throws std::invalid_argument if some term grows as x -> direction * infinity.
  void require_bounded(int direction, const char* side) const;

  friend Profile operator+(Profile a, const Profile& b);
  friend Profile operator*(cplx s, Profile a);

 private:
  std::vector<ExpTerm> terms_;
};

// psi = theta(split - x) left(x) + theta(x - split) right(x).
struct WaveFunction {
  Profile left, right;
  double split = 0;

  static WaveFunction whole(const Profile& p) { return {p, p, 0.0}; }
  cplx operator()(double x) const { return x < split ? left(x) : right(x); }
  cplx derivative(double x) const { return x < split ? left.derivative(x) : right.derivative(x); }
};

struct TransformOptions {
  int n_nodes = 20;          // Gauss-Legendre nodes per panel
  int laguerre_nodes = 24;   // along the damped rays of exponential tails
  double y_cutoff = 0;       // 0: stop where the envelope drops below 1e-14 of its peak
  double epsilon = 1e-2;     // damping sequence epsilon, epsilon/2, epsilon/4
  double spread_tol = 1e-6;  // extrapolation spread accepted as converged
  bool times_pi = true;      // return pi * rho
};

struct PointValue {
  cplx value;
  double spread = 0;  // |extrapolated - smallest epsilon| of the non-decaying tails
};

struct TransformResult {
  SampledSymbol rho;
  Eigen::MatrixXd spread;
  Mask unconverged;
  double max_spread = 0;
  double imag_ratio = 0;
  bool converged() const { return !unconverged.any(); }
};

class WignerTransform {
 public:
  explicit WignerTransform(TransformOptions options = {});

  // (1/pi) int dy e^{-2ipy} psi1(x+y) conj(psi2(x-y)), times pi if requested.
  PointValue at(const WaveFunction& psi1, const WaveFunction& psi2, double x, double p) const;
  TransformResult on(const WaveFunction& psi1, const WaveFunction& psi2, const PhaseGrid& g) const;

  const TransformOptions& options() const { return options_; }

 private:
  cplx finite_segment(const Profile& f1, const Profile& f2, double x, double p, double half) const;
  cplx tail(const Profile& f1, const Profile& f2, double x, double p, double d, int side, double& spread) const;

  TransformOptions options_;
  GaussLegendre legendre_, laguerre_;
};

// Single-state transform; tagged real when max|Im| <= 1e-10 max|Re|.
TransformResult wigner_of(const WaveFunction& psi, const PhaseGrid& g, const TransformOptions& options = {});
TransformResult cross_wigner(const WaveFunction& psi1, const WaveFunction& psi2, const PhaseGrid& g,
                             const TransformOptions& options = {});

struct ComplexTime {
  double t = 0, s = 0;
  cplx z() const { return {t, -s}; }
};

// exp(-i (E1 z - E2 conj z)); throws std::overflow_error above 1e12 in modulus.
cplx ansatz_phase(double e1, double e2, ComplexTime z);

struct OffDiagonalPair {
  WaveFunction psi1, psi2;
  double e1 = 0, e2 = 0;
};

// rho_12 exp(-i (E1 z - E2 conj z)).
TransformResult off_diagonal_wigner(const OffDiagonalPair& pair, const PhaseGrid& g, ComplexTime z,
                                    const TransformOptions& options = {});

}  // namespace moyal

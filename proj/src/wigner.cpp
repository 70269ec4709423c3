#include "moyal/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace moyal {
namespace {

const cplx I(0, 1);

cplx ipow(cplx u, int m) {
  cplx r = 1;
  for (int k = 0; k < m; ++k) r *= u;
  return r;
}

double max_abs_imag_a(const Profile& f) {
  double m = 0;
  for (const ExpTerm& t : f.terms()) m = std::max(m, std::abs(t.a.imag()) + std::abs(t.a.real()));
  return m;
}

double max_abs_b(const Profile& f) {
  double m = 0;
  for (const ExpTerm& t : f.terms()) m = std::max(m, std::abs(t.b));
  return m;
}

}  // namespace

Profile::Profile(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {
  for (const ExpTerm& t : terms_) {
    if (t.m < 0) throw std::invalid_argument("negative power in a wave-function term");
    if (t.b != 0.0 && t.b.real() == 0.0) throw std::invalid_argument("chirped Gaussian terms are not supported");
  }
}

Profile Profile::plane_wave(double k, cplx c) { return Profile({{c, 0, I * k, 0.0}}); }
Profile Profile::exponential(double kappa, cplx c) { return Profile({{c, 0, -kappa, 0.0}}); }
Profile Profile::cosine(double k, double phi, cplx c) {
  return Profile({{0.5 * c * std::exp(-I * phi), 0, I * k, 0.0}, {0.5 * c * std::exp(I * phi), 0, -I * k, 0.0}});
}
Profile Profile::gaussian(cplx c) { return Profile({{c, 0, 0.0, -0.5}}); }
Profile Profile::gaussian_moment(int m, cplx c) { return Profile({{c, m, 0.0, -0.5}}); }

cplx Profile::operator()(double x) const {
  cplx s = 0;
  for (const ExpTerm& t : terms_) s += t.c * ipow(x, t.m) * std::exp(t.a * x + t.b * x * x);
  return s;
}

cplx Profile::derivative(double x) const {
  cplx s = 0;
  for (const ExpTerm& t : terms_) {
    const cplx e = std::exp(t.a * x + t.b * x * x);
    const cplx poly = ipow(x, t.m);
    const cplx dpoly = t.m > 0 ? double(t.m) * ipow(x, t.m - 1) : cplx(0);
    s += t.c * (dpoly + poly * (t.a + 2.0 * t.b * x)) * e;
  }
  return s;
}

void Profile::require_bounded(int direction, const char* side) const {
  for (const ExpTerm& t : terms_) {
    const bool grows = t.b.real() > 0 || (t.b == 0.0 && direction * t.a.real() > 0);
    if (grows)
      throw std::invalid_argument(std::string(side) + " part grows toward " + (direction < 0 ? "-inf" : "+inf"));
  }
}

Profile operator+(Profile a, const Profile& b) {
  a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
  return a;
}

Profile operator*(cplx s, Profile a) {
  for (ExpTerm& t : a.terms_) t.c *= s;
  return a;
}

WignerTransform::WignerTransform(TransformOptions options)
    : options_(options), legendre_(gauss_legendre(options.n_nodes)), laguerre_(gauss_laguerre(options.laguerre_nodes)) {
  if (!(options.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
}

// int_{-half}^{half} e^{-2ipy} f1(x+y) conj(f2(x-y)) dy
cplx WignerTransform::finite_segment(const Profile& f1, const Profile& f2, double x, double p, double half) const {
  if (half == 0 || f1.empty() || f2.empty()) return 0.0;
  const double reach = std::abs(x) + half;
  const double omega = 2 * std::abs(p) + max_abs_imag_a(f1) + max_abs_imag_a(f2) +
                       4 * reach * (max_abs_b(f1) + max_abs_b(f2)) + 1;
  const int panels = std::max(1, static_cast<int>(std::ceil(2 * half * omega / 3)));
  return integrate([&](double y) { return std::exp(-2.0 * I * p * y) * f1(x + y) * std::conj(f2(x - y)); }, -half,
                   half, panels, legendre_);
}

// side = -1: y in (-inf, -d], f1 at x+y, f2 at x-y, with y = -d - t. side = +1: y = d + t.
cplx WignerTransform::tail(const Profile& f1, const Profile& f2, double x, double p, double d, int side,
                           double& spread) const {
  const double s1 = side, s2 = -side;
  const double a1 = x + side * d, a2 = x - side * d;
  const cplx phase0 = -2.0 * I * p * (side * d), phase1 = -2.0 * I * p * double(side);
  cplx total = 0;
  for (const ExpTerm& ti : f1.terms())
    for (const ExpTerm& tj : f2.terms()) {
      const cplx cj = std::conj(tj.c), aj = std::conj(tj.a), bj = std::conj(tj.b);
      const cplx beta = ti.b + bj;
      const cplx kappa = ti.a * s1 + 2.0 * ti.b * a1 * s1 + aj * s2 + 2.0 * bj * a2 * s2 + phase1;
      const cplx e0 = ti.a * a1 + ti.b * a1 * a1 + aj * a2 + bj * a2 * a2 + phase0;
      const auto poly = [&](cplx t) { return ti.c * cj * ipow(a1 + s1 * t, ti.m) * ipow(a2 + s2 * t, tj.m); };

      if (beta == 0.0) {
        const auto ray = [&](cplx mu) {
          cplx s = 0;
          for (Index n = 0; n < laguerre_.nodes.size(); ++n) s += laguerre_.weights[n] * poly(laguerre_.nodes[n] / mu);
          return std::exp(e0) * s / mu;
        };
        const double tiny = 1e-13 * (1 + std::abs(kappa));
        if (kappa.real() < -tiny) {
          total += ray(-kappa);
        } else if (kappa.real() <= tiny) {
          const double eps = options_.epsilon;
          const cplx r1 = ray(-kappa + 2 * eps), r2 = ray(-kappa + eps), r4 = ray(-kappa + 0.5 * eps);
          const cplx r0 = (8.0 * r4 - 6.0 * r2 + r1) / 3.0;
          spread += std::abs(r0 - r4);
          total += r0;
        } else {
          throw std::domain_error("cross term grows along the tail");
        }
        continue;
      }
      if (beta.real() >= 0) throw std::domain_error("cross term is not damped along the tail");

      const double rb = -beta.real();
      const double vertex = std::max(0.0, kappa.real() / (2 * rb));
      const double extent =
          options_.y_cutoff > 0 ? options_.y_cutoff : vertex + std::sqrt(std::log(1e14) / rb) + 2;
      const double omega = std::abs(kappa.imag()) + 2 * std::abs(beta.imag()) * extent + std::abs(kappa.real()) +
                           2 * rb * extent + 1;
      const int panels = std::max(2, static_cast<int>(std::ceil(extent * omega / 3)));
      total += integrate([&](double t) { return poly(t) * std::exp(e0 + kappa * t + beta * t * t); }, 0.0, extent,
                         panels, legendre_);
    }
  return total;
}

PointValue WignerTransform::at(const WaveFunction& psi1, const WaveFunction& psi2, double x, double p) const {
  const double d = x - psi1.split;
  if (psi2.split != psi1.split) throw std::invalid_argument("wave functions split at different points");
  const double half = std::abs(d);
  PointValue r{0.0, 0.0};
  const Profile& s1 = d < 0 ? psi1.left : psi1.right;
  const Profile& s2 = d < 0 ? psi2.left : psi2.right;
  r.value += finite_segment(s1, s2, x, p, half);
  r.value += tail(psi1.left, psi2.right, x, p, half, -1, r.spread);
  r.value += tail(psi1.right, psi2.left, x, p, half, +1, r.spread);
  if (!options_.times_pi) {
    r.value /= std::numbers::pi;
    r.spread /= std::numbers::pi;
  }
  return r;
}

TransformResult WignerTransform::on(const WaveFunction& psi1, const WaveFunction& psi2, const PhaseGrid& g) const {
  for (const WaveFunction* w : {&psi1, &psi2}) {
    w->left.require_bounded(-1, "left");
    w->right.require_bounded(+1, "right");
  }
  Field v(g.nx, g.np);
  Eigen::MatrixXd spread(g.nx, g.np);
  for (Index j = 0; j < g.np; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const PointValue pv = at(psi1, psi2, g.x(i), g.p(j));
      v(i, j) = pv.value;
      spread(i, j) = pv.spread;
    }
  TransformResult r{SampledSymbol(g, std::move(v)), spread, spread.array() > options_.spread_tol, spread.maxCoeff(),
                    0.0};
  r.imag_ratio = imag_ratio(r.rho);
  return r;
}

TransformResult wigner_of(const WaveFunction& psi, const PhaseGrid& g, const TransformOptions& options) {
  TransformResult r = WignerTransform(options).on(psi, psi, g);
  if (r.imag_ratio <= 1e-10) r.rho = as_real(r.rho, 1e-10);
  return r;
}

TransformResult cross_wigner(const WaveFunction& psi1, const WaveFunction& psi2, const PhaseGrid& g,
                             const TransformOptions& options) {
  return WignerTransform(options).on(psi1, psi2, g);
}

cplx ansatz_phase(double e1, double e2, ComplexTime z) {
  const cplx zz = z.z();
  const cplx arg = -I * (e1 * zz - e2 * std::conj(zz));
  if (!std::isfinite(arg.real()) || arg.real() > std::log(1e12))
    throw std::overflow_error("ansatz phase modulus exceeds 1e12");
  return std::exp(arg);
}

TransformResult off_diagonal_wigner(const OffDiagonalPair& pair, const PhaseGrid& g, ComplexTime z,
                                    const TransformOptions& options) {
  const cplx phase = ansatz_phase(pair.e1, pair.e2, z);
  TransformResult r = cross_wigner(pair.psi1, pair.psi2, g, options);
  r.rho = phase * r.rho;
  r.spread *= std::abs(phase);
  r.max_spread *= std::abs(phase);
  return r;
}

}  // namespace moyal

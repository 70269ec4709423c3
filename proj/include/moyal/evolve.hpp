#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "moyal/verifier.hpp"
#include "moyal/wigner.hpp"

namespace moyal {

// dR/dt = (1/i)(H*R - R*H).
BoppOperator moyal_rhs_operator(const PolySymbol& h);
SampledSymbol moyal_rhs(const PolySymbol& h, const DerivativeSource& r);
PolySymbol moyal_rhs(const PolySymbol& h, const PolySymbol& r);

struct StationaryReport {
  ResidualReport sine;    // 2i[H, rho] - (E1 - E2) rho
  ResidualReport cosine;  // 2(H, rho) - (E1 + E2) rho
};

StationaryReport stationary_ansatz_check(const LocalHamiltonian& h, double e1, double e2, const RhoPiece& rho);

struct ComplexifiedEvolution {
  ComplexTime z;
  cplx phase;
  TransformResult r;              // rho_12 exp(-i(E1 z - E2 conj z)), from the phase-carrying states
  ResidualReport left;            // H*R - E1 R
  ResidualReport right;           // R*H - E2 R
  ResidualReport off_diagonal;    // (H - E1)*R*(H - E2)
  ResidualReport dynamical;       // (i d_z - H)*R*(-i d_zbar - H)
  ResidualReport rhs;             // moyal_rhs(H, R) - dR/dt
  nlohmann::json to_json() const;
};

// Throws std::overflow_error when |exp(-i(E1 z - E2 conj z))| > 1e12.
ComplexifiedEvolution complexified_evolution(const OffDiagonalPair& pair, const PolySymbol& h, ComplexTime z,
                                             const PhaseGrid& g, const DerivativeBackend& backend,
                                             const TransformOptions& options = {});

// Forward Euler on dR/dt; first order in dt, a demonstration path only.
std::vector<SampledSymbol> euler_evolve(const PolySymbol& h, SampledSymbol r0, double dt, int steps,
                                        const DerivativeBackend& backend);

struct TimeSample {
  ComplexTime z;
  double left = 0, right = 0, off_diagonal = 0, dynamical = 0, rhs = 0;
};
TimeSample time_sample(const ComplexifiedEvolution& e);
void write_time_series(std::ostream& out, const std::vector<TimeSample>& samples);

}  // namespace moyal

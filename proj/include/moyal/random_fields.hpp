#pragma once

#include <random>
#include <vector>

#include "moyal/source.hpp"

namespace moyal {

// Grid on [-pi, pi) in both variables whose spacing makes integer frequencies periodic.
PhaseGrid periodic_grid(Index n);

// Real sum of a_k cos(m_k x + n_k p + phi_k) with integer |m_k|, |n_k| <= max_freq.
struct BandLimitedField {
  struct Mode {
    double a;
    int m, n;
    double phase;
  };
  std::vector<Mode> modes;

  template <class S>
  S operator()(const S& x, const S& p) const {
    using std::cos;
    S acc = S(0.0);
    for (const Mode& md : modes) acc += cos(x * double(md.m) + p * double(md.n) + md.phase) * md.a;
    return acc;
  }

  SampledSymbol sample_on(const PhaseGrid& g) const;
  // Exact derivatives up to (NX, NP).
  template <int NX, int NP>
  TabulatedSource exact(const PhaseGrid& g) const {
    return tabulate_jets<NX, NP>(g, [this](const auto& x, const auto& p) { return (*this)(x, p); }, true);
  }
};

BandLimitedField random_band_limited(std::mt19937_64& rng, int n_modes, int max_freq);

}  // namespace moyal

#include "moyal/random_fields.hpp"

#include <numbers>

namespace moyal {

PhaseGrid periodic_grid(Index n) {
  const double pi = std::numbers::pi;
  const double h = 2 * pi / double(n);
  return make_grid(-pi, -pi + h * double(n - 1), -pi, -pi + h * double(n - 1), n, n);
}

SampledSymbol BandLimitedField::sample_on(const PhaseGrid& g) const {
  return sample(g, [this](double x, double p) { return (*this)(x, p); }, true);
}

BandLimitedField random_band_limited(std::mt19937_64& rng, int n_modes, int max_freq) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2 * std::numbers::pi);
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  BandLimitedField f;
  for (int k = 0; k < n_modes; ++k) {
    const double a = amp(rng);
    const int m = freq(rng), n = freq(rng);
    f.modes.push_back({a, m, n, phase(rng)});
  }
  return f;
}

}  // namespace moyal

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <utility>

#include "moyal/derivative.hpp"
#include "moyal/jet.hpp"
#include "moyal/symbol.hpp"

namespace moyal {

// Anything that can hand out d^a/dx^a d^b/dp^b of one symbol on a grid.
class DerivativeSource {
 public:
  virtual ~DerivativeSource() = default;
  virtual const PhaseGrid& grid() const = 0;
  virtual SampledSymbol derivative(int a, int b) const = 0;
  virtual bool real() const = 0;
  SampledSymbol values() const { return derivative(0, 0); }
};

// Numerical derivatives of samples; results are memoized.
class SampledSource final : public DerivativeSource {
 public:
  SampledSource(SampledSymbol f, DerivativeBackend backend);

  const PhaseGrid& grid() const override { return f_.grid; }
  SampledSymbol derivative(int a, int b) const override;
  bool real() const override { return f_.real; }
  const DerivativeBackend& backend() const { return backend_; }

 private:
  SampledSymbol f_;
  DerivativeBackend backend_;
  mutable std::map<std::pair<int, int>, SampledSymbol> cache_;
  mutable std::mutex mutex_;
};

// Exact derivative fields; missing p-derivatives come from `fallback` applied to
// the highest tabulated one with the same x-order.
class TabulatedSource final : public DerivativeSource {
 public:
  TabulatedSource(const PhaseGrid& g, bool is_real, std::optional<DerivativeBackend> fallback = std::nullopt);
  TabulatedSource(const TabulatedSource& o);

  void insert(int a, int b, SampledSymbol f);
  bool has(int a, int b) const;

  const PhaseGrid& grid() const override { return grid_; }
  SampledSymbol derivative(int a, int b) const override;
  bool real() const override { return real_; }

 private:
  PhaseGrid grid_;
  bool real_;
  std::optional<DerivativeBackend> fallback_;
  mutable std::map<std::pair<int, int>, SampledSymbol> fields_;
  std::map<std::pair<int, int>, bool> exact_;
  mutable std::mutex mutex_;
};

// Tabulates every derivative up to (NX, NP) of f(x, p), a function written over
// Jet<cplx, NX, NP> arguments.
template <int NX, int NP, class F>
TabulatedSource tabulate_jets(const PhaseGrid& g, F&& f, bool is_real,
                              std::optional<DerivativeBackend> fallback = std::nullopt) {
  using J = Jet<cplx, NX, NP>;
  std::vector<Field> d((NX + 1) * (NP + 1), Field(g.nx, g.np));
  for (Index j = 0; j < g.np; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const J r = f(J::variable(Axis::x, g.x(i)), J::variable(Axis::p, g.p(j)));
      for (int a = 0; a <= NX; ++a)
        for (int b = 0; b <= NP; ++b) d[a * (NP + 1) + b](i, j) = r.derivative(a, b);
    }
  TabulatedSource s(g, is_real, fallback);
  for (int a = 0; a <= NX; ++a)
    for (int b = 0; b <= NP; ++b) {
      Field v = std::move(d[a * (NP + 1) + b]);
      if (is_real) v = v.real().cast<cplx>();
      s.insert(a, b, SampledSymbol(g, std::move(v), is_real));
    }
  return s;
}

}  // namespace moyal

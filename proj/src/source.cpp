#include "moyal/source.hpp"

#include <stdexcept>
#include <string>

namespace moyal {

SampledSource::SampledSource(SampledSymbol f, DerivativeBackend backend)
    : f_(std::move(f)), backend_(std::move(backend)) {}

SampledSymbol SampledSource::derivative(int a, int b) const {
  if (a < 0 || b < 0) throw std::invalid_argument("negative derivative order");
  if (a == 0 && b == 0) return f_;
  const std::scoped_lock lock(mutex_);
  const auto key = std::make_pair(a, b);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  SampledSymbol r;
  if (b == 0) {
    r = moyal::derivative(f_, Axis::x, a, backend_);
  } else {
    auto base = cache_.find({a, 0});
    SampledSymbol dx = a == 0 ? f_ : base != cache_.end() ? base->second : moyal::derivative(f_, Axis::x, a, backend_);
    if (a > 0) cache_.emplace(std::make_pair(a, 0), dx);
    r = moyal::derivative(dx, Axis::p, b, backend_);
  }
  r.real = f_.real;
  if (r.real) r.values = r.values.real().cast<cplx>();
  cache_.emplace(key, r);
  return r;
}

TabulatedSource::TabulatedSource(const PhaseGrid& g, bool is_real, std::optional<DerivativeBackend> fallback)
    : grid_(g), real_(is_real), fallback_(std::move(fallback)) {}

TabulatedSource::TabulatedSource(const TabulatedSource& o)
    : grid_(o.grid_), real_(o.real_), fallback_(o.fallback_), exact_(o.exact_) {
  const std::scoped_lock lock(o.mutex_);
  fields_ = o.fields_;
}

void TabulatedSource::insert(int a, int b, SampledSymbol f) {
  if (!(f.grid == grid_)) throw std::invalid_argument("tabulated field on a different grid");
  const std::scoped_lock lock(mutex_);
  fields_[{a, b}] = std::move(f);
  exact_[{a, b}] = true;
}

bool TabulatedSource::has(int a, int b) const { return exact_.count({a, b}) > 0; }

SampledSymbol TabulatedSource::derivative(int a, int b) const {
  const std::scoped_lock lock(mutex_);
  if (auto it = fields_.find({a, b}); it != fields_.end()) return it->second;
  int base = -1;
  for (int c = b - 1; c >= 0; --c)
    if (exact_.count({a, c})) {
      base = c;
      break;
    }
  if (base < 0 || !fallback_)
    throw std::domain_error("derivative (" + std::to_string(a) + "," + std::to_string(b) +
                            ") is not tabulated and no fallback backend is set");
  SampledSymbol r = moyal::derivative(fields_.at({a, base}), Axis::p, b - base, *fallback_);
  r.real = real_;
  if (real_) r.values = r.values.real().cast<cplx>();
  fields_[{a, b}] = r;
  return r;
}

}  // namespace moyal

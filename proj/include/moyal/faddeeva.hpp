#pragma once

#include <complex>

namespace moyal {

// w(z) = exp(-z^2) erfc(-iz). Throws std::domain_error for non-finite z and
// std::overflow_error when the result is not representable.
std::complex<double> faddeeva(std::complex<double> z);

std::complex<double> erfc(std::complex<double> z);
std::complex<double> erf(std::complex<double> z);

}  // namespace moyal

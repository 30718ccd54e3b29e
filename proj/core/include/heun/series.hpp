#ifndef HEUN_SERIES_HPP
#define HEUN_SERIES_HPP

#include <complex>
#include <vector>

namespace heun {

/// Truncated power-series coefficients c_0..c_M about an expansion center,
/// shared by the hypergeometric and Frobenius representations. c_0 = 1 for
/// every construction in this library. `tail_estimate` bounds the magnitude
/// of the first dropped term at the radius the series was prepared for.
struct SeriesCoefficients {
  std::vector<std::complex<double>> coeffs;
  int truncation_order = 0;
  double tail_estimate = 0.0;
};

}  // namespace heun

#endif  // HEUN_SERIES_HPP

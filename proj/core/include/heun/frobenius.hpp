#ifndef HEUN_FROBENIUS_HPP
#define HEUN_FROBENIUS_HPP

#include <stdexcept>
#include <string>

#include "heun/che.hpp"
#include "heun/series.hpp"

namespace heun {

/// Frobenius power-series solution about z = 0 for the exponent mu = 0
/// branch: u = sum c_n z^n with c_0 = 1. Converges for |z| < 1 (the distance
/// to the other regular singularity).
struct FrobeniusExpansion {
  CheParams params;  // q fixed
  Complex mu{0.0};
  SeriesCoefficients coeffs;
  double convergence_radius = 1.0;
};

/// Thrown when the recurrence coefficient of c_n vanishes (gamma a
/// non-positive integer makes the mu = 0 branch resonant at n = 1 - gamma).
struct ResonantRecurrenceError : std::runtime_error {
  ResonantRecurrenceError(int n_in, std::string what)
      : std::runtime_error(std::move(what)), n(n_in) {}
  int n;
};

/// Coefficients c_0..c_count from the three-term recurrence
///   (gamma-1+n) n c_n = -(q - (gamma+delta-epsilon-1+(n-1))(n-1)) c_{n-1}
///                       + (alpha + epsilon (n-2)) c_{n-2}.
/// Requires p.q to be set; throws ResonantRecurrenceError if the left
/// coefficient vanishes for some n in range.
FrobeniusExpansion frobenius_coefficients(const CheParams& p, int count);

/// Partial sum at z, |z| <= 0.9 enforced for accuracy. Throws
/// std::domain_error outside that disk and std::runtime_error when the
/// estimated tail exceeds rel_tol relative to the sum.
Complex frobenius_eval(const FrobeniusExpansion& f, Complex z,
                       double rel_tol = 1e-12);

/// Relative residual of the confluent Heun operator applied to the value and
/// derivative triple at z: |u'' + (gamma/z + delta/(z-1) + epsilon) u' +
/// (alpha z - q)/(z(z-1)) u| normalized by max(|u''|, |u'|, |u|, 1).
/// Throws std::domain_error at the singular points z = 0, 1.
double ode_residual(Complex u, Complex du, Complex d2u, const CheParams& p,
                    Complex z);

}  // namespace heun

#endif  // HEUN_FROBENIUS_HPP

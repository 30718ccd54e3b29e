#include "heun/frobenius.hpp"

#include <cmath>

namespace heun {

FrobeniusExpansion frobenius_coefficients(const CheParams& p, int count) {
  if (!p.q) throw std::invalid_argument("frobenius_coefficients: q not set");
  if (count < 0) throw std::invalid_argument("frobenius_coefficients: count < 0");

  const Complex q = *p.q;
  FrobeniusExpansion out;
  out.params = p;

  auto& c = out.coeffs.coeffs;
  c.resize(static_cast<size_t>(count) + 1);
  c[0] = Complex{1.0};
  for (int n = 1; n <= count; ++n) {
    const double nd = static_cast<double>(n);
    const Complex r_n = (p.gamma - 1.0 + nd) * nd;
    if (r_n == Complex{0.0})
      throw ResonantRecurrenceError(
          n, "frobenius_coefficients: recurrence coefficient vanishes at n = " +
                 std::to_string(n) + " (gamma resonance)");
    const Complex q_nm1 =
        q - (p.gamma + p.delta - p.epsilon - 1.0 + (nd - 1.0)) * (nd - 1.0);
    Complex acc = -q_nm1 * c[static_cast<size_t>(n) - 1];
    if (n >= 2) {
      const Complex p_nm2 = -(p.alpha + p.epsilon * (nd - 2.0));
      acc -= p_nm2 * c[static_cast<size_t>(n) - 2];
    }
    c[static_cast<size_t>(n)] = acc / r_n;
  }
  out.coeffs.truncation_order = count;
  out.coeffs.tail_estimate = std::abs(c.back());
  return out;
}

Complex frobenius_eval(const FrobeniusExpansion& f, Complex z, double rel_tol) {
  if (std::abs(z) > 0.9)
    throw std::domain_error("frobenius_eval: |z| must be <= 0.9 (radius of "
                            "convergence is 1)");
  Complex sum{0.0}, pw{1.0};
  double last = 0.0, prev = 0.0;
  for (const auto& cn : f.coeffs.coeffs) {
    const Complex term = cn * pw;
    sum += term;
    prev = last;
    last = std::abs(term);
    pw *= z;
  }
  // Geometric tail bound from the last two retained terms.
  double ratio = prev > 0.0 ? std::min(last / prev, 0.97) : std::abs(z) / 0.95;
  ratio = std::max(ratio, std::abs(z) / 0.95);
  const double tail = last * ratio / (1.0 - ratio);
  if (tail > rel_tol * std::max(1.0, std::abs(sum)))
    throw std::runtime_error("frobenius_eval: truncation order too low for "
                             "requested tolerance");
  return sum;
}

double ode_residual(Complex u, Complex du, Complex d2u, const CheParams& p,
                    Complex z) {
  if (!p.q) throw std::invalid_argument("ode_residual: q not set");
  if (std::abs(z) < 1e-13 || std::abs(z - 1.0) < 1e-13)
    throw std::domain_error("ode_residual: z is at a regular singularity");
  const Complex lhs = d2u +
                      (p.gamma / z + p.delta / (z - 1.0) + p.epsilon) * du +
                      (p.alpha * z - *p.q) / (z * (z - 1.0)) * u;
  const double scale =
      std::max({std::abs(d2u), std::abs(du), std::abs(u), 1.0});
  return std::abs(lhs) / scale;
}

}  // namespace heun

#ifndef HEUN_POLY_HPP
#define HEUN_POLY_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heun {

using Complex = std::complex<double>;

/// Univariate polynomial with complex binary64 coefficients, stored in
/// ascending-degree order. The trailing coefficient is nonzero unless the
/// polynomial is identically zero. Conditioning of the root finder degrades
/// with degree; degrees above 12 set the `ill_conditioned` hint on results.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Complex> coeffs);

  static Poly constant(Complex value);
  /// The monomial x (coefficients {0, 1}).
  static Poly variable();

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Complex leading() const;
  Complex coeff(int k) const;
  double max_coeff_magnitude() const;

  Complex operator()(Complex x) const;
  /// Horner evaluation of (p(x), p'(x)) in one pass.
  std::pair<Complex, Complex> eval_with_derivative(Complex x) const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  Poly& operator*=(Complex s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Complex s, Poly a) { return a *= s; }
  friend Poly operator*(Poly a, Complex s) { return a *= s; }

  Poly monic() const;
  /// Drops trailing coefficients smaller than rel_tol times the largest
  /// coefficient magnitude.
  Poly pruned(double rel_tol) const;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// Horner evaluation. Finite for finite inputs.
Complex eval_poly(const Poly& p, Complex x);

struct RootFindingError : std::runtime_error {
  RootFindingError(std::string what, std::vector<Complex> best_iterates,
                   std::vector<double> residuals_in)
      : std::runtime_error(std::move(what)),
        best(std::move(best_iterates)),
        residuals(std::move(residuals_in)) {}
  std::vector<Complex> best;
  std::vector<double> residuals;
};

/// All complex roots of p, with multiplicity, sorted by (Re, Im).
/// Simultaneous Aberth-Ehrlich iteration with a deflation fallback; every
/// returned root r satisfies |p(r)| <= tol * (magnitude scale of p at r).
/// Roots closer than 1e-7 * scale are clustered and reported as one root
/// repeated with its multiplicity. Requires degree >= 1; throws
/// RootFindingError (carrying the best iterates) on non-convergence.
std::vector<Complex> roots_of_poly(const Poly& p, double tol = 1e-12);

/// Monic polynomial with exactly the given roots (empty list -> 1).
Poly poly_from_roots(std::span<const Complex> roots);

/// Unique interpolating polynomial of degree < nodes.size() through
/// (nodes[i], values[i]). Newton divided differences. Nodes must be pairwise
/// distinct and the lists of equal length; throws std::invalid_argument
/// otherwise.
Poly interpolate_poly(std::span<const Complex> nodes,
                      std::span<const Complex> values);

}  // namespace heun

#endif  // HEUN_POLY_HPP

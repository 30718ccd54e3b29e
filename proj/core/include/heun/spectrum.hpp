#ifndef HEUN_SPECTRUM_HPP
#define HEUN_SPECTRUM_HPP

#include <optional>
#include <span>
#include <vector>

#include "heun/che.hpp"
#include "heun/poly.hpp"

namespace heun {

/// Elementary symmetric polynomials sigma_1..sigma_N of the auxiliary
/// parameters e_1..e_N (sigma_0 = 1 implicit). Working in symmetric
/// coordinates makes the fixed-q compatibility conditions linear: each
/// product prod_k (e_k - j + n) is affine in sigma.
struct SigmaVector {
  std::vector<Complex> sigma;
  int n() const { return static_cast<int>(sigma.size()); }
};

/// Value of the compatibility polynomial
///
///   (alpha + epsilon (n-1)) L0(n) + Q(n) L1(n) - (n-1)(gamma-2+n) L2(n),
///
/// with Q(n) = -q + (n-1)(n-2 + gamma + delta - epsilon) and
/// L_j(n) = prod_k (e_k - j + n) expanded in sigma. Its identical vanishing
/// makes the mu = 0 Frobenius series collapse to a generalized
/// hypergeometric series. As a polynomial in n it has degree N when
/// delta = -N: the n^(N+2) coefficient cancels identically and the n^(N+1)
/// coefficient equals N + delta.
Complex compatibility_poly_value(const CheParams& p, Complex q,
                                 const SigmaVector& sigma, Complex n);

/// Same value together with the magnitude scale of the three summands, for
/// backward-stable relative residuals.
std::pair<Complex, double> compatibility_poly_value_scaled(
    const CheParams& p, Complex q, const SigmaVector& sigma, Complex n);

/// The N+1 conditions "compatibility polynomial vanishes at n = 0..N",
/// arranged as linear equations in sigma_1..sigma_N for fixed q:
/// matrix[j] . sigma = rhs[j]. Every entry is affine in q. Requires N >= 1.
struct SigmaLinearSystem {
  std::vector<std::vector<Complex>> matrix;  // (N+1) rows x N columns
  std::vector<Complex> rhs;                  // N+1 entries
};
SigmaLinearSystem sigma_linear_system(const CheParams& p, Complex q, int n_value);

/// Thrown when the reconstructed accessory polynomial does not come out with
/// degree N+1 (a construction bug or pathological parameters).
struct AccessoryDegreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Monic degree-(N+1) polynomial in q whose roots are the admissible
/// accessory parameters for delta = -N. For N = 0 this is q - alpha; for
/// N >= 1 it is the determinant of the sigma system's augmented matrix,
/// reconstructed from N+2 point evaluations on a circle of radius
/// max(1, |alpha|, |gamma|, |epsilon|).
Poly accessory_polynomial(const CheParams& p, int n_value);

struct SolutionFlags {
  bool valid = false;
  bool denominator_hazard = false;  // some e_k is ~ a non-positive integer
  bool degenerate_system = false;   // sigma system rank-deficient beyond the
                                    // single consistency relation
  bool scale_coincidence = false;   // epsilon e_k - alpha ~ 0: the product
                                    // identity below is indeterminate there
  double sigma_residual = 0.0;      // consistency direction of the LSQ solve
  double max_node_residual = 0.0;   // worst relative compatibility value at
                                    // the integer nodes 0..N
};

struct AuxiliarySolve {
  SigmaVector sigma;
  std::vector<Complex> e;  // multiset; sorted by (Re, Im)
  SolutionFlags flags;
};

/// Recovers sigma (least squares over the N+1 node conditions) and the
/// auxiliary parameters e_k (roots of t^N - sigma_1 t^(N-1) + ...) for one
/// accessory root. The solve is unique up to permutation of the e_k.
AuxiliarySolve solve_auxiliary_parameters(const CheParams& p, int n_value,
                                          Complex q_root);

/// Absolute residuals |lhs - rhs| of the three closed consistency relations
///   q = alpha prod (1+e_k)/e_k,
///   1 = prod e_k (1-gamma+e_k) / (epsilon e_k - alpha),
///   q = alpha - sum (e_k + k - gamma - epsilon).
/// The first and third hold for every valid auxiliary solve; the middle one
/// is a numerically observed identity that is reported, never asserted. A
/// relation whose denominators vanish is returned as nullopt.
struct ConsistencyResiduals {
  std::optional<double> product;
  std::optional<double> middle;
  std::optional<double> sum;
};
ConsistencyResiduals consistency_relations(const CheParams& p, Complex q,
                                           std::span<const Complex> e);

struct SpectrumRoot {
  Complex q;
  int multiplicity = 1;
  AuxiliarySolve aux;
  ConsistencyResiduals relations;
};

/// The full spectrum for a canonical delta = -N problem: the accessory
/// polynomial, its roots sorted by (Re, Im), and the per-root auxiliary data.
struct AccessorySpectrum {
  int n_value = 0;
  Poly q_poly;
  std::vector<SpectrumRoot> roots;
};
AccessorySpectrum accessory_spectrum(const CheParams& p);

/// Hand-expanded accessory conditions for N <= 3 (monic), used as golden
/// references for the determinant construction. Setting epsilon = 0 yields
/// the reduced-case conditions.
Poly closed_form_accessory_poly(const CheParams& p, int n_value);

}  // namespace heun

#endif  // HEUN_SPECTRUM_HPP

#ifndef HEUN_HYPERGEOMETRIC_HPP
#define HEUN_HYPERGEOMETRIC_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "heun/che.hpp"
#include "heun/series.hpp"
#include "heun/spectrum.hpp"

namespace heun {

/// Descriptor of a generalized confluent hypergeometric solution
///
///   u(z) = (z - (1 - base_point))^prefactor_exponent
///          * F(numerators; denominators; scale * (z - base_point)),
///
/// where F is the pFq series with coefficient ratio
/// c_n / c_{n-1} = scale * prod(a_k - 1 + n) / (n * prod(b_k - 1 + n)),
/// coefficients taken for powers of (z - base_point). The prefactor base is
/// the other regular singularity; prefactor_exponent = 0 means no prefactor.
/// Valid descriptors have no denominator parameter equal to zero or a
/// negative integer; the confluent (epsilon != 0) shape has equally many
/// numerator and denominator parameters, the reduced shape one fewer
/// numerator. Such series converge for every finite argument.
struct GhfSolution {
  std::vector<Complex> numerator_params;
  std::vector<Complex> denominator_params;
  Complex scale{};
  double base_point = 0.0;  // 0 or 1
  Complex prefactor_exponent{0.0};
};

struct DenominatorParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when adaptive summation hits the term cap; carries the partial
/// sums reached (extreme parameters, not divergence: the series is entire).
struct SeriesCapError : std::runtime_error {
  SeriesCapError(std::string what, Complex value_in, Complex d1_in, Complex d2_in)
      : std::runtime_error(std::move(what)), value(value_in), d1(d1_in), d2(d2_in) {}
  Complex value, d1, d2;
};

/// Series coefficients c_0..c_count for powers of (z - base_point), scale
/// folded in; c_0 = 1. A vanishing numerator factor terminates the series
/// (all later coefficients are exactly zero); a vanishing denominator factor
/// throws DenominatorParameterError.
SeriesCoefficients ghf_coefficients(const GhfSolution& sol, int count);

struct EvalTriple {
  Complex value{}, d1{}, d2{};
};

/// Value and first two derivatives of the full solution (prefactor included)
/// at z. Adaptive summation stops once two consecutive terms drop below
/// rel_tol relative to the running sums; hard cap 10000 terms.
EvalTriple ghf_eval(const GhfSolution& sol, Complex z, double rel_tol = 1e-12);

/// Base-0, prefactor-free descriptor for a canonical delta = -N problem with
/// auxiliary parameters e: numerators {1+e_k} plus alpha/epsilon when
/// epsilon != 0, denominators {e_k, gamma}, scale -epsilon (or -alpha in the
/// reduced case).
GhfSolution canonical_ghf(const CheParams& p, std::span<const Complex> e);

struct UnsupportedCaseError : std::runtime_error {
  UnsupportedCaseError(CaseClass cls_in, std::string what)
      : std::runtime_error(std::move(what)), cls(cls_in) {}
  CaseClass cls;
};

struct ConstructedSolution {
  /// Accessory parameter value in the *input* equation's convention.
  Complex q{};
  /// Full solution descriptor in the input equation's coordinates.
  GhfSolution solution;
  /// The transformed delta = -N problem the spectrum was solved on, with its
  /// accessory value filled in (for oracle comparisons).
  CheParams canonical;
  std::vector<Complex> e_params;
  SolutionFlags flags;
  ConsistencyResiduals relations;
  int multiplicity = 1;
};

struct ConstructionResult {
  CaseClass case_class;
  /// Number of swap/shift steps applied before reaching canonical form.
  bool swapped = false;
  bool shifted = false;
  Poly accessory_poly;  // in the canonical problem's q variable
  std::vector<ConstructedSolution> solutions;
};

/// Dispatch pipeline: classify, transform to a canonical delta = -N problem,
/// solve the accessory spectrum, and assemble one solution descriptor per
/// root (mapped back to the input coordinates). When p.q is set, only the
/// spectrum root matching it is kept; an off-spectrum q throws
/// std::invalid_argument. Exceptional/unsupported classifications throw
/// UnsupportedCaseError. Roots whose auxiliary parameters hit denominator
/// hazards are kept with flags.valid = false.
ConstructionResult construct_solutions(const CheParams& p,
                                       double int_tol = kDefaultIntTol);

}  // namespace heun

#endif  // HEUN_HYPERGEOMETRIC_HPP

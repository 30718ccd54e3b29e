#ifndef HEUN_CHE_HPP
#define HEUN_CHE_HPP

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace heun {

using Complex = std::complex<double>;

/// Parameters of the confluent Heun equation in the canonical form
///
///   u'' + (gamma/z + delta/(z-1) + epsilon) u' + (alpha z - q)/(z (z-1)) u = 0.
///
/// The characteristic exponents are {0, 1-gamma} at z = 0 and {0, 1-delta}
/// at z = 1. `q` is the accessory parameter; it is left empty when it is the
/// unknown of a spectrum computation.
struct CheParams {
  Complex gamma{};
  Complex delta{};
  Complex epsilon{};
  Complex alpha{};
  std::optional<Complex> q{};

  std::array<Complex, 2> exponents_at_origin() const {
    return {Complex{0.0}, Complex{1.0} - gamma};
  }
  std::array<Complex, 2> exponents_at_one() const {
    return {Complex{0.0}, Complex{1.0} - delta};
  }
};

/// Default absolute tolerance for treating a parameter as an exact integer.
/// The closed-form constructions require exact integers; detection merely
/// automates the obvious case, the modeling assertion stays with the caller.
inline constexpr double kDefaultIntTol = 1e-9;

bool near_integer(Complex x, double tol = kDefaultIntTol);
long nearest_integer(Complex x);

enum class CaseKind {
  Kummer,           // delta = 0, epsilon != 0
  Bessel,           // delta = 0, epsilon = 0
  GhfDelta,         // delta = -N, N >= 1, epsilon != 0
  GhfDeltaEps0,     // delta = -N, N >= 1, epsilon = 0
  NeedsDeltaShift,  // delta integer >= 2: power change brings delta to 2-delta
  NeedsSwap,        // gamma integer != 1: expand about z = 1 instead
  Exceptional,      // delta = 1 with no integer-gamma escape
  Unsupported,      // neither exponent is integer-classifiable
};

const char* to_string(CaseKind kind);

struct CaseClass {
  CaseKind kind = CaseKind::Unsupported;
  /// Auxiliary-parameter count N of the canonical delta = -N problem this
  /// case reduces to; -1 when not applicable.
  int n_value = -1;
  double int_tol = kDefaultIntTol;
};

/// Determines which construction (if any) applies to the parameters. The
/// delta route is preferred when both delta and gamma are eligible integers.
CaseClass classify(const CheParams& p, double int_tol = kDefaultIntTol);

/// Parameters of the equation obtained by the change of variable z -> 1-z:
/// (gamma, delta, epsilon, alpha, q) -> (delta, gamma, -epsilon, -alpha,
/// q - alpha). Involutive; solutions of the result expanded at its origin
/// correspond to solutions of the input expanded at z = 1.
CheParams swap_singularities(const CheParams& p);

struct DeltaShift {
  CheParams params;
  /// The full solution of the input equation is (z-1)^prefactor_exponent
  /// times a solution of `params`.
  Complex prefactor_exponent{};
};

/// The elementary power change u = (z-1)^(1-delta) w, mapping delta to
/// 2 - delta, alpha to alpha + (1-delta) epsilon and q to q - (1-delta) gamma.
/// Self-inverse on the solution space (the two prefactor exponents cancel).
DeltaShift shift_delta_exponent(const CheParams& p);

enum class DiagnosticKind {
  NonFiniteParameter,
  DenominatorHazard,   // the construction's denominator parameter (gamma, or
                       // delta on the swap route) is a non-positive integer
  ExceptionalExponent, // delta = 1 and no integer gamma != 1 escape exists
};

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

std::vector<Diagnostic> validate_params(const CheParams& p,
                                        double int_tol = kDefaultIntTol);

}  // namespace heun

#endif  // HEUN_CHE_HPP

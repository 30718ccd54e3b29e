#include "heun/che.hpp"

#include <cmath>

namespace heun {

bool near_integer(Complex x, double tol) {
  if (std::abs(x.imag()) > tol) return false;
  return std::abs(x.real() - std::round(x.real())) <= tol;
}

long nearest_integer(Complex x) { return std::lround(x.real()); }

const char* to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Kummer: return "kummer";
    case CaseKind::Bessel: return "bessel";
    case CaseKind::GhfDelta: return "ghf_delta";
    case CaseKind::GhfDeltaEps0: return "ghf_delta_eps0";
    case CaseKind::NeedsDeltaShift: return "needs_delta_shift";
    case CaseKind::NeedsSwap: return "needs_swap";
    case CaseKind::Exceptional: return "exceptional";
    case CaseKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

CaseClass classify(const CheParams& p, double int_tol) {
  CaseClass out;
  out.int_tol = int_tol;

  const bool eps_zero = p.epsilon == Complex{0.0};

  if (near_integer(p.delta, int_tol)) {
    const long d = nearest_integer(p.delta);
    if (d == 0) {
      out.kind = eps_zero ? CaseKind::Bessel : CaseKind::Kummer;
      out.n_value = 0;
      return out;
    }
    if (d < 0) {
      out.kind = eps_zero ? CaseKind::GhfDeltaEps0 : CaseKind::GhfDelta;
      out.n_value = static_cast<int>(-d);
      return out;
    }
    if (d >= 2) {
      out.kind = CaseKind::NeedsDeltaShift;
      out.n_value = static_cast<int>(d - 2);
      return out;
    }
    // d == 1 falls through to the gamma route.
  }

  if (near_integer(p.gamma, int_tol) && nearest_integer(p.gamma) != 1) {
    const long g = nearest_integer(p.gamma);
    out.kind = CaseKind::NeedsSwap;
    out.n_value = static_cast<int>(g <= 0 ? -g : g - 2);
    return out;
  }

  if (near_integer(p.delta, int_tol) && nearest_integer(p.delta) == 1) {
    out.kind = CaseKind::Exceptional;
    return out;
  }

  out.kind = CaseKind::Unsupported;
  return out;
}

CheParams swap_singularities(const CheParams& p) {
  CheParams out;
  out.gamma = p.delta;
  out.delta = p.gamma;
  out.epsilon = -p.epsilon;
  out.alpha = -p.alpha;
  if (p.q) out.q = *p.q - p.alpha;
  return out;
}

DeltaShift shift_delta_exponent(const CheParams& p) {
  const Complex sigma = Complex{1.0} - p.delta;
  DeltaShift out;
  out.prefactor_exponent = sigma;
  out.params.gamma = p.gamma;
  out.params.delta = Complex{2.0} - p.delta;
  out.params.epsilon = p.epsilon;
  out.params.alpha = p.alpha + sigma * p.epsilon;
  if (p.q) out.params.q = *p.q - sigma * p.gamma;
  return out;
}

namespace {

bool finite(Complex x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

bool non_positive_integer(Complex x, double tol) {
  return near_integer(x, tol) && nearest_integer(x) <= 0;
}

}  // namespace

std::vector<Diagnostic> validate_params(const CheParams& p, double int_tol) {
  std::vector<Diagnostic> out;
  if (!finite(p.gamma) || !finite(p.delta) || !finite(p.epsilon) ||
      !finite(p.alpha) || (p.q && !finite(*p.q))) {
    out.push_back({DiagnosticKind::NonFiniteParameter,
                   "at least one parameter is not finite"});
    return out;
  }

  const CaseClass cls = classify(p, int_tol);
  switch (cls.kind) {
    case CaseKind::Kummer:
    case CaseKind::Bessel:
    case CaseKind::GhfDelta:
    case CaseKind::GhfDeltaEps0:
    case CaseKind::NeedsDeltaShift:
      // gamma stays the denominator parameter of the series.
      if (non_positive_integer(p.gamma, 1e-7))
        out.push_back({DiagnosticKind::DenominatorHazard,
                       "gamma is a non-positive integer; it appears as a "
                       "denominator parameter of the series"});
      break;
    case CaseKind::NeedsSwap:
      if (non_positive_integer(p.delta, 1e-7))
        out.push_back({DiagnosticKind::DenominatorHazard,
                       "delta is a non-positive integer; after swapping the "
                       "regular singularities it becomes a denominator "
                       "parameter of the series"});
      break;
    case CaseKind::Exceptional:
      out.push_back({DiagnosticKind::ExceptionalExponent,
                     "delta = 1: both exponents at z = 1 vanish and gamma "
                     "offers no integer escape; no single-function solution "
                     "is known"});
      break;
    case CaseKind::Unsupported:
      break;
  }
  return out;
}

}  // namespace heun

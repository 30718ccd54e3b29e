#include "heun/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heun {

namespace {

constexpr int kSeriesCap = 10000;

// Successive-coefficient ratio at step n, or a terminated marker when a
// numerator factor vanishes.
struct RatioStep {
  Complex ratio{};
  bool terminated = false;
};

RatioStep coefficient_ratio(const GhfSolution& sol, int n) {
  Complex num = sol.scale;
  for (const Complex& a : sol.numerator_params) num *= a - 1.0 + static_cast<double>(n);
  if (num == Complex{0.0}) return {Complex{0.0}, true};
  Complex den{static_cast<double>(n)};
  for (const Complex& b : sol.denominator_params) den *= b - 1.0 + static_cast<double>(n);
  if (den == Complex{0.0})
    throw DenominatorParameterError(
        "ghf series: denominator parameter hits a non-positive integer at "
        "term " + std::to_string(n));
  return {num / den, false};
}

bool is_near_real_integer(Complex x) {
  return std::abs(x.imag()) == 0.0 &&
         std::abs(x.real() - std::round(x.real())) < 1e-12;
}

// (w)^rho with an exact integer fast path so transformation prefactors do
// not pick up branch noise.
Complex cpow(Complex w, Complex rho) {
  if (is_near_real_integer(rho)) {
    long k = std::lround(rho.real());
    Complex r{1.0};
    const Complex base = k >= 0 ? w : 1.0 / w;
    for (long i = 0; i < std::labs(k); ++i) r *= base;
    return r;
  }
  return std::pow(w, rho);
}

}  // namespace

SeriesCoefficients ghf_coefficients(const GhfSolution& sol, int count) {
  if (count < 0) throw std::invalid_argument("ghf_coefficients: count < 0");
  SeriesCoefficients out;
  out.coeffs.resize(static_cast<size_t>(count) + 1, Complex{0.0});
  out.coeffs[0] = Complex{1.0};
  bool terminated = false;
  for (int n = 1; n <= count && !terminated; ++n) {
    const RatioStep step = coefficient_ratio(sol, n);
    terminated = step.terminated;
    out.coeffs[static_cast<size_t>(n)] =
        terminated ? Complex{0.0}
                   : out.coeffs[static_cast<size_t>(n) - 1] * step.ratio;
  }
  out.truncation_order = count;
  out.tail_estimate = std::abs(out.coeffs.back());
  return out;
}

EvalTriple ghf_eval(const GhfSolution& sol, Complex z, double rel_tol) {
  const Complex t = z - sol.base_point;

  // Series part and its two derivatives, summed together.
  Complex s{1.0}, s1{0.0}, s2{0.0};
  Complex c{1.0};          // c_n
  Complex pow_nm1{1.0};    // t^(n-1)
  Complex pow_nm2{0.0};    // t^(n-2), unused at n = 1
  int small_streak = 0;
  bool done = false;
  for (int n = 1; n <= kSeriesCap; ++n) {
    const RatioStep step = coefficient_ratio(sol, n);
    if (step.terminated) {
      done = true;
      break;
    }
    c *= step.ratio;
    const double nd = static_cast<double>(n);
    const Complex v_term = c * pow_nm1 * t;
    const Complex d1_term = nd * c * pow_nm1;
    const Complex d2_term = n >= 2 ? nd * (nd - 1.0) * c * pow_nm2 : Complex{0.0};
    s += v_term;
    s1 += d1_term;
    s2 += d2_term;
    pow_nm2 = pow_nm1;
    pow_nm1 *= t;

    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) ||
        !std::isfinite(s1.real()) || !std::isfinite(s1.imag()) ||
        !std::isfinite(s2.real()) || !std::isfinite(s2.imag()))
      throw SeriesCapError("ghf_eval: overflow during summation", s, s1, s2);

    const bool small =
        std::abs(v_term) <= rel_tol * std::max(1.0, std::abs(s)) &&
        std::abs(d1_term) <= rel_tol * std::max(1.0, std::abs(s1)) &&
        std::abs(d2_term) <= rel_tol * std::max(1.0, std::abs(s2));
    small_streak = small ? small_streak + 1 : 0;
    if (small_streak >= 2) {  // one small term can be a parity artifact
      done = true;
      break;
    }
  }
  if (!done)
    throw SeriesCapError("ghf_eval: term cap reached before convergence", s,
                         s1, s2);

  if (sol.prefactor_exponent == Complex{0.0}) return {s, s1, s2};

  const Complex w = z - (1.0 - sol.base_point);
  const Complex rho = sol.prefactor_exponent;
  const Complex p0 = cpow(w, rho);
  const Complex p1 = rho * cpow(w, rho - 1.0);
  const Complex p2 = rho * (rho - 1.0) * cpow(w, rho - 2.0);
  return {p0 * s, p1 * s + p0 * s1, p2 * s + 2.0 * p1 * s1 + p0 * s2};
}

GhfSolution canonical_ghf(const CheParams& p, std::span<const Complex> e) {
  GhfSolution sol;
  const bool eps_zero = p.epsilon == Complex{0.0};
  for (const Complex& ek : e) sol.numerator_params.push_back(1.0 + ek);
  if (!eps_zero) sol.numerator_params.push_back(p.alpha / p.epsilon);
  for (const Complex& ek : e) sol.denominator_params.push_back(ek);
  sol.denominator_params.push_back(p.gamma);
  sol.scale = eps_zero ? -p.alpha : -p.epsilon;
  sol.base_point = 0.0;
  sol.prefactor_exponent = Complex{0.0};
  return sol;
}

namespace {

// Reflect a base-0 descriptor of the swapped equation into the input frame:
// the series variable flips sign (z - 1 = -(1 - z)), so the folded scale
// flips; the prefactor base (z - 1 in the swapped frame) becomes z.
GhfSolution reflect_to_base_one(GhfSolution sol) {
  sol.scale = -sol.scale;
  sol.base_point = 1.0;
  return sol;
}

bool non_positive_integer_within(Complex x, double tol) {
  if (std::abs(x.imag()) > tol) return false;
  const double r = std::round(x.real());
  return r <= 0.0 && std::abs(x.real() - r) <= tol;
}

ConstructionResult construct_canonical(const CheParams& p, const CaseClass& cls) {
  ConstructionResult out;
  out.case_class = cls;

  AccessorySpectrum spec = accessory_spectrum(p);
  out.accessory_poly = spec.q_poly;

  const bool gamma_hazard = non_positive_integer_within(p.gamma, 1e-7);
  for (SpectrumRoot& root : spec.roots) {
    ConstructedSolution sol;
    sol.q = root.q;
    sol.canonical = p;
    sol.canonical.q = root.q;
    sol.e_params = root.aux.e;
    sol.flags = root.aux.flags;
    if (gamma_hazard) {
      sol.flags.denominator_hazard = true;
      sol.flags.valid = false;
    }
    sol.relations = root.relations;
    sol.multiplicity = root.multiplicity;
    sol.solution = canonical_ghf(p, sol.e_params);
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

}  // namespace

ConstructionResult construct_solutions(const CheParams& p, double int_tol) {
  const CaseClass cls = classify(p, int_tol);

  ConstructionResult result;
  switch (cls.kind) {
    case CaseKind::Kummer:
    case CaseKind::Bessel:
    case CaseKind::GhfDelta:
    case CaseKind::GhfDeltaEps0: {
      CheParams canonical = p;
      canonical.delta = Complex{static_cast<double>(-cls.n_value)};  // snap
      canonical.q.reset();
      result = construct_canonical(canonical, cls);
      break;
    }
    case CaseKind::NeedsDeltaShift: {
      CheParams base = p;
      base.q.reset();
      const DeltaShift shifted = shift_delta_exponent(base);
      CheParams canonical = shifted.params;
      canonical.delta = Complex{static_cast<double>(-cls.n_value)};
      result = construct_canonical(canonical, cls);
      result.shifted = true;
      // Map accessory values back and attach the power prefactor.
      const Complex sigma = shifted.prefactor_exponent;  // 1 - delta
      for (ConstructedSolution& sol : result.solutions) {
        sol.q = sol.q + sigma * p.gamma;
        sol.solution.prefactor_exponent = sigma;
      }
      break;
    }
    case CaseKind::NeedsSwap: {
      CheParams base = p;
      base.q.reset();
      const CheParams swapped = swap_singularities(base);
      // The swapped problem has an integer delta (= input gamma); recurse one
      // level for the direct or shift handling.
      ConstructionResult inner = construct_solutions(swapped, int_tol);
      result = std::move(inner);
      result.case_class = cls;
      result.swapped = true;
      for (ConstructedSolution& sol : result.solutions) {
        sol.q = sol.q + p.alpha;
        sol.solution = reflect_to_base_one(std::move(sol.solution));
      }
      break;
    }
    case CaseKind::Exceptional:
      throw UnsupportedCaseError(
          cls,
          "construct_solutions: delta = 1 with no integer gamma escape; both "
          "exponents at z = 1 vanish and no single-function solution is "
          "known");
    case CaseKind::Unsupported:
      throw UnsupportedCaseError(
          cls,
          "construct_solutions: neither delta nor gamma is close enough to "
          "an eligible integer");
  }

  if (p.q) {
    const Complex target = *p.q;
    const double tol = 1e-6 * std::max(1.0, std::abs(target));
    std::vector<ConstructedSolution> kept;
    double best = std::numeric_limits<double>::infinity();
    for (ConstructedSolution& sol : result.solutions) {
      const double dist = std::abs(sol.q - target);
      best = std::min(best, dist);
      if (dist <= tol) kept.push_back(std::move(sol));
    }
    if (kept.empty())
      throw std::invalid_argument(
          "construct_solutions: requested q is off-spectrum (nearest root "
          "at distance " + std::to_string(best) + ")");
    result.solutions = std::move(kept);
  }
  return result;
}

}  // namespace heun

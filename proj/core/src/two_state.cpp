#include "heun/two_state.hpp"

#include <cmath>
#include <limits>

namespace heun {

namespace {

constexpr Complex kI{0.0, 1.0};

double halley_w(double x, double w) {
  for (int it = 0; it < 60; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(x))) return w;
    const double fp = ew * (1.0 + w);
    const double fpp = ew * (2.0 + w);
    const double denom = fp - 0.5 * f * fpp / fp;
    w -= f / denom;
  }
  return w;  // converged to rounding long before this
}

}  // namespace

double lambert_w(double x) {
  constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
  if (x < kBranchPoint - 1e-15)
    throw std::domain_error("lambert_w: argument below -1/e");
  if (x == 0.0) return 0.0;
  double w;
  if (x < 0.0) {
    // Branch-point expansion seeds the iteration on [-1/e, 0).
    const double p = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * x)));
    w = -1.0 + p - p * p / 3.0;
  } else if (x < 3.0) {
    w = std::log1p(x) * 0.75;
  } else {
    const double lx = std::log(x);
    w = lx - std::log(lx);
  }
  return halley_w(x, std::max(w, -1.0 + 1e-12));
}

double lambert_w_exp(double s) {
  if (s < 700.0) return lambert_w(std::exp(s));
  // Solve w + log w = s by Newton; exp(s) would overflow.
  double w = s - std::log(s);
  for (int it = 0; it < 50; ++it) {
    const double f = w + std::log(w) - s;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(s))) break;
    w -= f / (1.0 + 1.0 / w);
  }
  return w;
}

FieldSample field_configuration(const TwoStateConfig& c, double t) {
  const double w = lambert_w_exp(-t / c.tau);
  return {c.u0, c.delta0 - (c.delta0 + c.delta1) / (1.0 + w)};
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double phase_integral(const TwoStateConfig& c, double t) {
  const auto rate = [&c](double s) {
    return field_configuration(c, s).detuning_rate;
  };
  return integrate(rate, 0.0, t, 1e-10);
}

TwoStateDerived two_state_reduction(const TwoStateConfig& c) {
  if (!(c.tau > 0.0))
    throw std::invalid_argument("two_state_reduction: tau must be positive");
  if (c.u0 < 0.0)
    throw std::invalid_argument("two_state_reduction: u0 must be >= 0");

  TwoStateDerived d;
  const double s1 = c.sign1 >= 0 ? 1.0 : -1.0;
  const double s0 = c.sign0 >= 0 ? 1.0 : -1.0;
  const double u2 = c.u0 * c.u0;
  d.alpha1 = 0.5 * kI * c.tau *
             (c.delta1 + s1 * std::sqrt(c.delta1 * c.delta1 + 4.0 * u2));
  d.alpha0 = 0.5 * kI * c.tau *
             (c.delta0 + s0 * std::sqrt(c.delta0 * c.delta0 + 4.0 * u2));

  const Complex gamma = 1.0 + 2.0 * d.alpha1 - kI * c.tau * c.delta1;
  const Complex eps = 2.0 * d.alpha0 - kI * c.tau * c.delta0;

  // Whatever survives of the pulled-back equation's u coefficient after the
  // exponents kill the z^-2 and constant parts fixes alpha and q.
  const double t2u2 = c.tau * c.tau * u2;
  const Complex c1 = 2.0 * d.alpha0 * d.alpha1 +
                     (1.0 - kI * c.tau * c.delta1) * d.alpha0 -
                     kI * c.tau * c.delta0 * d.alpha1 - 2.0 * t2u2;
  const Complex alpha = c1 - d.alpha0;
  const Complex q = c1 + d.alpha1;

  d.che = CheParams{gamma, Complex{-1.0}, eps, alpha, q};
  d.q_value = q;

  // The accessory value always lands on the N = 1 condition; keep the
  // residual as a diagnostic.
  {
    const Poly cond = closed_form_accessory_poly(d.che, 1);
    double scale = 0.0;
    double pw = 1.0;
    for (const Complex& coeff : cond.coeffs()) {
      scale += std::abs(coeff) * pw;
      pw *= std::abs(q);
    }
    d.accessory_residual = std::abs(cond(q)) / std::max(scale, 1.0);
  }

  const double param_scale =
      std::max({1.0, t2u2, std::abs(d.alpha0) + std::abs(d.alpha1)});
  if (std::abs(alpha) <= 1e-12 * param_scale &&
      std::abs(q) <= 1e-12 * param_scale) {
    // alpha = q = 0: the z-dependent coefficient of the equation vanishes,
    // u == 1 solves it exactly and the N = 1 series parameter e would sit at
    // a denominator hazard. Emit a terminating series instead.
    d.degenerate = true;
    d.e_param = Complex{0.0};
    d.che.alpha = Complex{0.0};
    d.che.q = Complex{0.0};
    d.q_value = Complex{0.0};
    d.ghf = GhfSolution{{Complex{0.0}}, {gamma}, -eps, 0.0, Complex{0.0}};
  } else {
    CheParams unknown_q = d.che;
    unknown_q.q.reset();
    const AccessorySpectrum spec = accessory_spectrum(unknown_q);
    const SpectrumRoot* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const SpectrumRoot& root : spec.roots) {
      const double dist = std::abs(root.q - q);
      if (dist < best_dist) {
        best_dist = dist;
        best = &root;
      }
    }
    // A multiple accessory root can only be located to O(sqrt(eps)) in
    // binary64, so the identification window is wider than the solver's
    // residual tolerance.
    if (best == nullptr || best_dist > 1e-6 * std::max(1.0, std::abs(q)))
      throw std::runtime_error(
          "two_state_reduction: derived accessory value is off the computed "
          "spectrum");
    d.e_param = best->aux.e.empty() ? Complex{0.0} : best->aux.e.front();
    d.ghf = canonical_ghf(d.che, best->aux.e);
  }

  // Printed closed forms of the series parameters, for cross-reporting.
  {
    const Complex printed_a =
        (c.delta0 * c.delta1 - 4.0 * u2) * c.tau * c.tau / (2.0 * eps) +
        0.5 * (gamma - 1.0);
    const Complex printed_e = d.alpha1 - kI * c.tau * c.delta1 + d.alpha0 -
                              kI * c.tau * c.delta0;
    const Complex derived_a = d.degenerate ? Complex{0.0} : alpha / eps;
    d.printed_a_deviation = std::abs(printed_a - derived_a) /
                            std::max(1.0, std::abs(derived_a));
    d.printed_e_deviation = std::abs(printed_e - d.e_param) /
                            std::max(1.0, std::abs(d.e_param));
  }
  return d;
}

namespace {

// z(t) = -W(exp(-t/tau)), real, increasing from -inf to 0.
double z_of_t(const TwoStateConfig& c, double t) {
  if (std::abs(t) / c.tau > 700.0)
    throw std::domain_error("two-state evaluation: |t|/tau too large");
  return -lambert_w_exp(-t / c.tau);
}

}  // namespace

AmplitudePair amplitude_pair(const TwoStateDerived& d, const TwoStateConfig& c,
                             double t) {
  if (!(c.u0 > 0.0))
    throw std::invalid_argument(
        "amplitude_pair: u0 = 0 leaves a1 undetermined");

  const double zr = z_of_t(c, t);
  const Complex z{zr, 0.0};
  const EvalTriple u = ghf_eval(d.ghf, z);

  // psi = z^alpha1 exp(alpha0 z) u(z); principal branch on the negative axis.
  const Complex pref = std::pow(z, d.alpha1) * std::exp(d.alpha0 * z);
  const Complex dlog = d.alpha1 / z + d.alpha0;
  const Complex psi = pref * u.value;
  const Complex dpsi_dz = pref * (dlog * u.value + u.d1);

  const double dz_dt = -zr / (c.tau * (1.0 - zr));
  const Complex da2_dt = dpsi_dz * dz_dt;

  const double phase = phase_integral(c, t);
  AmplitudePair out;
  out.a2 = psi;
  out.a1 = kI * da2_dt * std::exp(-kI * phase) / c.u0;
  return out;
}

double norm_drift(const TwoStateDerived& d, const TwoStateConfig& c,
                  std::span<const double> t_grid) {
  if (t_grid.empty()) return 0.0;
  double base = -1.0, worst = 0.0;
  for (const double t : t_grid) {
    const AmplitudePair p = amplitude_pair(d, c, t);
    const double norm = std::norm(p.a1) + std::norm(p.a2);
    if (base < 0.0)
      base = norm;
    else
      worst = std::max(worst, std::abs(norm - base) / base);
  }
  return worst;
}

TwoStateGeneral ic_matched_solution(const TwoStateConfig& c, double t_ref,
                                    Complex a1_ref, Complex a2_ref) {
  TwoStateGeneral g;
  g.config_plus = c;
  g.config_plus.sign1 = +1;
  g.config_minus = c;
  g.config_minus.sign1 = -1;
  g.plus = two_state_reduction(g.config_plus);
  g.minus = two_state_reduction(g.config_minus);

  const AmplitudePair vp = amplitude_pair(g.plus, g.config_plus, t_ref);
  const AmplitudePair vm = amplitude_pair(g.minus, g.config_minus, t_ref);
  const Complex det = vp.a1 * vm.a2 - vm.a1 * vp.a2;
  const double scale = std::max({std::abs(vp.a1) * std::abs(vm.a2),
                                 std::abs(vm.a1) * std::abs(vp.a2), 1e-300});
  if (std::abs(det) <= 1e-10 * scale)
    throw std::runtime_error(
        "ic_matched_solution: fundamental pair is numerically dependent");
  g.coef_plus = (a1_ref * vm.a2 - a2_ref * vm.a1) / det;
  g.coef_minus = (a2_ref * vp.a1 - a1_ref * vp.a2) / det;
  return g;
}

AmplitudePair amplitude_pair(const TwoStateGeneral& g, double t) {
  const AmplitudePair vp = amplitude_pair(g.plus, g.config_plus, t);
  const AmplitudePair vm = amplitude_pair(g.minus, g.config_minus, t);
  return {g.coef_plus * vp.a1 + g.coef_minus * vm.a1,
          g.coef_plus * vp.a2 + g.coef_minus * vm.a2};
}

double amplitude_residual_fd(const std::function<Complex(double)>& a2,
                             const TwoStateConfig& c, double t, double h) {
  const Complex am = a2(t - h), a0 = a2(t), ap = a2(t + h);
  const Complex d2 = (ap - 2.0 * a0 + am) / (h * h);
  const Complex d1 = (ap - am) / (2.0 * h);
  const double rate = field_configuration(c, t).detuning_rate;
  const Complex res = d2 - kI * rate * d1 + c.u0 * c.u0 * a0;
  const double scale = std::max(
      {std::abs(d2), std::abs(d1) * std::abs(rate), c.u0 * c.u0 * std::abs(a0),
       1e-300});
  return std::abs(res) / scale;
}

}  // namespace heun

// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Deterministic (fixed seeds); the conjectured product identity is reported
// as a warning only and never fails the suite.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "heun/frobenius.hpp"
#include "heun/hypergeometric.hpp"
#include "heun/two_state.hpp"
#include "test_helpers.hpp"

namespace {

using heun::CheParams;
using heun::Complex;
using heun::Poly;
using namespace heun::testing;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double relation_scale(const CheParams& p, Complex q) {
  return std::max({1.0, std::abs(q), std::abs(p.alpha)});
}

std::vector<double> residual_points(const heun::GhfSolution& sol) {
  std::vector<double> pts{0.1, 0.25, 0.5, 0.7, 0.9};
  if (sol.base_point == 1.0)
    for (double& z : pts) z = 1.0 - z;
  return pts;
}

double max_ode_residual(const heun::ConstructedSolution& sol,
                        const CheParams& input) {
  CheParams check = input;
  check.q = sol.q;
  double worst = 0.0;
  for (const double zr : residual_points(sol.solution)) {
    const auto u = heun::ghf_eval(sol.solution, Complex{zr});
    worst = std::max(worst,
                     heun::ode_residual(u.value, u.d1, u.d2, check, Complex{zr}));
  }
  return worst;
}

// ---------------------------------------------------------------------------

Outcome golden_polynomials(bool reduced) {
  Outcome out;
  std::mt19937_64 rng(reduced ? 4242 : 1717);
  const auto start = std::chrono::steady_clock::now();

  for (int trial = 0; trial < 5; ++trial) {
    const CheParams p{random_unit_order(rng), Complex{0.0},
                      reduced ? Complex{0.0} : random_away_from_zero(rng),
                      random_unit_order(rng), std::nullopt};
    const Poly poly = heun::accessory_polynomial(p, 0);
    out.require(poly.degree() == 1 && poly.coeff(1) == Complex{1.0} &&
                    poly.coeff(0) == -p.alpha,
                "N=0 condition is not exactly q - alpha");
  }

  for (int n_value = 1; n_value <= 3; ++n_value) {
    for (int trial = 0; trial < 5; ++trial) {
      const CheParams p{random_unit_order(rng),
                        Complex{static_cast<double>(-n_value)},
                        reduced ? Complex{0.0} : random_away_from_zero(rng),
                        random_unit_order(rng), std::nullopt};
      const double dev = poly_ratio_deviation(
          heun::accessory_polynomial(p, n_value),
          heun::closed_form_accessory_poly(p, n_value));
      out.require(dev <= 1e-8, "N=" + std::to_string(n_value) + " ratio deviation " + sci(dev));
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.require(seconds < 1.0, "runtime " + sci(seconds) + " s");
  out.detail = out.pass ? "" : out.detail;
  return out;
}

Outcome degree_claim() {
  Outcome out;
  std::mt19937_64 rng(2323);

  for (int n_value = 0; n_value <= 6; ++n_value) {
    for (int trial = 0; trial < 10; ++trial) {
      const CheParams p{random_unit_order(rng),
                        Complex{static_cast<double>(-n_value)},
                        random_unit_order(rng), random_unit_order(rng),
                        std::nullopt};
      const int deg = heun::accessory_polynomial(p, n_value).degree();
      out.require(deg == n_value + 1,
                  "N=" + std::to_string(n_value) + " degree " +
                      std::to_string(deg));
    }
  }

  // Leading structure of the compatibility polynomial for general delta.
  for (int n_value = 1; n_value <= 6; ++n_value) {
    for (int trial = 0; trial < 5; ++trial) {
      const CheParams p{random_unit_order(rng), random_non_integer(rng),
                        random_unit_order(rng), random_unit_order(rng),
                        std::nullopt};
      heun::SigmaVector sigma;
      for (int i = 0; i < n_value; ++i)
        sigma.sigma.push_back(random_unit_order(rng));
      const Complex q = random_unit_order(rng);

      std::vector<Complex> nodes, values;
      double scale = 1.0;
      for (int j = 0; j <= n_value + 2; ++j) {
        nodes.emplace_back(static_cast<double>(j), 0.0);
        values.push_back(heun::compatibility_poly_value(p, q, sigma, nodes.back()));
        scale = std::max(scale, std::abs(values.back()));
      }
      const Poly fit = heun::interpolate_poly(nodes, values);
      const Complex want = static_cast<double>(n_value) + p.delta;
      out.require(std::abs(fit.coeff(n_value + 2)) <= 1e-9 * scale,
                  "top coefficient does not vanish");
      out.require(std::abs(fit.coeff(n_value + 1) - want) <=
                      1e-9 * std::max(scale, std::abs(want)),
                  "next coefficient is not N + delta");
    }
  }
  return out;
}

struct SweepData {
  std::vector<CheParams> inputs;
  std::vector<heun::ConstructionResult> results;
};

SweepData canonical_sweep(int max_n, std::mt19937_64& rng) {
  SweepData data;
  for (int n_value = 0; n_value <= max_n; ++n_value) {
    for (const bool reduced : {false, true}) {
      for (int trial = 0; trial < 2; ++trial) {
        const CheParams p{random_non_integer(rng),
                          Complex{static_cast<double>(-n_value)},
                          reduced ? Complex{0.0} : random_away_from_zero(rng),
                          random_away_from_zero(rng), std::nullopt};
        data.inputs.push_back(p);
        data.results.push_back(heun::construct_solutions(p));
      }
    }
  }
  return data;
}

Outcome oracle_equivalence(const SweepData& sweep) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();

  int checked = 0;
  for (size_t i = 0; i < sweep.results.size(); ++i) {
    for (const auto& sol : sweep.results[i].solutions) {
      if (!sol.flags.valid) continue;
      ++checked;
      const auto ghf = heun::ghf_coefficients(
          heun::canonical_ghf(sol.canonical, sol.e_params), 50);
      const auto frob = heun::frobenius_coefficients(sol.canonical, 50);
      double worst = 0.0;
      for (size_t n = 0; n < ghf.coeffs.size(); ++n) {
        const double scale = std::max(
            {std::abs(ghf.coeffs[n]), std::abs(frob.coeffs.coeffs[n]), 1.0});
        worst = std::max(
            worst, std::abs(ghf.coeffs[n] - frob.coeffs.coeffs[n]) / scale);
      }
      out.require(worst <= 1e-10,
                  "coefficient deviation " + sci(worst));
      const double resid = max_ode_residual(sol, sweep.inputs[i]);
      out.require(resid <= 1e-8, "ode residual " + sci(resid));
    }
  }
  out.require(checked > 0, "no valid roots in the sweep");

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.require(seconds < 10.0, "runtime " + sci(seconds) + " s");
  if (out.pass)
    out.detail = std::to_string(checked) + " roots";
  return out;
}

Outcome consistency_identities(const SweepData& sweep, bool& conjecture_ok,
                               std::string& conjecture_detail) {
  Outcome out;
  conjecture_ok = true;

  for (size_t i = 0; i < sweep.results.size(); ++i) {
    for (const auto& sol : sweep.results[i].solutions) {
      if (!sol.flags.valid) continue;
      const double scale = relation_scale(sweep.inputs[i], sol.q);
      if (sol.relations.product)
        out.require(*sol.relations.product <= 1e-9 * scale,
                    "product relation " + sci(*sol.relations.product));
      if (sol.relations.sum)
        out.require(*sol.relations.sum <= 1e-9 * scale,
                    "sum relation " + sci(*sol.relations.sum));
      if (sol.relations.middle && !sol.flags.scale_coincidence &&
          *sol.relations.middle > 1e-7) {
        conjecture_ok = false;
        conjecture_detail = "residual " + sci(*sol.relations.middle);
      }
    }
  }

  // The conjectured identity is also probed one order beyond the sweep.
  std::mt19937_64 rng(3131);
  for (int trial = 0; trial < 2; ++trial) {
    const CheParams p{random_non_integer(rng), Complex{-7.0},
                      random_away_from_zero(rng), random_away_from_zero(rng),
                      std::nullopt};
    for (const auto& sol : heun::construct_solutions(p).solutions) {
      if (!sol.flags.valid || !sol.relations.middle) continue;
      if (!sol.flags.scale_coincidence && *sol.relations.middle > 1e-7) {
        conjecture_ok = false;
        conjecture_detail =
            "N=7 residual " + sci(*sol.relations.middle);
      }
    }
  }
  return out;
}

Outcome transformations() {
  Outcome out;
  std::mt19937_64 rng(5151);

  for (const double delta : {2.0, 3.0, 4.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const CheParams p{random_non_integer(rng), Complex{delta},
                        random_away_from_zero(rng), random_unit_order(rng),
                        std::nullopt};
      int valid = 0;
      for (const auto& sol : heun::construct_solutions(p).solutions) {
        if (!sol.flags.valid) continue;
        ++valid;
        const double resid = max_ode_residual(sol, p);
        out.require(resid <= 1e-8, "delta=" + std::to_string(delta) +
                                       " residual " + sci(resid));
      }
      out.require(valid > 0, "no valid roots for positive delta");
    }
  }

  for (const double gamma : {-2.0, -1.0, 0.0, 2.0, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const CheParams p{Complex{gamma}, random_non_integer(rng),
                        random_away_from_zero(rng), random_unit_order(rng),
                        std::nullopt};
      int valid = 0;
      for (const auto& sol : heun::construct_solutions(p).solutions) {
        if (!sol.flags.valid) continue;
        ++valid;
        const double resid = max_ode_residual(sol, p);
        out.require(resid <= 1e-8, "gamma=" + std::to_string(gamma) +
                                       " residual " + sci(resid));
      }
      out.require(valid > 0, "no valid roots for integer gamma");
    }
  }
  return out;
}

Outcome bessel_identity() {
  Outcome out;
  for (const double gamma : {1.5, 2.5}) {
    for (const double alpha : {1.0, 2.0}) {
      for (const double z : {0.1, 0.3, 1.0}) {
        const heun::GhfSolution sol{{}, {Complex{gamma}}, {-alpha}, 0.0, {0.0}};
        const Complex lhs = heun::ghf_eval(sol, Complex{z}).value;
        const double x = alpha * z;
        const double rhs = std::tgamma(gamma) *
                           std::pow(x, 0.5 * (1.0 - gamma)) *
                           bessel_j_series(gamma - 1.0, 2.0 * std::sqrt(x));
        out.require(std::abs(lhs - rhs) <= 1e-10,
                    "deviation " + sci(std::abs(lhs - rhs)));
      }
    }
  }
  return out;
}

Outcome two_state_demo() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  constexpr Complex kI{0.0, 1.0};

  for (const int s1 : {+1, -1}) {
    for (const int s0 : {+1, -1}) {
      const heun::TwoStateConfig c{1.0, 2.0, 1.0, 1.0, s1, s0};
      const heun::TwoStateDerived d = heun::two_state_reduction(c);
      out.require(d.accessory_residual <= 1e-9,
                  "accessory condition residual " +
                      sci(d.accessory_residual));

      const auto a2 = [&](double t) { return heun::amplitude_pair(d, c, t).a2; };
      for (int i = 0; i < 20; ++i) {
        const double t = -2.0 + 4.4 * i / 19.0;
        const double r = heun::amplitude_residual_fd(a2, c, t, 1e-4);
        out.require(r < 1e-6, "fd residual " + sci(r));
      }

      std::vector<double> grid;
      for (int i = 0; i < 200; ++i) grid.push_back(-10.0 + 20.0 * i / 199.0);
      const double drift = heun::norm_drift(d, c, grid);
      out.require(drift < 1e-6, "norm drift " + sci(drift));

      // Independent adaptive integration from matched data at -10 tau.
      const double w1 = heun::lambert_w(1.0);
      const auto phase = [&](double t) {
        const double w = heun::lambert_w_exp(-t / c.tau);
        return c.delta0 * t +
               c.tau * (c.delta0 + c.delta1) * (std::log(w) - std::log(w1));
      };
      const Rhs rhs = [&](double t, const State& y) {
        const double ph = phase(t);
        return State{-kI * c.u0 * std::exp(-kI * ph) * y[1],
                     -kI * c.u0 * std::exp(kI * ph) * y[0]};
      };
      const auto start_pair = heun::amplitude_pair(d, c, -10.0);
      State y{start_pair.a1, start_pair.a2};
      double t_prev = -10.0, worst = 0.0;
      for (const double t : {-6.0, -2.0, 0.0, 1.0, 4.0, 10.0}) {
        y = dopri5(rhs, y, t_prev, t, 1e-11, 1e-13);
        t_prev = t;
        const auto expect = heun::amplitude_pair(d, c, t);
        worst = std::max({worst, std::abs(y[0] - expect.a1),
                          std::abs(y[1] - expect.a2)});
      }
      out.require(worst < 1e-5,
                  "integration deviation " + sci(worst));
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.require(seconds < 5.0, "runtime " + sci(seconds) + " s");
  return out;
}

Outcome negative_controls(const std::string& cli_path) {
  Outcome out;

  // A valid solution checked against a perturbed accessory value must light
  // up the residual.
  const CheParams p{{1.7, 0.3}, {0.0}, {0.9, -0.2}, {1.1, 0.4}, std::nullopt};
  const auto result = heun::construct_solutions(p);
  const auto& sol = result.solutions.front();
  CheParams perturbed = p;
  perturbed.q = sol.q + Complex{1e-2};
  const auto u = heun::ghf_eval(sol.solution, Complex{0.5});
  const double resid =
      heun::ode_residual(u.value, u.d1, u.d2, perturbed, Complex{0.5});
  out.require(resid > 1e-4,
              "off-spectrum residual only " + sci(resid));

  // The exceptional exponent pair must map to the dedicated exit code.
  if (!cli_path.empty()) {
    const std::string cmd =
        cli_path +
        " spectrum --gamma 0.5 --delta 1 --epsilon 1 --alpha 1 "
        ">/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out.require(code == 3, "exceptional exit code " + std::to_string(code));
  } else {
    const auto cls = heun::classify({{0.5}, {1.0}, {1.0}, {1.0}, std::nullopt});
    out.require(cls.kind == heun::CaseKind::Exceptional,
                "exceptional case not classified (library-level check)");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];

  struct Line {
    int id;
    std::string name;
    Outcome outcome;
  };
  std::vector<Line> lines;

  auto run = [&](int id, const std::string& name,
                 const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    lines.push_back({id, name, std::move(o)});
  };

  run(1, "golden accessory conditions, confluent shape",
      [] { return golden_polynomials(false); });
  run(2, "golden accessory conditions, reduced shape",
      [] { return golden_polynomials(true); });
  run(3, "accessory degree N+1 and compatibility leading structure",
      degree_claim);

  std::mt19937_64 sweep_rng(6161);
  SweepData sweep;
  bool conjecture_ok = true;
  std::string conjecture_detail;
  try {
    sweep = canonical_sweep(6, sweep_rng);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sweep construction failed: %s\n", e.what());
    return 1;
  }
  run(4, "coefficient-oracle equivalence and direct residuals",
      [&] { return oracle_equivalence(sweep); });
  run(5, "closed consistency relations",
      [&] { return consistency_identities(sweep, conjecture_ok,
                                          conjecture_detail); });
  run(6, "positive-delta and integer-gamma transformations", transformations);
  run(7, "Bessel-function identity", bessel_identity);
  run(8, "two-state dynamics, all sign choices", two_state_demo);
  run(9, "negative controls", [&] { return negative_controls(cli_path); });

  bool all_pass = true;
  for (const auto& line : lines) {
    all_pass = all_pass && line.outcome.pass;
    std::printf("[%s] criterion %d: %s%s%s\n",
                line.outcome.pass ? "PASS" : "FAIL", line.id,
                line.name.c_str(), line.outcome.detail.empty() ? "" : " — ",
                line.outcome.detail.c_str());
    if (line.id == 5) {
      // Conjectured product identity: reported, never a suite failure.
      std::printf("[%s] criterion 5 (conjecture report): product identity "
                  "for auxiliary parameters%s%s\n",
                  conjecture_ok ? "PASS" : "WARN",
                  conjecture_detail.empty() ? "" : " — ",
                  conjecture_detail.c_str());
    }
  }
  return all_pass ? 0 : 1;
}

#include "heun/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heun/hypergeometric.hpp"
#include "test_helpers.hpp"

using heun::accessory_polynomial;
using heun::accessory_spectrum;
using heun::CheParams;
using heun::closed_form_accessory_poly;
using heun::compatibility_poly_value;
using heun::Complex;
using heun::consistency_relations;
using heun::interpolate_poly;
using heun::Poly;
using heun::SigmaVector;
using heun::sigma_linear_system;
using heun::solve_auxiliary_parameters;
using heun::testing::poly_ratio_deviation;
using heun::testing::random_away_from_zero;
using heun::testing::random_non_integer;
using heun::testing::random_unit_order;

namespace {

// The N = 1 instance worked through by hand: alpha = 1, gamma = 3,
// epsilon = 1, delta = -1 has accessory condition q^2 - 5q + 5 = 0 with
// roots (5 +/- sqrt 5)/2 and e_1 = alpha/(q - alpha).
const CheParams kWorked{{3.0}, {-1.0}, {1.0}, {1.0}, std::nullopt};
const double kQPlus = (5.0 + std::sqrt(5.0)) / 2.0;
const double kQMinus = (5.0 - std::sqrt(5.0)) / 2.0;

TEST(CompatibilityValue, EmptyCaseReducesToAlphaMinusQ) {
  const CheParams p{{1.3}, {0.0}, {0.8}, {0.6}, std::nullopt};
  const SigmaVector empty{};
  const Complex at_alpha =
      compatibility_poly_value(p, p.alpha, empty, Complex{1.0});
  EXPECT_EQ(at_alpha, Complex{0.0});
  const Complex off = compatibility_poly_value(p, {2.1}, empty, Complex{1.0});
  EXPECT_LE(std::abs(off - (p.alpha - 2.1)), 1e-15);
}

TEST(CompatibilityValue, WorkedInstanceVanishesAtNodeOne) {
  const Complex q{kQPlus};
  const Complex e1 = Complex{1.0} / (q - 1.0);
  const SigmaVector sigma{{e1}};
  const Complex value = compatibility_poly_value(kWorked, q, sigma, {1.0});
  EXPECT_LE(std::abs(value), 1e-12);
}

TEST(SigmaSystem, RejectsEmptySystem) {
  EXPECT_THROW(sigma_linear_system(kWorked, {1.0}, 0), std::invalid_argument);
}

// Fitting values at N+3 integer nodes to a degree-(N+2) polynomial must show
// a vanishing top coefficient and N + delta in the next one, for any delta.
TEST(CompatibilityValue, DegreeStructure) {
  std::mt19937_64 rng(211);
  for (int n_value = 1; n_value <= 6; ++n_value) {
    for (int trial = 0; trial < 4; ++trial) {
      CheParams p{random_unit_order(rng), random_non_integer(rng),
                  random_unit_order(rng), random_unit_order(rng),
                  std::nullopt};
      SigmaVector sigma;
      for (int i = 0; i < n_value; ++i)
        sigma.sigma.push_back(random_unit_order(rng));
      const Complex q = random_unit_order(rng);

      std::vector<Complex> nodes, values;
      double value_scale = 1.0;
      for (int j = 0; j <= n_value + 2; ++j) {
        nodes.emplace_back(static_cast<double>(j), 0.0);
        values.push_back(compatibility_poly_value(p, q, sigma, nodes.back()));
        value_scale = std::max(value_scale, std::abs(values.back()));
      }
      const Poly fit = interpolate_poly(nodes, values);
      EXPECT_LE(std::abs(fit.coeff(n_value + 2)), 1e-9 * value_scale);
      const Complex expected = static_cast<double>(n_value) + p.delta;
      EXPECT_LE(std::abs(fit.coeff(n_value + 1) - expected),
                1e-9 * std::max(value_scale, std::abs(expected)));
    }
  }
}

TEST(CompatibilityValue, TopTwoCoefficientsVanishAtCanonicalDelta) {
  std::mt19937_64 rng(223);
  for (int n_value = 1; n_value <= 5; ++n_value) {
    CheParams p{random_unit_order(rng),
                Complex{static_cast<double>(-n_value)},
                random_unit_order(rng), random_unit_order(rng), std::nullopt};
    SigmaVector sigma;
    for (int i = 0; i < n_value; ++i)
      sigma.sigma.push_back(random_unit_order(rng));
    const Complex q = random_unit_order(rng);

    std::vector<Complex> nodes, values;
    double value_scale = 1.0;
    for (int j = 0; j <= n_value + 2; ++j) {
      nodes.emplace_back(static_cast<double>(j), 0.0);
      values.push_back(compatibility_poly_value(p, q, sigma, nodes.back()));
      value_scale = std::max(value_scale, std::abs(values.back()));
    }
    const Poly fit = interpolate_poly(nodes, values);
    EXPECT_LE(std::abs(fit.coeff(n_value + 2)), 1e-9 * value_scale);
    EXPECT_LE(std::abs(fit.coeff(n_value + 1)), 1e-9 * value_scale);
  }
}

TEST(SigmaSystem, WorkedInstanceRowsAreConsistent) {
  const Complex q{kQPlus};
  const auto sys = sigma_linear_system(kWorked, q, 1);
  ASSERT_EQ(sys.matrix.size(), 2u);
  // Solve each 1x1 row independently; both must give e_1 = alpha/(q - alpha).
  const Complex from_node0 = sys.rhs[0] / sys.matrix[0][0];
  const Complex from_node1 = sys.rhs[1] / sys.matrix[1][0];
  EXPECT_LE(std::abs(from_node0 - from_node1), 1e-12);
  EXPECT_LE(std::abs(from_node1 - 0.3819660112501051), 1e-10);
}

TEST(SigmaSystem, FiniteEntriesForRandomParameters) {
  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 5; ++trial) {
    const CheParams p{random_unit_order(rng), {-2.0}, random_unit_order(rng),
                      random_unit_order(rng), std::nullopt};
    const auto sys = sigma_linear_system(p, random_unit_order(rng), 2);
    for (const auto& row : sys.matrix)
      for (const auto& entry : row)
        EXPECT_TRUE(std::isfinite(entry.real()) && std::isfinite(entry.imag()));
    for (const auto& r : sys.rhs)
      EXPECT_TRUE(std::isfinite(r.real()) && std::isfinite(r.imag()));
  }
}

TEST(AccessoryPolynomial, KummerConditionAtNZero) {
  std::mt19937_64 rng(229);
  for (int trial = 0; trial < 5; ++trial) {
    const CheParams p{random_unit_order(rng), {0.0}, random_unit_order(rng),
                      random_unit_order(rng), std::nullopt};
    const Poly poly = accessory_polynomial(p, 0);
    ASSERT_EQ(poly.degree(), 1);
    EXPECT_EQ(poly.coeff(1), Complex{1.0});
    EXPECT_EQ(poly.coeff(0), -p.alpha);
  }
}

TEST(AccessoryPolynomial, WorkedInstanceIsGoldenQuadratic) {
  const Poly poly = accessory_polynomial(kWorked, 1);
  ASSERT_EQ(poly.degree(), 2);
  EXPECT_LE(std::abs(poly.coeff(0) - 5.0), 1e-12);
  EXPECT_LE(std::abs(poly.coeff(1) + 5.0), 1e-12);
  EXPECT_EQ(poly.coeff(2), Complex{1.0});
}

TEST(AccessoryPolynomial, MatchesClosedFormsUpToConstant) {
  std::mt19937_64 rng(233);
  for (int n_value = 1; n_value <= 3; ++n_value) {
    for (int trial = 0; trial < 5; ++trial) {
      const CheParams p{random_unit_order(rng),
                        Complex{static_cast<double>(-n_value)},
                        random_away_from_zero(rng), random_unit_order(rng),
                        std::nullopt};
      const Poly computed = accessory_polynomial(p, n_value);
      const Poly golden = closed_form_accessory_poly(p, n_value);
      EXPECT_LE(poly_ratio_deviation(computed, golden), 1e-8)
          << "N = " << n_value << " trial " << trial;
    }
  }
}

TEST(AccessoryPolynomial, MatchesClosedFormsAtEpsilonZero) {
  std::mt19937_64 rng(239);
  for (int n_value = 1; n_value <= 3; ++n_value) {
    for (int trial = 0; trial < 5; ++trial) {
      const CheParams p{random_unit_order(rng),
                        Complex{static_cast<double>(-n_value)},
                        {0.0},
                        random_away_from_zero(rng),
                        std::nullopt};
      const Poly computed = accessory_polynomial(p, n_value);
      const Poly golden = closed_form_accessory_poly(p, n_value);
      EXPECT_LE(poly_ratio_deviation(computed, golden), 1e-8);
    }
  }
}

TEST(AccessoryPolynomial, DegreeIsAlwaysNPlusOne) {
  std::mt19937_64 rng(241);
  for (int n_value = 0; n_value <= 6; ++n_value) {
    for (int trial = 0; trial < 10; ++trial) {
      const CheParams p{random_unit_order(rng),
                        Complex{static_cast<double>(-n_value)},
                        random_unit_order(rng), random_unit_order(rng),
                        std::nullopt};
      EXPECT_EQ(accessory_polynomial(p, n_value).degree(), n_value + 1);
    }
  }
}

TEST(SolveAuxiliary, WorkedInstanceBothRoots) {
  const auto plus = solve_auxiliary_parameters(kWorked, 1, {kQPlus});
  ASSERT_EQ(plus.e.size(), 1u);
  EXPECT_LE(std::abs(plus.e[0] - 0.3819660112501051), 1e-10);
  EXPECT_TRUE(plus.flags.valid);

  const auto minus = solve_auxiliary_parameters(kWorked, 1, {kQMinus});
  ASSERT_EQ(minus.e.size(), 1u);
  EXPECT_LE(std::abs(minus.e[0] - 2.618033988749895), 1e-10);
  EXPECT_TRUE(minus.flags.valid);
}

TEST(SolveAuxiliary, EmptyCaseValidOnlyAtAlpha) {
  const CheParams p{{1.3}, {0.0}, {0.8}, {0.6}, std::nullopt};
  const auto at_alpha = solve_auxiliary_parameters(p, 0, p.alpha);
  EXPECT_TRUE(at_alpha.flags.valid);
  EXPECT_TRUE(at_alpha.e.empty());
  const auto off = solve_auxiliary_parameters(p, 0, p.alpha + 0.1);
  EXPECT_FALSE(off.flags.valid);
}

TEST(SolveAuxiliary, DenominatorHazardFlagged) {
  // alpha = 0 with gamma + epsilon = 1 puts e_1 exactly at 0.
  const CheParams p{{0.6}, {-1.0}, {0.4}, {0.0}, std::nullopt};
  const auto aux = solve_auxiliary_parameters(p, 1, {0.0});
  EXPECT_TRUE(aux.flags.denominator_hazard);
  EXPECT_FALSE(aux.flags.valid);
}

TEST(ConsistencyRelations, WorkedInstance) {
  const Complex q{kQPlus};
  const Complex e1 = Complex{1.0} / (q - 1.0);
  const std::vector<Complex> e{e1};
  const auto rel = consistency_relations(kWorked, q, e);
  ASSERT_TRUE(rel.product.has_value());
  ASSERT_TRUE(rel.middle.has_value());
  ASSERT_TRUE(rel.sum.has_value());
  EXPECT_LE(*rel.product, 1e-12);
  EXPECT_LE(*rel.middle, 1e-12);  // e1 (e1 - 2)/(e1 - 1) = 1 in golden-ratio arithmetic
  EXPECT_LE(*rel.sum, 1e-12);    // q = 4 - e1
}

TEST(ConsistencyRelations, EmptyCaseReducesToQEqualsAlpha) {
  const CheParams p{{1.3}, {0.0}, {0.8}, {0.6}, std::nullopt};
  const auto rel = consistency_relations(p, p.alpha, {});
  EXPECT_EQ(*rel.product, 0.0);
  EXPECT_EQ(*rel.middle, 0.0);
  EXPECT_EQ(*rel.sum, 0.0);
  const auto off = consistency_relations(p, p.alpha + 1.0, {});
  EXPECT_EQ(*off.product, 1.0);
  EXPECT_EQ(*off.sum, 1.0);
}

TEST(ConsistencyRelations, HazardMarksNotEvaluable) {
  const CheParams p{{0.6}, {-1.0}, {0.4}, {0.0}, std::nullopt};
  const std::vector<Complex> e{Complex{0.0}};
  const auto rel = consistency_relations(p, {0.0}, e);
  EXPECT_FALSE(rel.product.has_value());
  EXPECT_FALSE(rel.middle.has_value());
  EXPECT_TRUE(rel.sum.has_value());
}

TEST(Spectrum, WorkedInstanceEndToEnd) {
  const auto spec = accessory_spectrum(kWorked);
  EXPECT_EQ(spec.n_value, 1);
  ASSERT_EQ(spec.roots.size(), 2u);
  EXPECT_LE(std::abs(spec.roots[0].q - kQMinus), 1e-10);
  EXPECT_LE(std::abs(spec.roots[1].q - kQPlus), 1e-10);
  for (const auto& root : spec.roots) {
    EXPECT_TRUE(root.aux.flags.valid);
    EXPECT_LE(root.aux.flags.max_node_residual, 1e-9);
    EXPECT_LE(*root.relations.product, 1e-9);
    EXPECT_LE(*root.relations.sum, 1e-9);
  }
}

TEST(Spectrum, PermutingAuxiliaryParametersLeavesCoefficientsUnchanged) {
  std::mt19937_64 rng(251);
  const CheParams p{random_unit_order(rng), {-2.0},
                    random_away_from_zero(rng), random_unit_order(rng),
                    std::nullopt};
  const auto spec = accessory_spectrum(p);
  ASSERT_FALSE(spec.roots.empty());
  const auto& root = spec.roots.front();
  std::vector<Complex> swapped{root.aux.e[1], root.aux.e[0]};

  CheParams with_q = p;
  with_q.q = root.q;
  const auto a = heun::ghf_coefficients(heun::canonical_ghf(with_q, root.aux.e), 30);
  const auto b = heun::ghf_coefficients(heun::canonical_ghf(with_q, swapped), 30);
  for (int n = 0; n <= 30; ++n)
    EXPECT_LE(std::abs(a.coeffs[static_cast<size_t>(n)] -
                       b.coeffs[static_cast<size_t>(n)]),
              1e-12 * std::max(1.0, std::abs(a.coeffs[static_cast<size_t>(n)])));
}

TEST(ClosedForms, RejectLargeN) {
  EXPECT_THROW(closed_form_accessory_poly(kWorked, 4), std::invalid_argument);
}

}  // namespace

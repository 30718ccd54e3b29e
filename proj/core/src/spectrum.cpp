#include "heun/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heun {

namespace {

// x^k with 0^0 = 1.
Complex ipow(Complex x, int k) {
  Complex r{1.0};
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

struct NodeTerms {
  Complex a;  // alpha + epsilon (n-1)
  Complex q;  // -q + (n-1)(n-2 + gamma + delta - epsilon)
  Complex b;  // -(n-1)(gamma - 2 + n)
};

NodeTerms node_terms(const CheParams& p, Complex q, Complex n) {
  NodeTerms t;
  t.a = p.alpha + p.epsilon * (n - 1.0);
  t.q = -q + (n - 1.0) * (n - 2.0 + p.gamma + p.delta - p.epsilon);
  t.b = -(n - 1.0) * (p.gamma - 2.0 + n);
  return t;
}

// L_j(n) = sum_{m=0}^{N} sigma_{N-m} (n-j)^m, sigma_0 = 1.
Complex sym_product(const SigmaVector& s, Complex n, int j) {
  const int N = s.n();
  const Complex x = n - static_cast<double>(j);
  Complex acc{0.0}, xp{1.0};
  for (int m = 0; m <= N; ++m) {
    const Complex sig = (m == N) ? Complex{1.0} : s.sigma[static_cast<size_t>(N - m - 1)];
    acc += sig * xp;
    xp *= x;
  }
  return acc;
}

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

constexpr double kHazardWindow = 1e-7;
constexpr double kSigmaResidualTol = 1e-8;
constexpr double kNodeResidualTol = 1e-9;

bool non_positive_integer_within(Complex x, double tol) {
  if (std::abs(x.imag()) > tol) return false;
  const double r = std::round(x.real());
  return r <= 0.0 && std::abs(x.real() - r) <= tol;
}

}  // namespace

Complex compatibility_poly_value(const CheParams& p, Complex q,
                                 const SigmaVector& sigma, Complex n) {
  return compatibility_poly_value_scaled(p, q, sigma, n).first;
}

std::pair<Complex, double> compatibility_poly_value_scaled(
    const CheParams& p, Complex q, const SigmaVector& sigma, Complex n) {
  const NodeTerms t = node_terms(p, q, n);
  const Complex l0 = sym_product(sigma, n, 0);
  const Complex l1 = sym_product(sigma, n, 1);
  const Complex l2 = sym_product(sigma, n, 2);
  const Complex value = t.a * l0 + t.q * l1 + t.b * l2;
  const double scale = std::abs(t.a * l0) + std::abs(t.q * l1) +
                       std::abs(t.b * l2) + 1.0;
  return {value, scale};
}

SigmaLinearSystem sigma_linear_system(const CheParams& p, Complex q,
                                      int n_value) {
  if (n_value < 1)
    throw std::invalid_argument("sigma_linear_system: requires N >= 1");
  const int N = n_value;
  SigmaLinearSystem sys;
  sys.matrix.assign(static_cast<size_t>(N) + 1,
                    std::vector<Complex>(static_cast<size_t>(N)));
  sys.rhs.assign(static_cast<size_t>(N) + 1, Complex{0.0});

  for (int j = 0; j <= N; ++j) {
    const Complex n{static_cast<double>(j), 0.0};
    const NodeTerms t = node_terms(p, q, n);
    // Coefficient of sigma_i is the x^(N-i) part of each product factor.
    for (int i = 1; i <= N; ++i) {
      sys.matrix[static_cast<size_t>(j)][static_cast<size_t>(i - 1)] =
          t.a * ipow(n, N - i) + t.q * ipow(n - 1.0, N - i) +
          t.b * ipow(n - 2.0, N - i);
    }
    sys.rhs[static_cast<size_t>(j)] =
        -(t.a * ipow(n, N) + t.q * ipow(n - 1.0, N) + t.b * ipow(n - 2.0, N));
  }
  return sys;
}

namespace {

Eigen::MatrixXcd to_eigen(const SigmaLinearSystem& sys) {
  const auto rows = static_cast<Eigen::Index>(sys.matrix.size());
  const auto cols = static_cast<Eigen::Index>(sys.matrix.front().size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = sys.matrix[static_cast<size_t>(r)][static_cast<size_t>(c)];
  return m;
}

}  // namespace

Poly accessory_polynomial(const CheParams& p, int n_value) {
  if (n_value < 0)
    throw std::invalid_argument("accessory_polynomial: N must be >= 0");
  if (n_value == 0) return Poly({-p.alpha, Complex{1.0}});

  const int N = n_value;
  // The augmented matrix [M | rhs] is square; its determinant is a
  // polynomial in q (every entry is affine in q) vanishing exactly when the
  // overdetermined sigma system is consistent. Reconstruct it from N+2
  // evaluations on a circle; that keeps the interpolation well conditioned.
  const double radius =
      std::max({1.0, std::abs(p.alpha), std::abs(p.gamma), std::abs(p.epsilon)});
  const int n_nodes = N + 2;
  std::vector<Complex> nodes(static_cast<size_t>(n_nodes));
  std::vector<Complex> values(static_cast<size_t>(n_nodes));
  for (int l = 0; l < n_nodes; ++l) {
    const double th = 2.0 * std::numbers::pi * l / n_nodes;
    nodes[static_cast<size_t>(l)] = radius * Complex{std::cos(th), std::sin(th)};
    const SigmaLinearSystem sys =
        sigma_linear_system(p, nodes[static_cast<size_t>(l)], N);
    Eigen::MatrixXcd aug(N + 1, N + 1);
    aug.leftCols(N) = to_eigen(sys);
    for (int r = 0; r <= N; ++r) aug(r, N) = sys.rhs[static_cast<size_t>(r)];
    values[static_cast<size_t>(l)] = Eigen::PartialPivLU<Eigen::MatrixXcd>(aug)
                                         .determinant();
  }

  // The true leading coefficient can sit many orders below the largest one
  // (observed ~5e-8 relative at N = 7); the prune cut only has to clear the
  // interpolation noise floor of ~1e-16 relative.
  const Poly fit = interpolate_poly(nodes, values).pruned(1e-12);
  if (fit.degree() != N + 1)
    throw AccessoryDegreeError(
        "accessory_polynomial: reconstructed degree " +
        std::to_string(fit.degree()) + ", expected " + std::to_string(N + 1));
  return fit.monic();
}

AuxiliarySolve solve_auxiliary_parameters(const CheParams& p, int n_value,
                                          Complex q_root) {
  AuxiliarySolve out;
  if (n_value == 0) {
    // No auxiliary parameters; valid iff the single condition q = alpha holds.
    const double res = std::abs(q_root - p.alpha) /
                       std::max({1.0, std::abs(q_root), std::abs(p.alpha)});
    out.flags.max_node_residual = res;
    out.flags.valid = res <= 1e-8;
    return out;
  }

  const int N = n_value;
  const SigmaLinearSystem sys = sigma_linear_system(p, q_root, N);
  const Eigen::MatrixXcd m = to_eigen(sys);
  Eigen::VectorXcd rhs(N + 1);
  for (int r = 0; r <= N; ++r) rhs(r) = sys.rhs[static_cast<size_t>(r)];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  if (qr.rank() < N) {
    out.flags.degenerate_system = true;
    out.flags.valid = false;
    return out;
  }
  const Eigen::VectorXcd sigma = qr.solve(rhs);
  out.sigma.sigma.assign(sigma.data(), sigma.data() + N);

  const double residual = (m * sigma - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max({1.0, rhs.cwiseAbs().maxCoeff(),
                                 (m.cwiseAbs() * sigma.cwiseAbs()).maxCoeff()});
  out.flags.sigma_residual = residual / scale;

  // e_k are the roots of prod (t - e_k) = t^N - sigma_1 t^(N-1) + - ...
  std::vector<Complex> coeffs(static_cast<size_t>(N) + 1);
  coeffs[static_cast<size_t>(N)] = Complex{1.0};
  for (int mth = 0; mth < N; ++mth) {
    const int k = N - mth;  // coefficient of t^mth carries sigma_k
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeffs[static_cast<size_t>(mth)] =
        sign * out.sigma.sigma[static_cast<size_t>(k - 1)];
  }
  out.e = roots_of_poly(Poly(std::move(coeffs)));
  std::sort(out.e.begin(), out.e.end(), lex_less);

  double worst_node = 0.0;
  for (int j = 0; j <= N; ++j) {
    const auto [val, sc] = compatibility_poly_value_scaled(
        p, q_root, out.sigma, Complex{static_cast<double>(j), 0.0});
    worst_node = std::max(worst_node, std::abs(val) / sc);
  }
  out.flags.max_node_residual = worst_node;

  const double alpha_scale = std::max(1.0, std::abs(p.alpha));
  for (const Complex& e : out.e) {
    if (non_positive_integer_within(e, kHazardWindow))
      out.flags.denominator_hazard = true;
    if (std::abs(p.epsilon * e - p.alpha) <= kHazardWindow * alpha_scale)
      out.flags.scale_coincidence = true;
  }

  out.flags.valid = !out.flags.denominator_hazard &&
                    !out.flags.degenerate_system &&
                    out.flags.sigma_residual <= kSigmaResidualTol &&
                    out.flags.max_node_residual <= kNodeResidualTol;
  return out;
}

ConsistencyResiduals consistency_relations(const CheParams& p, Complex q,
                                           std::span<const Complex> e) {
  ConsistencyResiduals out;
  const int N = static_cast<int>(e.size());

  const double zero_window = 1e-14;
  bool product_ok = true, middle_ok = true;
  Complex prod1{1.0}, prod2{1.0}, sum3{0.0};
  for (int k = 0; k < N; ++k) {
    const Complex ek = e[static_cast<size_t>(k)];
    if (std::abs(ek) <= zero_window) {
      product_ok = false;
      middle_ok = false;
    } else {
      prod1 *= (1.0 + ek) / ek;
    }
    const Complex den = p.epsilon * ek - p.alpha;
    if (std::abs(den) <= zero_window * std::max(1.0, std::abs(p.alpha)))
      middle_ok = false;
    if (middle_ok) prod2 *= ek * (1.0 - p.gamma + ek) / den;
    sum3 += ek + static_cast<double>(k + 1) - p.gamma - p.epsilon;
  }

  if (product_ok) out.product = std::abs(q - p.alpha * prod1);
  if (middle_ok) out.middle = std::abs(prod2 - 1.0);
  out.sum = std::abs(q - (p.alpha - sum3));
  return out;
}

AccessorySpectrum accessory_spectrum(const CheParams& p) {
  const CaseClass cls = classify(p);
  int N = -1;
  switch (cls.kind) {
    case CaseKind::Kummer:
    case CaseKind::Bessel:
      N = 0;
      break;
    case CaseKind::GhfDelta:
    case CaseKind::GhfDeltaEps0:
      N = cls.n_value;
      break;
    default:
      throw std::invalid_argument(
          "accessory_spectrum: parameters are not in canonical delta = -N "
          "form (case " + std::string(to_string(cls.kind)) + ")");
  }

  AccessorySpectrum out;
  out.n_value = N;
  out.q_poly = accessory_polynomial(p, N);

  std::vector<Complex> roots = roots_of_poly(out.q_poly);
  size_t i = 0;
  while (i < roots.size()) {
    size_t j = i + 1;
    while (j < roots.size() && roots[j] == roots[i]) ++j;

    SpectrumRoot entry;
    entry.q = roots[i];
    entry.multiplicity = static_cast<int>(j - i);
    entry.aux = solve_auxiliary_parameters(p, N, entry.q);
    entry.relations = consistency_relations(p, entry.q, entry.aux.e);
    out.roots.push_back(std::move(entry));
    i = j;
  }
  return out;
}

Poly closed_form_accessory_poly(const CheParams& p, int n_value) {
  const Complex a = p.alpha, g = p.gamma, e = p.epsilon;
  const Poly q = Poly::variable();
  const auto c = [](Complex v) { return Poly::constant(v); };

  switch (n_value) {
    case 0:
      return q - c(a);
    case 1:
      return q * q - c(2.0 * a + g - 1.0 + e) * q + c(a * (a + g + e));
    case 2: {
      const Poly core =
          q * q - c(2.0 * a + g - 2.0 + e) * q + c(a * (a + g + e));
      return c(2.0 * (a + e)) * (q - c(a)) +
             (q - c(a + 2.0 * (g - 1.0 + e))) * core;
    }
    case 3: {
      const Poly core =
          q * q - c(2.0 * a + g - 3.0 + e) * q + c(a * (a + g + e));
      const Poly inner = c(4.0 * (a + e)) * (q - c(a)) +
                         (q - c(a + 2.0 * (g - 2.0 + e))) * core;
      return c(3.0 * (a + 2.0 * e)) * core +
             (q - c(a + 3.0 * (g - 1.0 + e))) * inner;
    }
    default:
      throw std::invalid_argument(
          "closed_form_accessory_poly: only N <= 3 has a hand-expanded form");
  }
}

}  // namespace heun

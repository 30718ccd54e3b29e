#include "heun/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heun {

namespace {

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

Poly::Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(Complex value) { return Poly({value}); }

Poly Poly::variable() { return Poly({Complex{0.0}, Complex{1.0}}); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex{0.0}) coeffs_.pop_back();
}

Complex Poly::leading() const {
  return coeffs_.empty() ? Complex{0.0} : coeffs_.back();
}

Complex Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return {0.0};
  return coeffs_[static_cast<size_t>(k)];
}

double Poly::max_coeff_magnitude() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex Poly::operator()(Complex x) const {
  Complex acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<Complex, Complex> Poly::eval_with_derivative(Complex x) const {
  Complex p{0.0}, dp{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& rhs) {
  if (coeffs_.empty() || rhs.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Complex> out(coeffs_.size() + rhs.coeffs_.size() - 1, Complex{0.0});
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < rhs.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  coeffs_ = std::move(out);
  trim();
  return *this;
}

Poly& Poly::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Poly Poly::monic() const {
  if (coeffs_.empty()) throw std::invalid_argument("monic: zero polynomial");
  Poly out = *this;
  const Complex lead = coeffs_.back();
  for (auto& c : out.coeffs_) c /= lead;
  out.coeffs_.back() = Complex{1.0};  // exact
  return out;
}

Poly Poly::pruned(double rel_tol) const {
  const double cut = rel_tol * max_coeff_magnitude();
  std::vector<Complex> out = coeffs_;
  while (!out.empty() && std::abs(out.back()) <= cut) out.pop_back();
  return Poly(std::move(out));
}

Complex eval_poly(const Poly& p, Complex x) { return p(x); }

Poly poly_from_roots(std::span<const Complex> roots) {
  Poly acc = Poly::constant({1.0});
  for (const Complex& r : roots) acc *= Poly({-r, Complex{1.0}});
  return acc;
}

Poly interpolate_poly(std::span<const Complex> nodes,
                      std::span<const Complex> values) {
  if (nodes.size() != values.size())
    throw std::invalid_argument("interpolate_poly: length mismatch");
  if (nodes.empty()) throw std::invalid_argument("interpolate_poly: no nodes");

  const size_t n = nodes.size();
  double scale = 0.0;
  for (const auto& x : nodes) scale = std::max(scale, std::abs(x));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(nodes[i] - nodes[j]) <= 1e-14 * std::max(1.0, scale))
        throw std::invalid_argument("interpolate_poly: duplicate nodes");

  // Newton divided differences, then expansion of the Newton form.
  std::vector<Complex> dd(values.begin(), values.end());
  for (size_t order = 1; order < n; ++order)
    for (size_t i = n - 1; i >= order; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - order]);

  Poly result = Poly::constant(dd[n - 1]);
  for (size_t i = n - 1; i-- > 0;)
    result = result * Poly({-nodes[i], Complex{1.0}}) + Poly::constant(dd[i]);
  return result;
}

namespace {

// Magnitude scale of p's evaluation at x: sum |c_i| |x|^i. A residual below
// tol times this is backward-stable.
double eval_scale(const Poly& p, Complex x) {
  double ax = std::abs(x), pw = 1.0, s = 0.0;
  for (const auto& c : p.coeffs()) {
    s += std::abs(c) * pw;
    pw *= ax;
  }
  return std::max(s, 1e-300);
}

std::vector<Complex> quadratic_roots(const Poly& p) {
  const Complex a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  // Pick the sign that avoids cancellation in -b -/+ disc.
  const Complex bd = (std::real(std::conj(b) * disc) >= 0.0) ? b + disc : b - disc;
  if (bd == Complex{0.0}) return {Complex{0.0}, Complex{0.0}};  // b = c = 0
  const Complex q = -0.5 * bd;
  return {q / a, c / q};
}

std::vector<Complex> aberth(const Poly& p, double tol, int max_iter);

// A few Newton steps per root, keeping each step only if it lowers the
// scaled residual. Brings simple roots from the iteration tolerance down to
// the rounding floor; stalls harmlessly on multiple roots.
void polish_roots(const Poly& p, std::vector<Complex>& roots) {
  for (Complex& r : roots) {
    double best = std::abs(p(r)) / eval_scale(p, r);
    for (int it = 0; it < 4; ++it) {
      const auto [pv, dv] = p.eval_with_derivative(r);
      if (pv == Complex{0.0} || dv == Complex{0.0}) break;
      const Complex cand = r - pv / dv;
      const double cand_resid = std::abs(p(cand)) / eval_scale(p, cand);
      if (cand_resid >= best) break;
      r = cand;
      best = cand_resid;
    }
  }
}

// Roots by simultaneous iteration; falls back to deflation of converged
// roots when the joint iteration stalls.
std::vector<Complex> solve_dense(const Poly& p, double tol) {
  const int deg = p.degree();
  if (deg == 1) return {-p.coeff(0) / p.coeff(1)};
  if (deg == 2) return quadratic_roots(p);
  try {
    std::vector<Complex> roots = aberth(p, tol, 400);
    polish_roots(p, roots);
    return roots;
  } catch (const RootFindingError& e) {
    // Deflate whatever converged and retry on the quotient.
    std::vector<Complex> good;
    Poly reduced = p.monic();
    for (size_t k = 0; k < e.best.size(); ++k) {
      if (e.residuals[k] <= tol * 10.0) {
        good.push_back(e.best[k]);
        // Synthetic division by (x - root).
        std::vector<Complex> c = reduced.coeffs();
        std::vector<Complex> quot(c.size() - 1);
        Complex carry{0.0};
        for (size_t i = c.size(); i-- > 1;) {
          quot[i - 1] = c[i] + carry;
          carry = quot[i - 1] * e.best[k];
        }
        reduced = Poly(std::move(quot));
      }
    }
    if (good.empty() || reduced.degree() < 1) throw;
    std::vector<Complex> rest =
        reduced.degree() >= 1 ? solve_dense(reduced, tol) : std::vector<Complex>{};
    good.insert(good.end(), rest.begin(), rest.end());
    // Deflated roots drift, so polish everything on the original polynomial.
    polish_roots(p, good);
    return good;
  }
}

std::vector<Complex> aberth(const Poly& p, double tol, int max_iter) {
  const Poly m = p.monic();
  const int n = m.degree();

  double cauchy = 0.0;
  for (int i = 0; i < n; ++i) cauchy = std::max(cauchy, std::abs(m.coeff(i)));
  cauchy += 1.0;
  double r0 = std::pow(std::abs(m.coeff(0)) + 1e-30, 1.0 / n);
  r0 = std::clamp(r0, 1e-3, cauchy);

  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n + 0.376;
    z[k] = r0 * Complex{std::cos(th), std::sin(th)};
  }

  std::vector<double> resid(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      auto [pv, dv] = m.eval_with_derivative(z[k]);
      resid[k] = std::abs(pv) / eval_scale(m, z[k]);
      worst = std::max(worst, resid[k]);
      if (pv == Complex{0.0}) continue;
      Complex corr;
      if (dv == Complex{0.0}) {
        corr = Complex{0.5, 0.5} * (1.0 + std::abs(z[k]));  // nudge off the stationary point
      } else {
        const Complex newton = pv / dv;
        Complex s{0.0};
        for (int j = 0; j < n; ++j)
          if (j != k) s += 1.0 / (z[k] - z[j]);
        const Complex denom = 1.0 - newton * s;
        corr = (denom == Complex{0.0}) ? newton : newton / denom;
      }
      z[k] -= corr;
    }
    if (worst <= tol) break;
    if (iter == max_iter - 1)
      throw RootFindingError("aberth: no convergence after iteration cap", z, resid);
  }

  return z;
}

// Replace near-coincident roots (within 1e-7 * scale) by their cluster mean,
// repeated with the cluster's multiplicity. The mean cancels the O(sqrt(eps))
// splitting a multiple root suffers in floating point.
std::vector<Complex> cluster_roots(std::vector<Complex> z) {
  std::sort(z.begin(), z.end(), lex_less);
  std::vector<Complex> out;
  size_t i = 0;
  while (i < z.size()) {
    size_t j = i + 1;
    Complex sum = z[i];
    const double cluster_tol = 1e-7 * std::max(1.0, std::abs(z[i]));
    while (j < z.size() && std::abs(z[j] - z[i]) <= cluster_tol) {
      sum += z[j];
      ++j;
    }
    const Complex mean = sum / static_cast<double>(j - i);
    for (size_t k = i; k < j; ++k) out.push_back(mean);
    i = j;
  }
  return out;
}

}  // namespace

std::vector<Complex> roots_of_poly(const Poly& p, double tol) {
  if (p.degree() < 1)
    throw std::invalid_argument("roots_of_poly: degree must be >= 1");

  // Exact zero constant term means roots at the origin; strip them first.
  std::vector<Complex> coeffs = p.coeffs();
  std::vector<Complex> roots;
  size_t zero_roots = 0;
  while (zero_roots < coeffs.size() - 1 && coeffs[zero_roots] == Complex{0.0})
    ++zero_roots;
  roots.assign(zero_roots, Complex{0.0});
  if (zero_roots > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + zero_roots);

  const Poly reduced{std::move(coeffs)};
  if (reduced.degree() >= 1) {
    auto rest = solve_dense(reduced, tol);
    roots.insert(roots.end(), rest.begin(), rest.end());
  }

  return cluster_roots(std::move(roots));
}

}  // namespace heun

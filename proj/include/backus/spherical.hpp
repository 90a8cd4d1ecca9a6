#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "backus/common.hpp"
#include "backus/grids.hpp"
#include "backus/poly.hpp"

namespace backus {

/// Coefficients of the Legendre polynomial P_l(t), ascending powers.
inline std::vector<double> legendre_coeffs(int l) {
  std::vector<double> p0{1.0}, p1{0.0, 1.0};
  if (l == 0) return p0;
  if (l == 1) return p1;
  for (int k = 2; k <= l; ++k) {
    std::vector<double> p2(static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t j = 0; j < p1.size(); ++j) p2[j + 1] += (2.0 * k - 1.0) * p1[j] / k;
    for (std::size_t j = 0; j < p0.size(); ++j) p2[j] -= (k - 1.0) * p0[j] / k;
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

inline std::vector<double> poly1d_derivative(std::vector<double> c, int times) {
  for (int t = 0; t < times; ++t) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * static_cast<double>(j);
    c = std::move(d);
  }
  return c;
}

namespace detail {

/// Re((x1 + i x2)^m) for sine == false, Im for sine == true.
inline Polynomial sectoral_factor(int m, bool sine) {
  Polynomial p;
  double binom = 1.0;
  for (int t = 0; t <= m; ++t) {
    if (t > 0) binom = binom * (m - t + 1) / t;
    if (!sine && t % 2 == 0) p.add_term({m - t, t, 0}, (t / 2 % 2 == 0) ? binom : -binom);
    if (sine && t % 2 == 1) p.add_term({m - t, t, 0}, ((t - 1) / 2 % 2 == 0) ? binom : -binom);
  }
  return p;
}

inline Polynomial r2_power(int p) {
  Polynomial r2;
  r2.add_term({2, 0, 0}, 1.0);
  r2.add_term({0, 2, 0}, 1.0);
  r2.add_term({0, 0, 2}, 1.0);
  Polynomial out = Polynomial::constant(1.0);
  for (int i = 0; i < p; ++i) out = out * r2;
  return out;
}

}  // namespace detail

/// Real solid harmonic r^l Y_{l,m}(x/|x|) as an exact polynomial in
/// (x1, x2, x3). Convention: m >= 0 is the cos(m phi) branch, m < 0 the
/// sin(|m| phi) branch; associated Legendre functions without the
/// Condon-Shortley phase. The restrictions to S are L^2(S)-orthonormal.
inline Polynomial solid_harmonic(int l, int m) {
  const int am = std::abs(m);
  if (l < 0 || am > l) throw std::invalid_argument("solid_harmonic: need |m| <= l");
  const std::vector<double> q = poly1d_derivative(legendre_coeffs(l), am);
  // r^{l-am} q(x3 / r) = sum_j q_j x3^j (r^2)^{(l-am-j)/2}; parity makes the
  // exponent of r^2 an integer for every nonzero q_j.
  Polynomial radial;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] == 0.0) continue;
    const int rest = l - am - static_cast<int>(j);
    if (rest % 2 != 0) continue;
    Polynomial term = detail::r2_power(rest / 2);
    Polynomial z_pow = Polynomial::monomial(0, 0, static_cast<int>(j), q[j]);
    radial += z_pow * term;
  }
  double norm_c;
  if (am == 0) {
    norm_c = std::sqrt((2.0 * l + 1.0) / (4.0 * pi));
  } else {
    double ratio = 1.0;  // (l-m)! / (l+m)!
    for (int i = l - am + 1; i <= l + am; ++i) ratio /= i;
    norm_c = std::sqrt((2.0 * l + 1.0) / (2.0 * pi) * ratio);
  }
  const Polynomial sect = detail::sectoral_factor(am, m < 0);
  return norm_c * (sect * radial);
}

/// Truncated expansion in the real spherical-harmonic basis, coefficients
/// indexed by l*l + l + m.
struct SphereExpansion {
  int L = 0;
  std::vector<double> coeffs;
  bool even_tag = false;     // data even in x3: only l + |m| even survives
  bool axisym_tag = false;   // only m = 0 survives

  static SphereExpansion zero(int L) {
    SphereExpansion e;
    e.L = L;
    e.coeffs.assign(static_cast<std::size_t>(L + 1) * static_cast<std::size_t>(L + 1), 0.0);
    return e;
  }

  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * static_cast<std::size_t>(l) +
           static_cast<std::size_t>(l + m);
  }

  double& at(int l, int m) { return coeffs[index(l, m)]; }
  double at(int l, int m) const { return coeffs[index(l, m)]; }

  double sup_coeff_norm() const {
    double s = 0.0;
    for (double c : coeffs) s = std::max(s, std::abs(c));
    return s;
  }

  SphereExpansion& operator+=(const SphereExpansion& o) {
    if (o.L != L) throw std::invalid_argument("SphereExpansion: degree mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SphereExpansion& operator-=(const SphereExpansion& o) {
    if (o.L != L) throw std::invalid_argument("SphereExpansion: degree mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  SphereExpansion& operator*=(double s) {
    for (double& c : coeffs) c *= s;
    return *this;
  }
  friend SphereExpansion operator+(SphereExpansion a, const SphereExpansion& b) { return a += b; }
  friend SphereExpansion operator-(SphereExpansion a, const SphereExpansion& b) { return a -= b; }
  friend SphereExpansion operator*(double s, SphereExpansion e) { return e *= s; }

  double even_violation() const {
    double v = 0.0;
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        if ((l + std::abs(m)) % 2 != 0) v = std::max(v, std::abs(at(l, m)));
    return v;
  }
  double axisym_violation() const {
    double v = 0.0;
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        if (m != 0) v = std::max(v, std::abs(at(l, m)));
    return v;
  }
};

enum class Symmetry { even, odd, axisymmetric };

/// Orthogonal projection of an expansion onto a symmetry class; idempotent.
inline SphereExpansion project_symmetry(SphereExpansion e, Symmetry mode) {
  for (int l = 0; l <= e.L; ++l)
    for (int m = -l; m <= l; ++m) {
      const bool parity_even = (l + std::abs(m)) % 2 == 0;
      const bool kill = (mode == Symmetry::even && !parity_even) ||
                        (mode == Symmetry::odd && parity_even) ||
                        (mode == Symmetry::axisymmetric && m != 0);
      if (kill) e.at(l, m) = 0.0;
    }
  e.even_tag = (mode == Symmetry::even);
  e.axisym_tag = (mode == Symmetry::axisymmetric);
  return e;
}

/// Spherical-harmonic basis attached to a quadrature grid: the solid-harmonic
/// polynomials and their node values, built once and shared. Evaluating the
/// polynomials at the grid nodes (instead of special functions) keeps the
/// projection and the spectral extension bit-consistent.
class SphereBasis {
 public:
  SphereBasis(std::shared_ptr<const SphereGrid> grid, int L)
      : grid_(std::move(grid)), L_(L) {
    if (L < 0) throw std::invalid_argument("SphereBasis: L must be >= 0");
    if (grid_->exact_degree() < 2 * L)
      throw std::runtime_error("SphereBasis: grid too coarse for degree-L projection");
    const std::size_t count = static_cast<std::size_t>(L + 1) * static_cast<std::size_t>(L + 1);
    polys_.reserve(count);
    values_.assign(count, {});
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) polys_.push_back(solid_harmonic(l, m));
    parallel_for(count, [&](std::size_t i) {
      std::vector<double> row(grid_->size());
      for (std::size_t k = 0; k < grid_->size(); ++k)
        row[k] = polys_[i].evaluate(grid_->nodes[k]);
      values_[i] = std::move(row);
    });
  }

  int L() const { return L_; }
  const SphereGrid& grid() const { return *grid_; }
  std::shared_ptr<const SphereGrid> grid_ptr() const { return grid_; }
  const Polynomial& harmonic(int l, int m) const {
    return polys_[SphereExpansion::index(l, m)];
  }
  const std::vector<double>& node_values(int l, int m) const {
    return values_[SphereExpansion::index(l, m)];
  }

  /// L^2(S)-orthogonal projection of nodal values onto degrees <= L_max.
  /// Exact to rounding when the data is a polynomial restriction of degree
  /// <= L_max and the grid degree-exactness is >= 2 L_max.
  SphereExpansion project(std::span<const double> values, int L_max = -1) const {
    if (L_max < 0) L_max = L_;
    if (L_max > L_) throw std::invalid_argument("project: L_max exceeds basis degree");
    if (values.size() != grid_->size())
      throw std::invalid_argument("project: value/node length mismatch");
    SphereExpansion e = SphereExpansion::zero(L_max);
    std::vector<double> prod(values.size());
    for (int l = 0; l <= L_max; ++l)
      for (int m = -l; m <= l; ++m) {
        const auto& ylm = values_[SphereExpansion::index(l, m)];
        for (std::size_t k = 0; k < values.size(); ++k)
          prod[k] = grid_->weights[k] * ylm[k] * values[k];
        e.at(l, m) = pairwise_sum(prod);
      }
    return e;
  }

  /// Nodal values of the expansion on this basis's grid.
  std::vector<double> synthesize_values(const SphereExpansion& e) const {
    if (e.L > L_) throw std::invalid_argument("synthesize: expansion degree exceeds basis");
    std::vector<double> out(grid_->size(), 0.0);
    for (int l = 0; l <= e.L; ++l)
      for (int m = -l; m <= l; ++m) {
        const double c = e.at(l, m);
        if (c == 0.0) continue;
        const auto& ylm = values_[SphereExpansion::index(l, m)];
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * ylm[k];
      }
    return out;
  }

  /// The harmonic polynomial sum a_lm r^l Y_lm; its trace on S reproduces the
  /// expansion.
  Polynomial synthesize_poly(const SphereExpansion& e) const {
    if (e.L > L_) throw std::invalid_argument("synthesize: expansion degree exceeds basis");
    Polynomial p;
    for (int l = 0; l <= e.L; ++l)
      for (int m = -l; m <= l; ++m) {
        const double c = e.at(l, m);
        if (c != 0.0) p += c * polys_[SphereExpansion::index(l, m)];
      }
    return p;
  }

 private:
  std::shared_ptr<const SphereGrid> grid_;
  int L_;
  std::vector<Polynomial> polys_;
  std::vector<std::vector<double>> values_;
};

/// Basis on a grid fine enough for the quadratic nonlinearity: products of
/// degree-L data (integrands up to degree 3L + 1) are integrated exactly.
inline SphereBasis make_default_basis(int L) {
  const int n_theta = std::max(2 * L + 4, 8);
  const int n_phi = std::max(4 * L + 8, 16);
  return SphereBasis(std::make_shared<SphereGrid>(build_sphere_grid(n_theta, n_phi)), L);
}

inline SphereExpansion project_sphere(const SphereBasis& basis, const SphereField& field,
                                      int L_max = -1) {
  if (field.grid->size() != basis.grid().size())
    throw std::invalid_argument("project_sphere: field grid does not match basis grid");
  return basis.project(field.values, L_max);
}

}  // namespace backus

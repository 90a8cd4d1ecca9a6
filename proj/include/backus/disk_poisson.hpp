#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "backus/common.hpp"
#include "backus/grids.hpp"
#include "backus/kernels.hpp"
#include "backus/poly.hpp"

namespace backus {

/// Polar-Fourier x radial-polynomial representation of a function on the
/// closed unit disk: sum over modes of c_{m,k} r^k cos(m theta) (or sin).
/// Every mode produced by the solver satisfies k >= m and k - m even, which
/// makes the whole object a bivariate polynomial in (x1, x2).
class DiskPoly {
 public:
  struct ModeKey {
    int m;
    bool sine;
    auto operator<=>(const ModeKey&) const = default;
  };
  using Radial = std::map<int, double>;  // power k -> coefficient

  DiskPoly() = default;

  static DiskPoly constant(double c) {
    DiskPoly p;
    if (c != 0.0) p.modes_[{0, false}][0] = c;
    return p;
  }

  const std::map<ModeKey, Radial>& modes() const { return modes_; }

  void add(int m, bool sine, int k, double c) {
    if (m < 0 || k < 0) throw std::invalid_argument("DiskPoly: negative mode index");
    if (c == 0.0) return;
    auto& radial = modes_[{m, sine}];
    radial[k] += c;
    if (radial[k] == 0.0) radial.erase(k);
  }

  DiskPoly& operator+=(const DiskPoly& o) {
    for (const auto& [mk, rad] : o.modes_)
      for (const auto& [k, c] : rad) add(mk.m, mk.sine, k, c);
    return *this;
  }
  friend DiskPoly operator+(DiskPoly a, const DiskPoly& b) { return a += b; }

  double evaluate(double r, double theta) const {
    std::vector<double> parts;
    for (const auto& [mk, rad] : modes_) {
      const double trig = mk.sine ? std::sin(mk.m * theta) : std::cos(mk.m * theta);
      double radial = 0.0;
      for (const auto& [k, c] : rad) radial += c * std::pow(r, k);
      parts.push_back(radial * trig);
    }
    return pairwise_sum(parts);
  }

  double evaluate_xy(const Vec2& xp) const {
    return evaluate(std::hypot(xp[0], xp[1]), std::atan2(xp[1], xp[0]));
  }

  /// Laplacian in polar modes: Delta (r^k trig(m theta)) = (k^2 - m^2) r^{k-2} trig.
  DiskPoly laplacian() const {
    DiskPoly out;
    for (const auto& [mk, rad] : modes_)
      for (const auto& [k, c] : rad) {
        const double factor = static_cast<double>(k) * k - static_cast<double>(mk.m) * mk.m;
        if (factor != 0.0) out.add(mk.m, mk.sine, k - 2, c * factor);
      }
    return out;
  }

  /// Trace on the rim r = 1: Fourier coefficients by mode.
  std::map<ModeKey, double> rim_trace() const {
    std::map<ModeKey, double> t;
    for (const auto& [mk, rad] : modes_) {
      double s = 0.0;
      for (const auto& [k, c] : rad) s += c;
      if (s != 0.0) t[mk] = s;
    }
    return t;
  }

  /// Conversion to a bivariate polynomial (x3-degree zero). Requires k >= m
  /// and k - m even for every mode.
  Polynomial to_polynomial() const {
    Polynomial out;
    Polynomial r2;
    r2.add_term({2, 0, 0}, 1.0);
    r2.add_term({0, 2, 0}, 1.0);
    for (const auto& [mk, rad] : modes_) {
      // r^m trig(m theta) as Re/Im of (x1 + i x2)^m.
      Polynomial sect;
      {
        double binom = 1.0;
        for (int t = 0; t <= mk.m; ++t) {
          if (t > 0) binom = binom * (mk.m - t + 1) / t;
          if (!mk.sine && t % 2 == 0)
            sect.add_term({mk.m - t, t, 0}, (t / 2 % 2 == 0) ? binom : -binom);
          if (mk.sine && t % 2 == 1)
            sect.add_term({mk.m - t, t, 0}, ((t - 1) / 2 % 2 == 0) ? binom : -binom);
        }
      }
      for (const auto& [k, c] : rad) {
        if (k < mk.m || (k - mk.m) % 2 != 0)
          throw std::domain_error("DiskPoly::to_polynomial: non-polynomial mode");
        Polynomial term = Polynomial::constant(c);
        for (int p = 0; p < (k - mk.m) / 2; ++p) term = term * r2;
        out += term * sect;
      }
    }
    return out;
  }

  /// Conversion from a bivariate polynomial in (x1, x2): each monomial
  /// x1^i x2^j expands into modes r^{i+j} trig(m theta) via the complex
  /// binomial convolution of cos/sin factors.
  static DiskPoly from_polynomial(const Polynomial& p) {
    DiskPoly out;
    for (const auto& [key, coeff] : p.terms()) {
      if (key[2] != 0)
        throw std::invalid_argument("DiskPoly::from_polynomial: x3 dependence");
      const int i = key[0], j = key[1];
      // cos^i sin^j as a trig polynomial: coefficients over frequencies.
      std::map<int, std::complex<double>> freq{{0, 1.0}};
      const auto convolve = [&freq](const std::map<int, std::complex<double>>& f) {
        std::map<int, std::complex<double>> out_f;
        for (const auto& [m1, c1] : freq)
          for (const auto& [m2, c2] : f) out_f[m1 + m2] += c1 * c2;
        return out_f;
      };
      const std::map<int, std::complex<double>> cosf{{1, 0.5}, {-1, 0.5}};
      const std::map<int, std::complex<double>> sinf{{1, std::complex<double>(0, -0.5)},
                                                     {-1, std::complex<double>(0, 0.5)}};
      for (int t = 0; t < i; ++t) freq = convolve(cosf);
      for (int t = 0; t < j; ++t) freq = convolve(sinf);
      const int k = i + j;
      for (const auto& [m, c] : freq) {
        if (m < 0) continue;  // conjugate pair handled through the m >= 0 entry
        if (m == 0) {
          out.add(0, false, k, coeff * c.real());
        } else {
          out.add(m, false, k, coeff * 2.0 * c.real());
          out.add(m, true, k, coeff * (-2.0) * c.imag());
        }
      }
    }
    return out;
  }

 private:
  std::map<ModeKey, Radial> modes_;
};

/// Finite Fourier series on the rim (boundary data psi).
struct RimFourier {
  double a0 = 0.0;
  std::vector<double> a_cos;  // a_cos[m-1] multiplies cos(m theta)
  std::vector<double> a_sin;

  static RimFourier constant(double h) { return RimFourier{h, {}, {}}; }

  double evaluate(double theta) const {
    double s = a0;
    for (std::size_t m = 0; m < a_cos.size(); ++m) s += a_cos[m] * std::cos((m + 1.0) * theta);
    for (std::size_t m = 0; m < a_sin.size(); ++m) s += a_sin[m] * std::sin((m + 1.0) * theta);
    return s;
  }

  bool is_constant() const {
    for (double c : a_cos)
      if (c != 0.0) return false;
    for (double c : a_sin)
      if (c != 0.0) return false;
    return true;
  }
};

/// Spectral Dirichlet solve on the disk: Z = Z1 + Z2 with
///   -Delta Z2 = rhs, Z2 = 0 on the rim (mode-by-mode radial inversion),
///   Z1 harmonic, Z1 = psi on the rim.
/// For the mode r^k trig(m theta) the particular solution is
/// -r^{k+2} trig(m theta) / ((k+2)^2 - m^2); the resonant case k + 2 = m
/// cannot occur for polynomial right-hand sides (k >= m, k - m even) and is
/// rejected, since the r^m log r branch leaves the polynomial class.
inline DiskPoly solve_disk_spectral(const Polynomial& rhs, const RimFourier& psi) {
  const DiskPoly rhs_modes = DiskPoly::from_polynomial(rhs);
  DiskPoly z;
  for (const auto& [mk, rad] : rhs_modes.modes()) {
    double rim_sum = 0.0;
    for (const auto& [k, c] : rad) {
      const double denom =
          static_cast<double>(k + 2) * (k + 2) - static_cast<double>(mk.m) * mk.m;
      if (denom == 0.0)
        throw std::domain_error("solve_disk_spectral: resonant mode (k + 2 == m)");
      const double part = -c / denom;
      z.add(mk.m, mk.sine, k + 2, part);
      rim_sum += part;
    }
    // Harmonic correction r^m trig(m theta) zeroing the rim trace of Z2.
    z.add(mk.m, mk.sine, mk.m, -rim_sum);
  }
  // Z1: harmonic extension of psi.
  z.add(0, false, 0, psi.a0);
  for (std::size_t m = 0; m < psi.a_cos.size(); ++m)
    z.add(static_cast<int>(m + 1), false, static_cast<int>(m + 1), psi.a_cos[m]);
  for (std::size_t m = 0; m < psi.a_sin.size(); ++m)
    z.add(static_cast<int>(m + 1), true, static_cast<int>(m + 1), psi.a_sin[m]);
  return z;
}

/// Green's-function quadrature path:
///   Z(x') = integral_D G_D(x'; z') rhs(z') dz'
///         + integral_rim P_D(x'; z') psi(z') dS_{z'}.
inline double solve_disk_green(const DiskField& rhs,
                               const std::function<double(double)>& psi_of_theta,
                               const Vec2& xp, int n_rim = 256) {
  if (norm2d(xp) >= 1.0) throw std::domain_error("solve_disk_green: |x'| >= 1");
  const DiskGrid& grid = *rhs.grid;
  std::vector<double> area_terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    area_terms[i] = grid.weights[i] * green_disk(xp, grid.nodes[i]) * rhs.values[i];
  std::vector<double> rim_terms(static_cast<std::size_t>(n_rim));
  const double dtheta = 2.0 * pi / n_rim;
  for (int i = 0; i < n_rim; ++i) {
    const double theta = i * dtheta;
    const Vec2 yp{std::cos(theta), std::sin(theta)};
    rim_terms[static_cast<std::size_t>(i)] =
        dtheta * poisson_kernel_disk(xp, yp) * psi_of_theta(theta);
  }
  return pairwise_sum(area_terms) + pairwise_sum(rim_terms);
}

}  // namespace backus

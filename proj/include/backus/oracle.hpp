#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "backus/common.hpp"
#include "backus/grids.hpp"
#include "backus/harmonic_ext.hpp"
#include "backus/nonlinear.hpp"
#include "backus/norms.hpp"
#include "backus/poly.hpp"

namespace backus {

/// Ground-truth instance: a chosen harmonic u = x3 + eps q whose boundary
/// gradient modulus is fed back to the solver as data.
struct ManufacturedCase {
  std::string name;
  HarmonicPoly u_exact;
  Polynomial v_exact;    // eps * q
  Polynomial phi_star;   // eps * d/dx3 q, the exact fixed point of the iteration
  BoundaryData g;
  SolveMode mode = SolveMode::odd;
  double eps = 0.0;
  double h = 0.0;  // equatorial level (axisymmetric branch)
};

namespace detail {

inline bool is_zonal(const Polynomial& q) {
  // Invariance under a few irrational-angle rotations about the x3 axis,
  // probed at fixed sample points.
  const double angles[] = {0.7, 1.9, 2.6};
  const Vec3 samples[] = {{0.3, 0.4, 0.5}, {-0.6, 0.1, -0.2}, {0.2, -0.7, 0.4}};
  const double scale = std::max(1.0, q.max_abs_coeff());
  for (double a : angles)
    for (const Vec3& x : samples) {
      const Vec3 rx{std::cos(a) * x[0] - std::sin(a) * x[1],
                    std::sin(a) * x[0] + std::cos(a) * x[1], x[2]};
      if (std::abs(q.evaluate(rx) - q.evaluate(x)) > 1e-12 * scale) return false;
    }
  return true;
}

}  // namespace detail

inline ManufacturedCase make_manufactured(const Polynomial& q, double eps, SolveMode mode,
                                          const std::string& name = "manufactured") {
  ManufacturedCase mc;
  mc.name = name;
  mc.eps = eps;
  mc.mode = mode;
  mc.u_exact = HarmonicPoly(Polynomial::variable(2) + eps * q);
  if (!mc.u_exact.harmonic_flag)
    throw std::domain_error("make_manufactured: q is not harmonic");
  mc.v_exact = eps * q;
  mc.phi_star = eps * q.derivative(2);

  const double scale = std::max(1.0, q.max_abs_coeff());
  if (mode == SolveMode::odd) {
    if (!(q + q.reflect_x3()).is_zero(1e-12 * scale))
      throw std::domain_error("make_manufactured: odd mode needs q odd in x3");
  } else {
    if (!detail::is_zonal(q))
      throw std::domain_error("make_manufactured: axisymmetric mode needs zonal q");
    const Polynomial rim = mc.v_exact.at_x3_zero();
    const double h0 = rim.evaluate({1.0, 0.0, 0.0});
    for (int i = 1; i < 16; ++i) {
      const double th = 2.0 * pi * i / 16;
      if (std::abs(rim.evaluate({std::cos(th), std::sin(th), 0.0}) - h0) > 1e-12 * scale)
        throw std::domain_error("make_manufactured: q must be constant on the equator");
    }
    mc.h = h0;
  }

  const std::array<Polynomial, 3> grad = mc.u_exact.poly.gradient();
  mc.g.kind = BoundaryData::Kind::manufactured;
  mc.g.tag = (mode == SolveMode::odd) ? Symmetry::even : Symmetry::axisymmetric;
  mc.g.h = mc.h;
  mc.g.name = name;
  mc.g.eval = [grad](const Vec3& y) {
    const Vec3 v{grad[0].evaluate(y), grad[1].evaluate(y), grad[2].evaluate(y)};
    return norm(v);
  };
  // Admissibility: eps small enough that |grad u| stays positive.
  const SphereGrid probe = build_sphere_grid(16, 32);
  for (const Vec3& y : probe.nodes)
    if (mc.g.eval(y) <= 0.0)
      throw std::domain_error("make_manufactured: g <= 0 on S (eps too large)");
  return mc;
}

/// Named test families.
inline Polynomial manufactured_q_odd() {
  return Polynomial::variable(0) * Polynomial::variable(2);  // x1 x3
}
inline Polynomial manufactured_q_axisym() {
  // x3^2 - |x'|^2 / 2
  return Polynomial::monomial(0, 0, 2, 1.0) + Polynomial::monomial(2, 0, 0, -0.5) +
         Polynomial::monomial(0, 2, 0, -0.5);
}
inline Polynomial manufactured_q_tilt() { return Polynomial::variable(2); }  // u = (1+eps) x3

/// Weighted second (or third) derivative of the Poisson extension of phi
/// along radial probes approaching S: reports sup over directions and index
/// pairs of |D^beta w(x)| (1 - |x|^2)^{|beta| - 1 - alpha} at each radius.
struct DecayReport {
  std::vector<double> radii;
  std::vector<double> weighted_sup;  // one entry per radius
  bool bounded(double growth_factor = 2.0) const {
    for (std::size_t i = 1; i < weighted_sup.size(); ++i)
      if (weighted_sup[i] > growth_factor * std::max(weighted_sup[0], 1e-14)) return false;
    return true;
  }
};

inline DecayReport check_derivative_decay(const SphereGrid& grid,
                                          const std::function<double(const Vec3&)>& phi,
                                          const std::function<Vec3(const Vec3&)>& grad_phi,
                                          double alpha, int beta_order = 2,
                                          std::vector<double> radii = {0.9, 0.99, 0.999}) {
  if (beta_order != 2 && beta_order != 3)
    throw std::invalid_argument("check_derivative_decay: beta_order must be 2 or 3");
  const std::vector<Vec3> dirs = {
      {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0},
      {std::sqrt(0.5), 0.0, std::sqrt(0.5)}, {0.5, 0.5, std::sqrt(0.5)}};
  const auto d2 = [&](const Vec3& x, int i, int j) {
    return second_derivative_quadrature(grid, phi, grad_phi, x, i, j);
  };
  DecayReport rep;
  rep.radii = radii;
  for (double r : radii) {
    double sup = 0.0;
    const double weight = std::pow(1.0 - r * r, beta_order - 1.0 - alpha);
    for (const Vec3& d : dirs) {
      const Vec3 x = r * d;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double val;
          if (beta_order == 2) {
            val = d2(x, i, j);
          } else {
            // Radial one-sided difference of the Hessian entry, step shrinking
            // with the boundary gap so the stencil stays interior.
            const double step = (1.0 - r) / 10.0;
            const Vec3 x_in = (r - step) * d;
            val = (d2(x, i, j) - d2(x_in, i, j)) / step;
          }
          sup = std::max(sup, std::abs(val));
        }
    }
    rep.weighted_sup.push_back(weight * sup);
  }
  return rep;
}

/// The weighted equatorial integral
///   sigma (1 - sigma^2)^kappa * integral_0^sigma (1 - s^2)^{-1-kappa} ds,
/// which tends to 1/(2 kappa) as sigma -> 1. (The two-variable form with
/// x_N = sigma sqrt(1 - |x'|^2) reduces to this after scaling t = s a, so the
/// quantity is independent of |x'|.) The inner integral is computed after the
/// substitution 1 - s = e^{-t}, which removes the endpoint blow-up.
struct IntegralLemmaResult {
  double value = 0.0;
  double limit = 0.0;  // 1 / (2 kappa)
};

inline IntegralLemmaResult check_integral_lemma(double kappa, double sigma, int n_panels = 64,
                                                int n_gauss = 8) {
  if (kappa <= 0.0) throw std::invalid_argument("check_integral_lemma: kappa must be > 0");
  if (sigma < 0.0 || sigma >= 1.0)
    throw std::invalid_argument("check_integral_lemma: need 0 <= sigma < 1");
  IntegralLemmaResult res;
  res.limit = 1.0 / (2.0 * kappa);
  if (sigma == 0.0) return res;
  // J = integral_0^T e^{kappa t} (2 - e^{-t})^{-1-kappa} dt, T = -log(1 - sigma).
  const double T = -std::log(1.0 - sigma);
  const Rule1D gl = gauss_legendre(n_gauss);
  std::vector<double> panels(static_cast<std::size_t>(n_panels));
  for (int p = 0; p < n_panels; ++p) {
    const double a = T * p / n_panels, b = T * (p + 1) / n_panels;
    std::vector<double> vals(gl.nodes.size());
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[k];
      vals[k] = 0.5 * (b - a) * gl.weights[k] * std::exp(kappa * t) *
                std::pow(2.0 - std::exp(-t), -1.0 - kappa);
    }
    panels[static_cast<std::size_t>(p)] = pairwise_sum(vals);
  }
  const double J = pairwise_sum(panels);
  res.value = sigma * std::pow(1.0 - sigma * sigma, kappa) * J;
  return res;
}

/// Pair-sampled check that a gradient bound M (1 - |x|^2)^{alpha - 1}
/// propagates to a Hoelder bound [v]_alpha <= C M on the closed ball.
struct GradientHolderResult {
  double holder_quotient = 0.0;  // pair-sampled [v]_alpha
  double gradient_bound = 0.0;   // certified M
  double ratio = 0.0;            // quotient / M (the empirical C)
};

template <typename Fn>
GradientHolderResult check_gradient_to_holder(Fn&& v, double gradient_bound_M, double alpha,
                                              std::size_t n_pairs = 10000,
                                              std::uint64_t seed = 42) {
  GradientHolderResult res;
  res.gradient_bound = gradient_bound_M;
  res.holder_quotient = holder_seminorm_surrogate(v, alpha, n_pairs, seed);
  res.ratio = gradient_bound_M > 0.0 ? res.holder_quotient / gradient_bound_M : 0.0;
  return res;
}

}  // namespace backus

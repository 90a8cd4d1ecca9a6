#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "backus/common.hpp"
#include "backus/grids.hpp"
#include "backus/kernels.hpp"
#include "backus/poly.hpp"
#include "backus/spherical.hpp"

namespace backus {

/// Spectral Poisson extension: boundary data sum a_lm Y_lm extends to the
/// harmonic polynomial sum a_lm r^l Y_lm.
inline HarmonicPoly poisson_extend_spectral(const SphereBasis& basis,
                                            const SphereExpansion& exp) {
  HarmonicPoly w(basis.synthesize_poly(exp));
  if (!w.harmonic_flag)
    throw std::runtime_error("poisson_extend_spectral: extension failed harmonicity check");
  return w;
}

/// Quadrature Poisson extension w(x) = integral_S P_B(x; y) phi(y) dS_y.
/// For |x| >= switch_radius the moment-subtraction form
///   w(x) = phi(xbar) + integral_S P_B(x; y) (phi(y) - phi(xbar)) dS_y,
/// with xbar = x/|x|, tames the kernel peak near the boundary.
inline double poisson_extend_quadrature(const SphereGrid& grid,
                                        const std::function<double(const Vec3&)>& phi,
                                        const Vec3& x, double switch_radius = 0.95) {
  const double r = norm(x);
  if (r >= 1.0) throw std::domain_error("poisson_extend_quadrature: |x| >= 1");
  const BallPoint bp = BallPoint::interior(x);
  std::vector<double> terms(grid.size());
  if (r >= switch_radius) {
    const Vec3 xbar = (1.0 / r) * x;
    const double phi0 = phi(xbar);
    for (std::size_t i = 0; i < grid.size(); ++i)
      terms[i] = grid.weights[i] * poisson_kernel_ball(bp, grid.nodes[i]) *
                 (phi(grid.nodes[i]) - phi0);
    return phi0 + pairwise_sum(terms);
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    terms[i] = grid.weights[i] * poisson_kernel_ball(bp, grid.nodes[i]) * phi(grid.nodes[i]);
  return pairwise_sum(terms);
}

/// Second derivative d^2 w / dx_i dx_j of the quadrature-path extension with
/// first-order moment cancellation: the affine part of phi at xbar integrates
/// against the kernel Hessian to an exactly vanishing contribution, so it is
/// subtracted before quadrature.
inline double second_derivative_quadrature(const SphereGrid& grid,
                                           const std::function<double(const Vec3&)>& phi,
                                           const std::function<Vec3(const Vec3&)>& grad_phi,
                                           const Vec3& x, int i, int j) {
  const double r = norm(x);
  if (r >= 1.0) throw std::domain_error("second_derivative_quadrature: |x| >= 1");
  const BallPoint bp = BallPoint::interior(x);
  const Vec3 xbar = r > 0.0 ? (1.0 / r) * x : Vec3{0.0, 0.0, 1.0};
  const double phi0 = phi(xbar);
  const Vec3 g0 = grad_phi(xbar);
  std::vector<double> terms(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec3& y = grid.nodes[k];
    const double remainder = phi(y) - phi0 - dot(g0, y - xbar);
    const auto h = hess_poisson_kernel_ball(bp, y);
    terms[k] = grid.weights[k] * h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               remainder;
  }
  return pairwise_sum(terms);
}

/// Trace of d/dx3 w on the equatorial plane, as a polynomial in x'.
inline Polynomial equatorial_normal_trace(const Polynomial& w) {
  return w.derivative(2).at_x3_zero();
}

/// Vertical primitive W(x) = integral_0^{x3} w(x', t) dt. Not harmonic in
/// general: Delta W = d/dx3 w(x', 0) holds exactly on coefficients when w is
/// harmonic.
inline Polynomial vertical_primitive(const Polynomial& w) {
  return w.integrate_x3_from_0();
}

}  // namespace backus

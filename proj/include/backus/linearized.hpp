#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "backus/common.hpp"
#include "backus/disk_poisson.hpp"
#include "backus/grids.hpp"
#include "backus/harmonic_ext.hpp"
#include "backus/kernels.hpp"
#include "backus/poly.hpp"
#include "backus/spherical.hpp"

namespace backus {

enum class SolvePath { spectral, kernel };

/// Solution of the linearized oblique-derivative problem
///   Delta v = 0 in B,  d/dx3 v = phi on S,  v = psi on E,
/// assembled as v = W + Z with exact polynomial carriers (spectral path).
struct LinearizedSolution {
  Polynomial v;
  Polynomial w;        // = d/dx3 v, the Poisson extension of phi
  Polynomial W_part;   // vertical primitive of w
  DiskPoly Z_part;     // equatorial correction
  Polynomial Z_poly;   // Z_part as a bivariate polynomial
  std::array<Polynomial, 3> grad_v;
  SolvePath path = SolvePath::spectral;

  struct Residuals {
    double harmonicity = 0.0;   // max |Delta v| coefficient
    double boundary_sup = 0.0;  // sup over sphere nodes of |d3 v - phi|
    double equator_sup = 0.0;   // sup over rim samples of |v - psi|
  } residuals;
};

inline LinearizedSolution solve_linearized(const SphereBasis& basis,
                                           const SphereExpansion& phi,
                                           const RimFourier& psi = RimFourier{}) {
  LinearizedSolution sol;
  sol.path = SolvePath::spectral;
  const HarmonicPoly w = poisson_extend_spectral(basis, phi);
  sol.w = w.poly;
  sol.W_part = vertical_primitive(sol.w);
  const Polynomial rhs = equatorial_normal_trace(sol.w);
  sol.Z_part = solve_disk_spectral(rhs, psi);
  sol.Z_poly = sol.Z_part.to_polynomial();
  sol.v = sol.W_part + sol.Z_poly;
  sol.grad_v = sol.v.gradient();
  sol.residuals.harmonicity = sol.v.laplacian().max_abs_coeff();

  // Boundary diagnostics on the basis grid / rim samples.
  const std::vector<double> phi_nodes = basis.synthesize_values(phi);
  const Polynomial d3v = sol.grad_v[2];
  for (std::size_t i = 0; i < basis.grid().size(); ++i) {
    const double r = std::abs(d3v.evaluate(basis.grid().nodes[i]) - phi_nodes[i]);
    sol.residuals.boundary_sup = std::max(sol.residuals.boundary_sup, r);
  }
  for (int i = 0; i < 256; ++i) {
    const double theta = 2.0 * pi * i / 256;
    const Vec3 e{std::cos(theta), std::sin(theta), 0.0};
    const double r = std::abs(sol.v.evaluate(e) - psi.evaluate(theta));
    sol.residuals.equator_sup = std::max(sol.residuals.equator_sup, r);
  }
  return sol;
}

/// Kernel-representation path
///   v(x) = integral_S K(x; y) phi(y) dS_y + integral_E P_D(x'; y') psi dS.
/// The disk part of K is Fubini-restructured: the inner sphere integral
///   q(z') = integral_S d/dx3 P_B(z', 0; y) phi(y) dS_y
/// is precomputed once per boundary datum, after which each target point
/// costs one segment rule plus one disk quadrature.
class KernelPathEvaluator {
 public:
  KernelPathEvaluator(std::shared_ptr<const SphereGrid> sphere,
                      std::shared_ptr<const DiskGrid> disk, std::vector<double> phi_values,
                      std::function<double(double)> psi_of_theta, int n_segment = 16,
                      int n_rim = 256)
      : sphere_(std::move(sphere)),
        disk_(std::move(disk)),
        phi_(std::move(phi_values)),
        psi_(std::move(psi_of_theta)),
        n_segment_(n_segment),
        n_rim_(n_rim) {
    if (phi_.size() != sphere_->size())
      throw std::invalid_argument("KernelPathEvaluator: phi/node length mismatch");
    q_disk_.resize(disk_->size());
    parallel_for(disk_->size(), [&](std::size_t i) {
      const Vec2& zp = disk_->nodes[i];
      const BallPoint z = BallPoint::make({zp[0], zp[1], 0.0});
      std::vector<double> terms(sphere_->size());
      for (std::size_t k = 0; k < sphere_->size(); ++k)
        terms[k] = sphere_->weights[k] *
                   grad_poisson_kernel_ball(z, sphere_->nodes[k])[2] * phi_[k];
      q_disk_[i] = pairwise_sum(terms);
    });
  }

  /// v(x) at a strictly interior point off the equator ring.
  double evaluate(const Vec3& x) const {
    if (norm(x) >= 1.0)
      throw std::domain_error("KernelPathEvaluator: point not interior");
    // W part: segment rule through the sphere integral.
    const SegmentRule seg = build_segment_rule({x[0], x[1]}, x[2], n_segment_);
    std::vector<double> w_terms(sphere_->size(), 0.0);
    for (std::size_t k = 0; k < sphere_->size(); ++k) {
      double along = 0.0;
      for (std::size_t t = 0; t < seg.size(); ++t) {
        const BallPoint p = BallPoint::make({x[0], x[1], seg.nodes[t]});
        along += seg.weights[t] * poisson_kernel_ball(p, sphere_->nodes[k]);
      }
      w_terms[k] = sphere_->weights[k] * along * phi_[k];
    }
    // Z part: Green quadrature against the precomputed trace derivative.
    const Vec2 xp{x[0], x[1]};
    std::vector<double> z_terms(disk_->size());
    for (std::size_t i = 0; i < disk_->size(); ++i)
      z_terms[i] = disk_->weights[i] * green_disk(xp, disk_->nodes[i]) * q_disk_[i];
    // psi part: rim Poisson integral.
    std::vector<double> rim_terms(static_cast<std::size_t>(n_rim_));
    const double dtheta = 2.0 * pi / n_rim_;
    for (int i = 0; i < n_rim_; ++i) {
      const double theta = i * dtheta;
      rim_terms[static_cast<std::size_t>(i)] =
          dtheta * poisson_kernel_disk(xp, {std::cos(theta), std::sin(theta)}) * psi_(theta);
    }
    return pairwise_sum(w_terms) + pairwise_sum(z_terms) + pairwise_sum(rim_terms);
  }

  /// Boundary values by radial Richardson extrapolation from r = 1 - 2 eps
  /// and r = 1 - eps.
  double evaluate_near_boundary(const Vec3& unit_x, double eps = 0.01) const {
    const double r = norm(unit_x);
    if (r == 0.0) throw std::domain_error("evaluate_near_boundary: zero direction");
    const Vec3 dir = (1.0 / r) * unit_x;
    const double v1 = evaluate((1.0 - eps) * dir);
    const double v2 = evaluate((1.0 - 2.0 * eps) * dir);
    return 2.0 * v1 - v2;
  }

  const std::vector<double>& equatorial_trace_derivative() const { return q_disk_; }

 private:
  std::shared_ptr<const SphereGrid> sphere_;
  std::shared_ptr<const DiskGrid> disk_;
  std::vector<double> phi_;
  std::function<double(double)> psi_;
  int n_segment_;
  int n_rim_;
  std::vector<double> q_disk_;
};

/// Exact-polynomial harmonicity residual (spectral path).
inline double harmonic_residual(const Polynomial& v) { return v.laplacian().max_abs_coeff(); }

/// Max second-order centered finite-difference Laplacian over a probe lattice
/// (kernel path).
template <typename Fn>
double harmonic_residual_fd(Fn&& v, const std::vector<Vec3>& probes, double h = 1e-2) {
  double sup = 0.0;
  for (const Vec3& x : probes) {
    double lap = -6.0 * v(x);
    for (int i = 0; i < 3; ++i) {
      Vec3 xp = x, xm = x;
      xp[static_cast<std::size_t>(i)] += h;
      xm[static_cast<std::size_t>(i)] -= h;
      lap += v(xp) + v(xm);
    }
    sup = std::max(sup, std::abs(lap) / (h * h));
  }
  return sup;
}

/// Interior probe lattice of the open ball, margin away from S.
inline std::vector<Vec3> probe_lattice(int n_per_axis, double radius = 0.8) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j)
      for (int k = 0; k < n_per_axis; ++k) {
        const Vec3 x{radius * (2.0 * (i + 0.5) / n_per_axis - 1.0),
                     radius * (2.0 * (j + 0.5) / n_per_axis - 1.0),
                     radius * (2.0 * (k + 0.5) / n_per_axis - 1.0)};
        if (norm(x) < radius) pts.push_back(x);
      }
  return pts;
}

/// The quotient field omega = v / x3 off the plane, d/dx3 v(x', 0) on it.
/// Defined for the odd branch where v vanishes on the equatorial plane; the
/// polynomial division is exact, and continuity across x3 = 0 is automatic
/// at the coefficient level.
struct OmegaField {
  Polynomial omega;

  double evaluate(const Vec3& x) const { return omega.evaluate(x); }
};

inline OmegaField omega_quotient(const LinearizedSolution& sol, double tol = 1e-12) {
  const Polynomial plane_trace = sol.v.at_x3_zero();
  if (plane_trace.max_abs_coeff() > tol * std::max(1.0, sol.v.max_abs_coeff()))
    throw std::domain_error("omega_quotient: v does not vanish on the equatorial plane");
  OmegaField out;
  out.omega = (sol.v - plane_trace).divide_by_x3();
  return out;
}

}  // namespace backus

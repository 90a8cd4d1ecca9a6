#pragma once

#include <cmath>
#include <stdexcept>

#include "backus/common.hpp"
#include "backus/grids.hpp"

namespace backus {

/// Point of the closed unit ball with its defect 1 - |x|^2 cached.
struct BallPoint {
  Vec3 x{0.0, 0.0, 0.0};
  double one_minus_r2 = 1.0;

  static BallPoint make(const Vec3& x) {
    const double r2 = dot(x, x);
    if (r2 > 1.0 + 1e-14) throw std::domain_error("BallPoint: |x| > 1");
    return BallPoint{x, 1.0 - r2};
  }

  static BallPoint interior(const Vec3& x) {
    const double r2 = dot(x, x);
    if (r2 >= 1.0) throw std::domain_error("BallPoint: point not interior");
    return BallPoint{x, 1.0 - r2};
  }
};

/// Volume of the unit ball in R^N.
inline double ball_volume(int n) {
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Poisson kernel of the unit ball:
///   P_B(x; y) = (1 / (N w_N)) (1 - |x|^2) / |x - y|^N,  |x| < 1, |y| = 1.
inline double poisson_kernel_ball(const BallPoint& x, const Vec3& y, int n_dim = 3) {
  if (x.one_minus_r2 <= 0.0) throw std::domain_error("poisson_kernel_ball: |x| >= 1");
  const double q = norm(x.x - y);
  return x.one_minus_r2 / (n_dim * ball_volume(n_dim) * std::pow(q, n_dim));
}

/// Gradient of P_B in x (closed form, N = 3 by default):
///   grad = c [ -2 x / q^N - N (1-|x|^2) (x-y) / q^{N+2} ].
inline Vec3 grad_poisson_kernel_ball(const BallPoint& x, const Vec3& y, int n_dim = 3) {
  if (x.one_minus_r2 <= 0.0) throw std::domain_error("grad_poisson_kernel_ball: |x| >= 1");
  const double c = 1.0 / (n_dim * ball_volume(n_dim));
  const Vec3 d = x.x - y;
  const double q2 = dot(d, d);
  const double qn = std::pow(q2, 0.5 * n_dim);
  const double a = -2.0 * c / qn;
  const double b = -c * n_dim * x.one_minus_r2 / (qn * q2);
  return {a * x.x[0] + b * d[0], a * x.x[1] + b * d[1], a * x.x[2] + b * d[2]};
}

/// Hessian of P_B in x for N = 3, by nested analytic differentiation of the
/// rational closed form (used by the derivative-decay checker, which divides
/// by small powers of 1 - |x|^2 and needs smooth derivative values).
inline std::array<std::array<double, 3>, 3> hess_poisson_kernel_ball(const BallPoint& x,
                                                                     const Vec3& y) {
  constexpr int n_dim = 3;
  const double c = 1.0 / (n_dim * ball_volume(n_dim));
  const Vec3 d = x.x - y;
  const double q2 = dot(d, d);
  const double qn = std::pow(q2, 0.5 * n_dim);        // q^N
  const double qn2 = qn * q2;                         // q^{N+2}
  const double qn4 = qn2 * q2;                        // q^{N+4}
  const double s = x.one_minus_r2;
  std::array<std::array<double, 3>, 3> h{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double dij = (i == j) ? 1.0 : 0.0;
      double v = -2.0 * dij / qn;
      v += 2.0 * n_dim * (x.x[i] * d[j] + x.x[j] * d[i]) / qn2;
      v += -n_dim * s * dij / qn2;
      v += n_dim * (n_dim + 2) * s * d[i] * d[j] / qn4;
      h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c * v;
    }
  return h;
}

/// Fundamental solution of -Laplace in d dimensions.
inline double fundamental_solution(double dist, int d) {
  if (dist <= 0.0) throw std::domain_error("fundamental_solution: |z| must be positive");
  if (d == 2) return std::log(1.0 / dist) / (2.0 * pi);
  if (d >= 3) return std::pow(dist, 2 - d) / (d * (d - 2) * ball_volume(d));
  throw std::invalid_argument("fundamental_solution: d must be >= 2");
}

/// Green's function of the unit disk (d = 2):
///   G_D(x'; y') = Gamma_2(x' - y') - Gamma_2(|x'| (I(x') - y')),  I(x') = x'/|x'|^2.
/// At x' = 0 the image distance |x'| |I(x') - y'| has the limit 1.
inline double green_disk(const Vec2& xp, const Vec2& yp, int d = 2) {
  if (d != 2) throw std::invalid_argument("green_disk: only d = 2 is provided");
  const double dx = xp[0] - yp[0], dy = xp[1] - yp[1];
  const double dist = std::hypot(dx, dy);
  if (dist == 0.0) throw std::domain_error("green_disk: coincident points");
  const double rx2 = xp[0] * xp[0] + xp[1] * xp[1];
  // |x'| |I(x') - y'| = sqrt(1 - 2 x'.y' + |x'|^2 |y'|^2), regular at x' = 0.
  const double img2 = 1.0 - 2.0 * (xp[0] * yp[0] + xp[1] * yp[1]) +
                      rx2 * (yp[0] * yp[0] + yp[1] * yp[1]);
  const double img = std::sqrt(std::max(img2, 0.0));
  if (img == 0.0) throw std::domain_error("green_disk: singular image point");
  return (std::log(img) - std::log(dist)) / (2.0 * pi);
}

/// Poisson kernel of the unit disk:
///   P_D(x'; y') = (1 / (d w_d)) (1 - |x'|^2) / |x' - y'|^d,  d = 2.
inline double poisson_kernel_disk(const Vec2& xp, const Vec2& yp, int d = 2) {
  if (d != 2) throw std::invalid_argument("poisson_kernel_disk: only d = 2 is provided");
  const double rx2 = xp[0] * xp[0] + xp[1] * xp[1];
  if (rx2 >= 1.0) throw std::domain_error("poisson_kernel_disk: |x'| >= 1");
  const double dx = xp[0] - yp[0], dy = xp[1] - yp[1];
  const double q2 = dx * dx + dy * dy;
  return (1.0 - rx2) / (2.0 * pi * q2);
}

/// Composite oblique-derivative kernel
///   K(x; y) = integral_0^{x3} P_B(x', t; y) dt
///           + integral_D G_D(x', z') d/dx3 P_B(z', 0; y) dz'.
/// Quadrature validation path; quadratic cost in the disk-grid size.
inline double kernel_K(const BallPoint& x, const Vec3& y, const SegmentRule& seg,
                       const DiskGrid& disk) {
  if (x.one_minus_r2 <= 0.0) throw std::domain_error("kernel_K: |x| >= 1");
  std::vector<double> seg_terms(seg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const Vec3 p{seg.base[0], seg.base[1], seg.nodes[i]};
    seg_terms[i] = seg.weights[i] * poisson_kernel_ball(BallPoint::make(p), y);
  }
  std::vector<double> disk_terms(disk.size());
  const Vec2 xp{x.x[0], x.x[1]};
  for (std::size_t i = 0; i < disk.size(); ++i) {
    const Vec2& zp = disk.nodes[i];
    const Vec3 z{zp[0], zp[1], 0.0};
    const double dP = grad_poisson_kernel_ball(BallPoint::make(z), y)[2];
    disk_terms[i] = disk.weights[i] * green_disk(xp, zp) * dP;
  }
  return pairwise_sum(seg_terms) + pairwise_sum(disk_terms);
}

}  // namespace backus

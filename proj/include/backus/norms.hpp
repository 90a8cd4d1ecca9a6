#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "backus/common.hpp"
#include "backus/poly.hpp"

namespace backus {

/// Deterministic sample of points of the closed unit ball (rejection from the
/// cube, fixed seed), plus points of the sphere itself.
inline std::vector<Vec3> sample_ball_points(std::size_t n, std::uint64_t seed,
                                            bool include_boundary = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vec3> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    Vec3 x{unif(rng), unif(rng), unif(rng)};
    const double r = norm(x);
    if (r > 1.0 || r == 0.0) continue;
    if (include_boundary && pts.size() % 3 == 0) {
      pts.push_back((1.0 / r) * x);  // push to S
    } else {
      pts.push_back(x);
    }
  }
  return pts;
}

/// Pair-sampled Hoelder seminorm surrogate [f]_alpha over the closed ball.
template <typename Fn>
double holder_seminorm_surrogate(Fn&& f, double alpha, std::size_t n_pairs,
                                 std::uint64_t seed) {
  const std::vector<Vec3> pts = sample_ball_points(2 * n_pairs, seed);
  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const Vec3& a = pts[i];
    const Vec3& b = pts[i + 1];
    const double d = norm(a - b);
    if (d < 1e-12) continue;
    sup = std::max(sup, std::abs(f(a) - f(b)) / std::pow(d, alpha));
  }
  return sup;
}

struct HolderNorms {
  double sup_value = 0.0;
  double sup_grad = 0.0;
  double grad_holder = 0.0;
  double c1alpha() const { return sup_value + sup_grad + grad_holder; }
};

/// Discrete |.|_{1+alpha} surrogate for a polynomial on the closed ball:
/// node sup of value and gradient plus a pair-sampled gradient Hoelder
/// quotient. Fixed seed makes the monitor reproducible.
inline HolderNorms holder_c1alpha_surrogate(const Polynomial& p, double alpha = 0.5,
                                            std::size_t n_pairs = 10000,
                                            std::uint64_t seed = 42) {
  HolderNorms out;
  const std::array<Polynomial, 3> grad = p.gradient();
  const std::vector<Vec3> pts = sample_ball_points(2 * n_pairs, seed);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.sup_value = std::max(out.sup_value, std::abs(p.evaluate(pts[i])));
    const Vec3 g{grad[0].evaluate(pts[i]), grad[1].evaluate(pts[i]), grad[2].evaluate(pts[i])};
    out.sup_grad = std::max(out.sup_grad, norm(g));
  }
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const Vec3& a = pts[i];
    const Vec3& b = pts[i + 1];
    const double d = norm(a - b);
    if (d < 1e-12) continue;
    const Vec3 ga{grad[0].evaluate(a), grad[1].evaluate(a), grad[2].evaluate(a)};
    const Vec3 gb{grad[0].evaluate(b), grad[1].evaluate(b), grad[2].evaluate(b)};
    out.grad_holder = std::max(out.grad_holder, norm(ga - gb) / std::pow(d, alpha));
  }
  return out;
}

/// C^alpha surrogate (sup plus pair quotient) for a polynomial.
inline double c_alpha_surrogate(const Polynomial& p, double alpha = 0.5,
                                std::size_t n_pairs = 10000, std::uint64_t seed = 42) {
  double sup = 0.0;
  const std::vector<Vec3> pts = sample_ball_points(2 * n_pairs, seed);
  for (const Vec3& x : pts) sup = std::max(sup, std::abs(p.evaluate(x)));
  return sup + holder_seminorm_surrogate([&](const Vec3& x) { return p.evaluate(x); }, alpha,
                                         n_pairs, seed + 1);
}

}  // namespace backus

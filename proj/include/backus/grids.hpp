#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "backus/common.hpp"

namespace backus {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
/// Exact for polynomials of degree <= 2n - 1.
inline Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    // Enforce the symmetry of the rule exactly: pair node i with n-1-i.
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < n / 2; ++i) {
    const auto j = static_cast<std::size_t>(n - 1 - i);
    const auto ii = static_cast<std::size_t>(i);
    const double a = 0.5 * (r.nodes[j] - r.nodes[ii]);
    r.nodes[ii] = -a;
    r.nodes[j] = a;
    const double w = 0.5 * (r.weights[ii] + r.weights[j]);
    r.weights[ii] = r.weights[j] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times
/// uniform azimuth. Node set is closed under x3 -> -x3 (paired indices), and
/// the rule integrates restricted polynomials exactly up to the rule degree.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  std::vector<std::size_t> reflection;  // index of the x3-mirrored node

  std::size_t size() const { return nodes.size(); }

  /// Highest polynomial degree the rule integrates exactly on S.
  int exact_degree() const {
    // cos(theta) direction: 2*n_theta - 1; azimuth: trapezoid on n_phi points
    // is exact for trig degree n_phi - 1.
    return std::min(2 * n_theta - 1, n_phi - 1);
  }
};

inline SphereGrid build_sphere_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4)
    throw std::invalid_argument("build_sphere_grid: need n_theta >= 2, n_phi >= 4");
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  const Rule1D gl = gauss_legendre(n_theta);
  const std::size_t total = static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi);
  g.nodes.reserve(total);
  g.weights.reserve(total);
  g.reflection.resize(total);
  const double dphi = 2.0 * pi / n_phi;
  for (int it = 0; it < n_theta; ++it) {
    const double ct = gl.nodes[static_cast<std::size_t>(it)];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = ip * dphi;
      g.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct});
      g.weights.push_back(gl.weights[static_cast<std::size_t>(it)] * dphi);
    }
  }
  for (int it = 0; it < n_theta; ++it)
    for (int ip = 0; ip < n_phi; ++ip) {
      const std::size_t i = static_cast<std::size_t>(it) * static_cast<std::size_t>(n_phi) +
                            static_cast<std::size_t>(ip);
      const std::size_t j = static_cast<std::size_t>(n_theta - 1 - it) *
                                static_cast<std::size_t>(n_phi) +
                            static_cast<std::size_t>(ip);
      g.reflection[i] = j;
    }
  return g;
}

/// Polar quadrature on the open unit disk with radial nodes graded toward the
/// rim by r -> 1 - (1 - r)^grading. The grading absorbs integrands with the
/// (1 - |x'|)^{-1} blow-up of the equatorial trace derivative.
struct DiskGrid {
  int n_r = 0;
  int n_phi = 0;
  double grading = 1.0;
  std::vector<Vec2> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline DiskGrid build_disk_grid(int n_r, int n_phi, double grading = 2.0) {
  if (n_r < 2 || n_phi < 4)
    throw std::invalid_argument("build_disk_grid: need n_r >= 2, n_phi >= 4");
  if (grading < 1.0) throw std::invalid_argument("build_disk_grid: grading must be >= 1");
  DiskGrid g;
  g.n_r = n_r;
  g.n_phi = n_phi;
  g.grading = grading;
  const Rule1D gl = gauss_legendre(n_r);
  const double dphi = 2.0 * pi / n_phi;
  g.nodes.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_phi));
  g.weights.reserve(g.nodes.capacity());
  for (int ir = 0; ir < n_r; ++ir) {
    const double u = 0.5 * (gl.nodes[static_cast<std::size_t>(ir)] + 1.0);  // [0,1]
    const double wu = 0.5 * gl.weights[static_cast<std::size_t>(ir)];
    const double one_m_u = 1.0 - u;
    const double r = 1.0 - std::pow(one_m_u, grading);
    const double jac = grading * std::pow(one_m_u, grading - 1.0);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = ip * dphi;
      g.nodes.push_back({r * std::cos(phi), r * std::sin(phi)});
      g.weights.push_back(wu * jac * r * dphi);
    }
  }
  return g;
}

/// Gauss rule on the vertical segment from (x', 0) to (x', x3), signed so that
/// the weighted sum realizes integral_0^{x3}.
struct SegmentRule {
  Vec2 base{0.0, 0.0};
  double x3 = 0.0;
  std::vector<double> nodes;    // t values in [0, x3] (or [x3, 0])
  std::vector<double> weights;  // signed

  std::size_t size() const { return nodes.size(); }
};

inline SegmentRule build_segment_rule(const Vec2& base, double x3, int n_nodes = 12) {
  if (n_nodes < 1) throw std::invalid_argument("build_segment_rule: need n_nodes >= 1");
  SegmentRule s;
  s.base = base;
  s.x3 = x3;
  const Rule1D gl = gauss_legendre(n_nodes);
  s.nodes.resize(gl.nodes.size());
  s.weights.resize(gl.nodes.size());
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    s.nodes[i] = 0.5 * x3 * (gl.nodes[i] + 1.0);
    s.weights[i] = 0.5 * x3 * gl.weights[i];
  }
  return s;
}

struct SphereField {
  std::shared_ptr<const SphereGrid> grid;
  std::vector<double> values;
};

struct DiskField {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<double> values;
};

template <typename Fn>
SphereField make_sphere_field(std::shared_ptr<const SphereGrid> grid, Fn&& fn) {
  SphereField f;
  f.values.resize(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) f.values[i] = fn(grid->nodes[i]);
  f.grid = std::move(grid);
  return f;
}

template <typename Fn>
DiskField make_disk_field(std::shared_ptr<const DiskGrid> grid, Fn&& fn) {
  DiskField f;
  f.values.resize(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) f.values[i] = fn(grid->nodes[i]);
  f.grid = std::move(grid);
  return f;
}

inline double integrate(const SphereGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("integrate: value/node length mismatch");
  std::vector<double> prod(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) prod[i] = grid.weights[i] * values[i];
  return pairwise_sum(prod);
}

inline double integrate(const DiskGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("integrate: value/node length mismatch");
  std::vector<double> prod(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) prod[i] = grid.weights[i] * values[i];
  return pairwise_sum(prod);
}

inline double integrate(const SphereField& f) { return integrate(*f.grid, f.values); }
inline double integrate(const DiskField& f) { return integrate(*f.grid, f.values); }

}  // namespace backus

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "backus/common.hpp"
#include "backus/linearized.hpp"
#include "backus/norms.hpp"
#include "backus/spherical.hpp"

namespace backus {

/// Boundary datum g > 0 on S (and the equatorial level h for the
/// axisymmetric branch).
struct BoundaryData {
  enum class Kind { constant, manufactured, coefficients, tabulated };

  Kind kind = Kind::constant;
  Symmetry tag = Symmetry::even;
  double h = 0.0;
  std::function<double(const Vec3&)> eval;
  std::string name = "g";

  static BoundaryData constant(double c, Symmetry tag = Symmetry::even) {
    BoundaryData b;
    b.kind = Kind::constant;
    b.tag = tag;
    b.eval = [c](const Vec3&) { return c; };
    b.name = "constant";
    return b;
  }

  /// Nodal samples with admissibility checks: positivity at every node and
  /// the tagged symmetry within 1e-12 at paired nodes / azimuth rings.
  std::vector<double> values_on(const SphereGrid& grid) const {
    std::vector<double> v(grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      v[i] = eval(grid.nodes[i]);
      scale = std::max(scale, std::abs(v[i]));
      if (v[i] <= 0.0) throw std::domain_error("BoundaryData: g <= 0 at a sphere node");
    }
    const double tol = 1e-12 * std::max(1.0, scale);
    if (tag == Symmetry::even) {
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(v[i] - v[grid.reflection[i]]) > tol)
          throw std::domain_error("BoundaryData: even tag violated at paired nodes");
    } else if (tag == Symmetry::axisymmetric) {
      const auto n_phi = static_cast<std::size_t>(grid.n_phi);
      for (std::size_t ring = 0; ring < grid.size() / n_phi; ++ring) {
        const double ref = v[ring * n_phi];
        for (std::size_t ip = 1; ip < n_phi; ++ip)
          if (std::abs(v[ring * n_phi + ip] - ref) > tol)
            throw std::domain_error("BoundaryData: axisymmetric tag violated on a ring");
      }
    }
    return v;
  }
};

/// Smooth cut-off with exact plateaus: eta = 1 on |t| <= 1/3, eta = 0 on
/// |t| >= 2/3, exponential-bump transition in between (even, monotone on
/// [1/3, 2/3]).
inline double cutoff_eta(double t) {
  const double a = std::abs(t);
  if (a <= 1.0 / 3.0) return 1.0;
  if (a >= 2.0 / 3.0) return 0.0;
  const auto bump = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double s = 3.0 * (a - 1.0 / 3.0);  // in (0, 1)
  return bump(1.0 - s) / (bump(1.0 - s) + bump(s));
}

/// The gluing operator
///   J[phi](x) = eta(x3) phi(sqrt(1 - x3^2) e1', x3) + (1 - eta(x3)) phi(x).
/// For axisymmetric phi, J[phi] = phi on S.
inline std::function<double(const Vec3&)> glue_J(std::function<double(const Vec3&)> field) {
  return [field = std::move(field)](const Vec3& x) {
    const double eta = cutoff_eta(x[2]);
    if (eta == 0.0) return field(x);
    const double rim = std::sqrt(std::max(0.0, 1.0 - x[2] * x[2]));
    const double glued = field({rim, 0.0, x[2]});
    if (eta == 1.0) return glued;
    return eta * glued + (1.0 - eta) * field(x);
  };
}

/// Result of one application of T (or T-tilde): the sphere trace of |grad v|^2
/// reprojected to degree L, the exact interior polynomial, and the linearized
/// solve that produced them.
struct TResult {
  SphereExpansion trace;
  Polynomial interior;        // |grad v|^2 exactly
  LinearizedSolution sol;
  double truncation_tail = 0.0;  // sup-node norm of the part beyond degree L
};

namespace detail {

inline TResult project_grad_sq(const SphereBasis& basis, LinearizedSolution sol,
                               const std::function<double(const Vec3&)>& node_transform) {
  TResult out;
  out.interior = sol.grad_v[0] * sol.grad_v[0] + sol.grad_v[1] * sol.grad_v[1] +
                 sol.grad_v[2] * sol.grad_v[2];
  const SphereGrid& grid = basis.grid();
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    values[i] = node_transform ? node_transform(grid.nodes[i])
                               : out.interior.evaluate(grid.nodes[i]);
  out.trace = basis.project(values);
  const std::vector<double> synth = basis.synthesize_values(out.trace);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.truncation_tail = std::max(out.truncation_tail, std::abs(values[i] - synth[i]));
  out.sol = std::move(sol);
  return out;
}

}  // namespace detail

/// T[phi] = |grad v|^2 where v solves the linearized problem with psi = 0.
/// The theory restricts T to even data; set enforce_even = false to probe the
/// operator outside the tagged subspace.
inline TResult operator_T(const SphereBasis& basis, const SphereExpansion& phi,
                          bool enforce_even = true, double symmetry_tol = 1e-10) {
  if (enforce_even && phi.even_violation() > symmetry_tol)
    throw std::domain_error("operator_T: phi has an odd component above tolerance");
  TResult out = detail::project_grad_sq(basis, solve_linearized(basis, phi), nullptr);
  out.trace.even_tag = true;
  out.trace = project_symmetry(out.trace, Symmetry::even);
  return out;
}

/// T-tilde_psi[phi] = J[|grad v|^2] with constant psi = h; equals |grad v|^2
/// on S for axisymmetric data.
inline TResult operator_T_tilde(const SphereBasis& basis, const SphereExpansion& phi,
                                double h, double symmetry_tol = 1e-10) {
  if (phi.axisym_violation() > symmetry_tol)
    throw std::domain_error("operator_T_tilde: phi has azimuthal modes above tolerance");
  LinearizedSolution sol = solve_linearized(basis, phi, RimFourier::constant(h));
  const Polynomial gsq = sol.grad_v[0] * sol.grad_v[0] + sol.grad_v[1] * sol.grad_v[1] +
                         sol.grad_v[2] * sol.grad_v[2];
  const auto glued = glue_J([&gsq](const Vec3& x) { return gsq.evaluate(x); });
  TResult out = detail::project_grad_sq(basis, std::move(sol), glued);
  out.trace = project_symmetry(out.trace, Symmetry::axisymmetric);
  return out;
}

enum class SolveMode { odd, axisymmetric };

/// One contraction step Psi_g[phi] = (g^2 - 1 - T[phi]) / 2 (or the
/// axisymmetric variant with T-tilde), given the projected datum g^2 - 1.
inline SphereExpansion psi_step(const SphereBasis& basis, const SphereExpansion& gsq_minus_1,
                                const SphereExpansion& phi, SolveMode mode, double h = 0.0) {
  const TResult t = (mode == SolveMode::odd) ? operator_T(basis, phi)
                                             : operator_T_tilde(basis, phi, h);
  SphereExpansion next = gsq_minus_1;
  next -= t.trace;
  next *= 0.5;
  return project_symmetry(next, mode == SolveMode::odd ? Symmetry::even
                                                       : Symmetry::axisymmetric);
}

struct FixedPointConfig {
  double tol = 1e-10;          // step tolerance, expansion sup-coefficient norm
  int max_iter = 50;
  double lambda_target = 0.9;  // monitored contraction target
  double alpha = 0.5;          // Hoelder exponent of the norm monitors
  std::uint64_t seed = 42;
  std::size_t holder_pairs = 10000;
  double smallness_warning = 0.5;  // |g - 1| sup level that triggers a warning
  const SphereExpansion* initial = nullptr;  // default: phi_0 = 0
};

struct FixedPointReport {
  std::vector<double> iterate_norms;
  std::vector<double> step_norms;
  std::vector<double> contraction_ratios;
  std::vector<double> truncation_tails;
  double lambda_target = 0.9;
  bool converged = false;
  int iterations = 0;
  bool smallness_warning = false;
  double g_minus_1_sup = 0.0;        // node sup of |g - 1|
  double gsq_minus_1_sup = 0.0;      // node sup of |g^2 - 1|
  double c0_factorization = 0.0;     // |g^2-1| / ((|g-1| + 2) |g-1|)
  double c1_quadratic_bound = 0.0;   // max |T[phi]| / |phi|^2 over the run
  double boundary_identity_sup = 0.0;  // max over nodes of ||grad u|^2 - g^2|
  HolderNorms v_holder;                // |.|_{1+alpha} surrogate of v
};

struct FixedPointResult {
  Polynomial u;  // x3 + v; for the axisymmetric branch v carries the level h
  Polynomial v;
  SphereExpansion phi_fixed;
  LinearizedSolution lin;
  FixedPointReport report;
};

/// Thrown when the iteration exhausts max_iter; carries the partial report.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string msg, FixedPointReport report)
      : std::runtime_error(std::move(msg)), report(std::move(report)) {}
  FixedPointReport report;
};

/// End-to-end Backus solve: iterate phi_{k+1} = Psi_g[phi_k] from phi_0 = 0
/// and return u = x3 + v at the fixed point.
inline FixedPointResult fixed_point_solve(const SphereBasis& basis, const BoundaryData& g,
                                          SolveMode mode,
                                          const FixedPointConfig& config = {}) {
  const SphereGrid& grid = basis.grid();
  const std::vector<double> g_nodes = g.values_on(grid);

  FixedPointReport report;
  report.lambda_target = config.lambda_target;
  std::vector<double> gsq1_nodes(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    gsq1_nodes[i] = g_nodes[i] * g_nodes[i] - 1.0;
    report.g_minus_1_sup = std::max(report.g_minus_1_sup, std::abs(g_nodes[i] - 1.0));
    report.gsq_minus_1_sup = std::max(report.gsq_minus_1_sup, std::abs(gsq1_nodes[i]));
  }
  if (report.g_minus_1_sup > 0.0)
    report.c0_factorization =
        report.gsq_minus_1_sup / ((report.g_minus_1_sup + 2.0) * report.g_minus_1_sup);
  report.smallness_warning = report.g_minus_1_sup > config.smallness_warning;

  const Symmetry sym = (mode == SolveMode::odd) ? Symmetry::even : Symmetry::axisymmetric;
  const SphereExpansion gsq_minus_1 = project_symmetry(basis.project(gsq1_nodes), sym);

  SphereExpansion phi =
      config.initial ? project_symmetry(*config.initial, sym) : SphereExpansion::zero(basis.L());
  const double h = (mode == SolveMode::axisymmetric) ? g.h : 0.0;

  double prev_step = -1.0;
  for (int k = 0; k < config.max_iter; ++k) {
    const TResult t = (mode == SolveMode::odd) ? operator_T(basis, phi)
                                               : operator_T_tilde(basis, phi, h);
    const double phi_norm = phi.sup_coeff_norm();
    if (phi_norm > 0.0)
      report.c1_quadratic_bound =
          std::max(report.c1_quadratic_bound, t.trace.sup_coeff_norm() / (phi_norm * phi_norm));
    SphereExpansion next = gsq_minus_1;
    next -= t.trace;
    next *= 0.5;
    next = project_symmetry(next, sym);

    SphereExpansion diff = next;
    diff -= phi;
    const double step = diff.sup_coeff_norm();
    report.iterate_norms.push_back(next.sup_coeff_norm());
    report.step_norms.push_back(step);
    report.truncation_tails.push_back(t.truncation_tail);
    if (prev_step > 0.0) report.contraction_ratios.push_back(step / prev_step);
    prev_step = step;
    phi = std::move(next);
    report.iterations = k + 1;
    if (step <= config.tol) {
      report.converged = true;
      break;
    }
    if (!std::isfinite(step) || step > 1e12)
      throw DivergenceError("fixed_point_solve: iteration diverged", report);
  }
  if (!report.converged)
    throw DivergenceError("fixed_point_solve: no convergence within max_iter", report);

  FixedPointResult result;
  result.phi_fixed = phi;
  result.lin = solve_linearized(basis, phi,
                                mode == SolveMode::axisymmetric ? RimFourier::constant(h)
                                                                : RimFourier{});
  result.v = result.lin.v;
  result.u = result.v + Polynomial::variable(2);

  const std::array<Polynomial, 3> grad_u = result.u.gradient();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& y = grid.nodes[i];
    const Vec3 gu{grad_u[0].evaluate(y), grad_u[1].evaluate(y), grad_u[2].evaluate(y)};
    const double identity = std::abs(dot(gu, gu) - g_nodes[i] * g_nodes[i]);
    report.boundary_identity_sup = std::max(report.boundary_identity_sup, identity);
  }
  report.v_holder =
      holder_c1alpha_surrogate(result.v, config.alpha, config.holder_pairs, config.seed);
  result.report = std::move(report);
  return result;
}

}  // namespace backus

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <memory>
#include <random>

#include "backus/linearized.hpp"

using namespace backus;

namespace {

SphereExpansion project_fn(const SphereBasis& basis,
                           const std::function<double(const Vec3&)>& fn) {
  std::vector<double> vals(basis.grid().size());
  for (std::size_t k = 0; k < basis.grid().size(); ++k) vals[k] = fn(basis.grid().nodes[k]);
  return basis.project(vals);
}

}  // namespace

TEST_CASE("closed-form linearized solutions", "[linearized]") {
  const SphereBasis basis = make_default_basis(4);
  {
    const LinearizedSolution sol =
        solve_linearized(basis, project_fn(basis, [](const Vec3&) { return 1.0; }));
    CHECK((sol.v - Polynomial::variable(2)).max_abs_coeff() <= 1e-10);
    CHECK(sol.residuals.harmonicity <= 1e-12);
    CHECK(sol.residuals.boundary_sup <= 1e-12);
    CHECK(sol.residuals.equator_sup <= 1e-12);
  }
  {
    const LinearizedSolution sol =
        solve_linearized(basis, project_fn(basis, [](const Vec3& y) { return y[2]; }));
    const Polynomial ref = Polynomial::monomial(0, 0, 2, 0.5) + Polynomial::constant(0.25) +
                           Polynomial::monomial(2, 0, 0, -0.25) +
                           Polynomial::monomial(0, 2, 0, -0.25);
    CHECK((sol.v - ref).max_abs_coeff() <= 1e-10);
    CHECK(std::abs(sol.v.evaluate({0.0, 0.0, 0.0}) - 0.25) <= 1e-12);
  }
  {  // additive constant through psi
    const LinearizedSolution sol =
        solve_linearized(basis, project_fn(basis, [](const Vec3&) { return 1.0; }),
                         RimFourier::constant(0.3));
    CHECK((sol.v - (Polynomial::variable(2) + Polynomial::constant(0.3))).max_abs_coeff() <=
          1e-10);
  }
}

TEST_CASE("structural identities of the solution", "[linearized]") {
  const SphereBasis basis = make_default_basis(6);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SphereExpansion phi = SphereExpansion::zero(6);
  for (double& c : phi.coeffs) c = u(rng);
  const LinearizedSolution sol = solve_linearized(basis, phi, RimFourier::constant(0.2));
  // d3 v = w exactly on coefficients.
  CHECK((sol.v.derivative(2) - sol.w).max_abs_coeff() <=
        1e-11 * std::max(1.0, sol.w.max_abs_coeff()));
  // v(x', 0) = Z(x'): W vanishes on the plane.
  CHECK((sol.v.at_x3_zero() - sol.Z_poly.at_x3_zero()).max_abs_coeff() <=
        1e-11 * std::max(1.0, sol.Z_poly.max_abs_coeff()));
  CHECK(sol.residuals.harmonicity <= 1e-10 * std::max(1.0, sol.v.max_abs_coeff()));
  CHECK(sol.residuals.boundary_sup <= 1e-9);
  CHECK(sol.residuals.equator_sup <= 1e-9);
}

TEST_CASE("symmetry inheritance", "[linearized]") {
  const SphereBasis basis = make_default_basis(6);
  {  // even phi, psi = 0: v is odd at the coefficient level
    SphereExpansion phi = SphereExpansion::zero(6);
    phi.at(2, 2) = 0.7;
    phi.at(0, 0) = 0.4;
    phi = project_symmetry(phi, Symmetry::even);
    const LinearizedSolution sol = solve_linearized(basis, phi);
    CHECK((sol.v + sol.v.reflect_x3()).is_zero());
    CHECK(sol.v.at_x3_zero().is_zero());
  }
  {  // axisymmetric phi, constant psi: rotation invariance within 1e-10
    SphereExpansion phi = SphereExpansion::zero(6);
    phi.at(1, 0) = 0.8;
    phi.at(3, 0) = -0.2;
    const LinearizedSolution sol = solve_linearized(basis, phi, RimFourier::constant(0.1));
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int rot = 1; rot <= 8; ++rot) {
      const double a = 2.0 * pi * rot / 8.0 + 0.1;
      const Vec3 x{u(rng), u(rng), u(rng)};
      const Vec3 rx{std::cos(a) * x[0] - std::sin(a) * x[1],
                    std::sin(a) * x[0] + std::cos(a) * x[1], x[2]};
      CHECK(std::abs(sol.v.evaluate(rx) - sol.v.evaluate(x)) <= 1e-10);
    }
  }
}

TEST_CASE("kernel-path evaluation", "[linearized]") {
  const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(32, 64));
  const auto disk = std::make_shared<DiskGrid>(build_disk_grid(48, 96, 2.0));
  {  // phi = y3, psi = 0 at the origin -> 0.25
    std::vector<double> phi(sphere->size());
    for (std::size_t k = 0; k < sphere->size(); ++k) phi[k] = sphere->nodes[k][2];
    const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 0.0; });
    CHECK(std::abs(kp.evaluate({0.0, 0.0, 0.0}) - 0.25) <= 2e-3);
  }
  {  // phi == 1 -> v = x3
    std::vector<double> phi(sphere->size(), 1.0);
    const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 0.0; });
    CHECK(std::abs(kp.evaluate({0.2, 0.0, 0.3}) - 0.3) <= 2e-3);
  }
  {  // phi = 0, psi == 1 -> v == 1
    std::vector<double> phi(sphere->size(), 0.0);
    const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 1.0; });
    CHECK(std::abs(kp.evaluate({0.5, 0.0, 0.0}) - 1.0) <= 1e-6);
    CHECK_THROWS_AS(kp.evaluate({1.0, 0.0, 0.0}), std::domain_error);
  }
}

TEST_CASE("kernel-path near-boundary extrapolation", "[linearized]") {
  const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(32, 64));
  const auto disk = std::make_shared<DiskGrid>(build_disk_grid(48, 96, 2.0));
  std::vector<double> phi(sphere->size(), 1.0);
  const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 0.0; });
  // v = x3 at the boundary point (0, 0, 1) is 1. Sample radii 0.95 and 0.9
  // keep the kernel peak wider than the grid spacing; the extrapolation error
  // is O(eps^2) ~ 2.5e-3.
  CHECK(std::abs(kp.evaluate_near_boundary({0.0, 0.0, 1.0}, 0.05) - 1.0) <= 5e-3);
}

TEST_CASE("harmonicity residuals", "[linearized]") {
  CHECK(harmonic_residual(Polynomial::variable(2)) == 0.0);
  const Polynomial v = Polynomial::monomial(0, 0, 2, 0.5) + Polynomial::constant(0.25) +
                       Polynomial::monomial(2, 0, 0, -0.25) + Polynomial::monomial(0, 2, 0, -0.25);
  CHECK(harmonic_residual(v) <= 1e-12);

  // Kernel-path FD residual drops by >= 4x per grid doubling (phi = y1 y3).
  const std::vector<Vec3> probes = probe_lattice(5, 0.6);
  double prev = -1.0;
  for (int n : {16, 32}) {
    const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(n, 2 * n));
    const auto disk = std::make_shared<DiskGrid>(build_disk_grid(n, 2 * n, 2.0));
    std::vector<double> phi(sphere->size());
    for (std::size_t k = 0; k < sphere->size(); ++k)
      phi[k] = sphere->nodes[k][0] * sphere->nodes[k][2];
    const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 0.0; });
    const double res = harmonic_residual_fd([&kp](const Vec3& x) { return kp.evaluate(x); },
                                            probes, 5e-2);
    if (prev > 0.0) CHECK(res <= prev / 4.0);
    prev = res;
  }
}

TEST_CASE("omega quotient", "[linearized]") {
  const SphereBasis basis = make_default_basis(4);
  {  // v = x3 (phi == 1): omega == 1
    const LinearizedSolution sol =
        solve_linearized(basis, project_fn(basis, [](const Vec3&) { return 1.0; }));
    CHECK((omega_quotient(sol).omega - Polynomial::constant(1.0)).max_abs_coeff() <= 1e-10);
  }
  {  // even phi = y1 y3 data gives odd v with v = x1 x3 + odd corrections
    LinearizedSolution sol;
    sol.v = Polynomial::variable(0) * Polynomial::variable(2);
    CHECK((omega_quotient(sol).omega - Polynomial::variable(0)).is_zero());
  }
  {  // nonvanishing plane trace is rejected
    LinearizedSolution sol;
    sol.v = Polynomial::variable(0);
    CHECK_THROWS_AS(omega_quotient(sol), std::domain_error);
  }
}

TEST_CASE("a priori estimate surrogate over random data", "[linearized]") {
  const SphereBasis basis = make_default_basis(5);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Vec3> probes = probe_lattice(6, 0.9);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SphereExpansion phi = SphereExpansion::zero(5);
    for (double& c : phi.coeffs) c = u(rng);
    const double h = u(rng);
    const LinearizedSolution sol = solve_linearized(basis, phi, RimFourier::constant(h));
    double lhs = 0.0;
    const Polynomial d3v = sol.grad_v[2];
    const Polynomial d11 = sol.v.derivative(0).derivative(0);
    const Polynomial d12 = sol.v.derivative(0).derivative(1);
    const Polynomial d22 = sol.v.derivative(1).derivative(1);
    for (const Vec3& x : probes) {
      const double hess = std::max({std::abs(d11.evaluate(x)), std::abs(d12.evaluate(x)),
                                    std::abs(d22.evaluate(x))});
      lhs = std::max(lhs, std::abs(sol.v.evaluate(x)) + std::abs(d3v.evaluate(x)) +
                              std::abs(x[2]) * hess);
    }
    const double data = phi.sup_coeff_norm() + std::abs(h);
    worst_ratio = std::max(worst_ratio, lhs / data);
  }
  CHECK(worst_ratio < 100.0);  // empirical C, stable at this resolution
}

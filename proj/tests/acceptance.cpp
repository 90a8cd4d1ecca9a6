// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are phrased against closed forms, manufactured ground
// truth, and cross-path agreement; tolerances are stated inline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "backus/backus.hpp"

using namespace backus;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SphereExpansion project_fn(const SphereBasis& basis,
                           const std::function<double(const Vec3&)>& fn) {
  std::vector<double> vals(basis.grid().size());
  for (std::size_t k = 0; k < basis.grid().size(); ++k) vals[k] = fn(basis.grid().nodes[k]);
  return basis.project(vals);
}

Vec3 random_interior(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vec3 x{u(rng), u(rng), u(rng)};
    const double r = norm(x);
    if (r < rmax && r > 1e-3) return x;
  }
}

// ---- criterion 1: closed-form linearized solves on both paths -------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SphereBasis basis = make_default_basis(4);
  const LinearizedSolution s1 =
      solve_linearized(basis, project_fn(basis, [](const Vec3&) { return 1.0; }));
  const double e1 = (s1.v - Polynomial::variable(2)).max_abs_coeff();

  const LinearizedSolution s2 =
      solve_linearized(basis, project_fn(basis, [](const Vec3& y) { return y[2]; }));
  const Polynomial ref = Polynomial::monomial(0, 0, 2, 0.5) + Polynomial::constant(0.25) +
                         Polynomial::monomial(2, 0, 0, -0.25) +
                         Polynomial::monomial(0, 2, 0, -0.25);
  const double e2 = (s2.v - ref).max_abs_coeff();

  const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(64, 128));
  const auto disk = std::make_shared<DiskGrid>(build_disk_grid(64, 128, 2.0));
  std::vector<double> ones(sphere->size(), 1.0), yn(sphere->size());
  for (std::size_t k = 0; k < sphere->size(); ++k) yn[k] = sphere->nodes[k][2];
  const KernelPathEvaluator k1(sphere, disk, ones, [](double) { return 0.0; });
  const KernelPathEvaluator k2(sphere, disk, yn, [](double) { return 0.0; });
  std::mt19937_64 rng(42);
  double kerr = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = random_interior(rng, 0.85);
    kerr = std::max(kerr, std::abs(k1.evaluate(x) - x[2]));
    const double r2 = x[2] * x[2] / 2.0 + (1.0 - x[0] * x[0] - x[1] * x[1]) / 4.0;
    kerr = std::max(kerr, std::abs(k2.evaluate(x) - r2));
  }
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << "spectral errors " << e1 << ", " << e2 << "; kernel-path error " << kerr << "; " << dt
    << " s";
  report(1, "closed-form linearized solves", e1 <= 1e-10 && e2 <= 1e-10 && kerr <= 2e-3 &&
                                                 dt < 30.0, d.str());
}

// ---- criterion 2: harmonicity on both paths -------------------------------

void criterion_2() {
  const SphereBasis basis = make_default_basis(12);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SphereExpansion phi = SphereExpansion::zero(12);
    for (double& c : phi.coeffs) c = u(rng);
    const LinearizedSolution sol = solve_linearized(basis, phi);
    worst = std::max(worst, sol.v.laplacian().max_abs_coeff() /
                                std::max(1.0, sol.v.max_abs_coeff()));
  }

  const std::vector<Vec3> probes = probe_lattice(5, 0.6);
  std::vector<double> residuals;
  for (int n : {16, 32}) {
    const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(n, 2 * n));
    const auto disk = std::make_shared<DiskGrid>(build_disk_grid(n, 2 * n, 2.0));
    std::vector<double> phi(sphere->size());
    for (std::size_t k = 0; k < sphere->size(); ++k)
      phi[k] = sphere->nodes[k][0] * sphere->nodes[k][2];
    const KernelPathEvaluator kp(sphere, disk, phi, [](double) { return 0.0; });
    residuals.push_back(harmonic_residual_fd(
        [&kp](const Vec3& x) { return kp.evaluate(x); }, probes, 5e-2));
  }
  const double gain = residuals[0] / residuals[1];
  std::ostringstream d;
  d << "spectral Laplacian (scaled) " << worst << "; FD residual gain per doubling " << gain;
  report(2, "harmonicity", worst <= 1e-12 && gain >= 4.0, d.str());
}

// ---- criterion 3: dual-path agreement --------------------------------------

void criterion_3() {
  const SphereBasis basis = make_default_basis(4);
  const auto sphere = basis.grid_ptr();
  const auto disk = std::make_shared<DiskGrid>(build_disk_grid(48, 96, 2.0));
  // The kernel path needs its own, finer sphere rule than the basis grid.
  const auto ksphere = std::make_shared<SphereGrid>(build_sphere_grid(48, 96));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int data = 0; data < 10; ++data) {
    SphereExpansion phi = SphereExpansion::zero(4);
    for (int l = 0; l <= 4; ++l)
      for (int m = -l; m <= l; ++m) phi.at(l, m) = u(rng) / ((l + 1.0) * (l + 1.0));
    RimFourier psi{0.3 * u(rng), {0.2 * u(rng)}, {0.2 * u(rng)}};
    const LinearizedSolution sol = solve_linearized(basis, phi, psi);

    const Polynomial wtrace = basis.synthesize_poly(phi);
    std::vector<double> phi_vals(ksphere->size());
    for (std::size_t k = 0; k < ksphere->size(); ++k)
      phi_vals[k] = wtrace.evaluate(ksphere->nodes[k]);
    const KernelPathEvaluator kp(ksphere, disk, phi_vals,
                                 [psi](double th) { return psi.evaluate(th); });
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = random_interior(rng, 0.85);
      worst = std::max(worst, std::abs(kp.evaluate(x) - sol.v.evaluate(x)));
    }
  }
  std::ostringstream d;
  d << "max |spectral - kernel| = " << worst << " over 100 points, 10 data";
  report(3, "dual-path agreement", worst <= 1e-3, d.str());
}

// ---- criteria 4-8 share the end-to-end runs --------------------------------

FixedPointResult* odd_run = nullptr;
FixedPointResult* axi_run = nullptr;

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const SphereBasis basis = make_default_basis(8);
  const ManufacturedCase mc = make_manufactured(manufactured_q_odd(), 0.05, SolveMode::odd);
  static FixedPointResult res = fixed_point_solve(basis, mc.g, SolveMode::odd);
  odd_run = &res;
  double err = 0.0;
  for (const Vec3& y : basis.grid().nodes)
    err = std::max(err, std::abs(res.u.evaluate(y) - mc.u_exact.poly.evaluate(y)));
  double ratio = 0.0;
  for (double r : res.report.contraction_ratios) ratio = std::max(ratio, r);
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << "sup error " << err << "; iterations " << res.report.iterations << "; max ratio "
    << ratio << "; " << dt << " s";
  report(4, "end-to-end odd branch",
         err <= 1e-6 && res.report.iterations <= 20 && ratio <= 0.5 && dt < 60.0, d.str());
}

void criterion_5() {
  const SphereBasis basis = make_default_basis(8);
  const ManufacturedCase mc =
      make_manufactured(manufactured_q_axisym(), 0.05, SolveMode::axisymmetric);
  static FixedPointResult res = fixed_point_solve(basis, mc.g, SolveMode::axisymmetric);
  axi_run = &res;
  double err = 0.0;
  for (const Vec3& y : basis.grid().nodes)
    err = std::max(err, std::abs(res.u.evaluate(y) - mc.u_exact.poly.evaluate(y)));
  double rim = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double th = 2.0 * pi * i / 256;
    rim = std::max(rim, std::abs(res.u.evaluate({std::cos(th), std::sin(th), 0.0}) - mc.h));
  }
  std::ostringstream d;
  d << "sup error " << err << "; rim |u - h| " << rim;
  report(5, "end-to-end axisymmetric branch", err <= 1e-5 && rim <= 1e-8, d.str());
}

void criterion_6() {
  const SphereBasis basis = make_default_basis(4);
  const FixedPointResult triv =
      fixed_point_solve(basis, BoundaryData::constant(1.0), SolveMode::odd);
  double worst = triv.report.boundary_identity_sup;
  if (odd_run) worst = std::max(worst, odd_run->report.boundary_identity_sup);
  if (axi_run) worst = std::max(worst, axi_run->report.boundary_identity_sup);
  std::ostringstream d;
  d << "max | |grad u|^2 - g^2 | = " << worst << " vs 10 x tol = 1e-9";
  report(6, "boundary identity at the fixed point", worst <= 1e-9, d.str());
}

void criterion_7() {
  bool pass = true;
  std::ostringstream d;
  if (odd_run) {
    const bool odd_ok = (odd_run->v + odd_run->v.reflect_x3()).is_zero() &&
                        odd_run->u.at_x3_zero().is_zero();
    d << "odd-part of v exactly zero: " << (odd_ok ? "yes" : "no");
    pass = pass && odd_ok;
  }
  if (axi_run) {
    const double m_modes = axi_run->phi_fixed.axisym_violation();
    d << "; axisym m != 0 modes " << m_modes;
    pass = pass && m_modes <= 1e-12;
  }
  const SphereBasis basis = make_default_basis(4);
  const FixedPointResult triv =
      fixed_point_solve(basis, BoundaryData::constant(1.0), SolveMode::odd);
  const double triv_res = (triv.u - Polynomial::variable(2)).max_abs_coeff();
  d << "; g == 1 residual " << triv_res;
  pass = pass && triv_res <= 1e-12;
  report(7, "symmetry invariants", pass, d.str());
}

void criterion_8() {
  const SphereBasis basis = make_default_basis(8);
  const ManufacturedCase mc = make_manufactured(manufactured_q_odd(), 0.05, SolveMode::odd);
  const FixedPointResult from_zero = fixed_point_solve(basis, mc.g, SolveMode::odd);
  // Second start: the exact fixed point perturbed by 1e-3 in an even mode.
  SphereExpansion start = project_symmetry(
      basis.project([&] {
        std::vector<double> vals(basis.grid().size());
        for (std::size_t k = 0; k < vals.size(); ++k)
          vals[k] = mc.phi_star.evaluate(basis.grid().nodes[k]);
        return vals;
      }()),
      Symmetry::even);
  start.at(2, 0) += 1e-3;
  start.at(1, 1) += 1e-3;
  FixedPointConfig cfg;
  cfg.initial = &start;
  const FixedPointResult from_star = fixed_point_solve(basis, mc.g, SolveMode::odd, cfg);
  const double gap = (from_zero.phi_fixed - from_star.phi_fixed).sup_coeff_norm();
  std::ostringstream d;
  d << "coefficient gap between initializations " << gap;
  report(8, "uniqueness probe", gap <= 1e-8, d.str());
}

void criterion_9() {
  bool pass = true;
  std::ostringstream d;
  d << "1/(2 kappa) relative errors:";
  for (double kappa : {0.5, 1.0, 2.0}) {
    const IntegralLemmaResult r = check_integral_lemma(kappa, 0.999);
    const double rel = std::abs(r.value - r.limit) / r.limit;
    d << " " << rel;
    pass = pass && rel <= 0.01;
  }
  const SphereGrid grid = build_sphere_grid(48, 96);
  const DecayReport rep = check_derivative_decay(
      grid, [](const Vec3& y) { return y[0] * y[2]; },
      [](const Vec3& y) { return Vec3{y[2], 0.0, y[0]}; }, 0.5, 2);
  d << "; weighted D^2 sups";
  for (double s : rep.weighted_sup) d << " " << s;
  pass = pass && rep.bounded(2.0);
  report(9, "estimate checkers", pass, d.str());
}

void criterion_10() {
  const std::string cli = BACKUS_CLI_PATH;
  const fs::path a = fs::temp_directory_path() / "backus_accept_det_a";
  const fs::path b = fs::temp_directory_path() / "backus_accept_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const int rc1 =
      std::system((cli + " verify --L 6 --seed 42 --out " + a.string() + " > /dev/null").c_str());
  const int rc2 =
      std::system((cli + " verify --L 6 --seed 42 --out " + b.string() + " > /dev/null").c_str());
  const bool ok = WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0 &&
                  slurp(a / "report.json") == slurp(b / "report.json") &&
                  !slurp(a / "report.json").empty();
  std::ostringstream d;
  d << "verify exit codes " << WEXITSTATUS(rc1) << "/" << WEXITSTATUS(rc2)
    << ", reports byte-identical: " << (ok ? "yes" : "no");
  report(10, "determinism of repeated verify runs", ok, d.str());
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}

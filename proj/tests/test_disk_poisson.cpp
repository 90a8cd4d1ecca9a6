#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <memory>
#include <random>

#include "backus/disk_poisson.hpp"

using namespace backus;

TEST_CASE("spectral disk solve, closed forms", "[disk]") {
  {  // rhs == 1 -> (1 - r^2)/4
    const DiskPoly z = solve_disk_spectral(Polynomial::constant(1.0), RimFourier{});
    const Polynomial ref = Polynomial::constant(0.25) + Polynomial::monomial(2, 0, 0, -0.25) +
                           Polynomial::monomial(0, 2, 0, -0.25);
    CHECK((z.to_polynomial() - ref).max_abs_coeff() <= 1e-14);
  }
  {  // rhs == 0, psi == h -> Z == h
    const DiskPoly z = solve_disk_spectral(Polynomial(), RimFourier::constant(0.7));
    CHECK((z.to_polynomial() - Polynomial::constant(0.7)).max_abs_coeff() <= 1e-14);
  }
  {  // rhs = x1 -> x1 (1 - r^2)/8
    const DiskPoly z = solve_disk_spectral(Polynomial::variable(0), RimFourier{});
    const Polynomial r2 = Polynomial::monomial(2, 0, 0, 1.0) + Polynomial::monomial(0, 2, 0, 1.0);
    const Polynomial ref = 0.125 * (Polynomial::variable(0) *
                                    (Polynomial::constant(1.0) - r2));
    CHECK((z.to_polynomial() - ref).max_abs_coeff() <= 1e-14);
  }
}

TEST_CASE("spectral residual and rim trace for random rhs", "[disk]") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial rhs;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j) rhs.add_term({i, j, 0}, u(rng));
    const RimFourier psi{u(rng), {u(rng), u(rng)}, {u(rng)}};
    const DiskPoly z = solve_disk_spectral(rhs, psi);
    const Polynomial zp = z.to_polynomial();
    CHECK((zp.laplacian() + rhs).max_abs_coeff() <= 1e-12);  // -Delta Z = rhs exactly
    double rim = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double th = 2.0 * pi * i / 256;
      rim = std::max(rim, std::abs(zp.evaluate({std::cos(th), std::sin(th), 0.0}) -
                                   psi.evaluate(th)));
    }
    CHECK(rim <= 1e-12);
  }
}

TEST_CASE("maximum principle probe", "[disk]") {
  // rhs = 1 + x1 >= 0 on D, psi = 0 -> Z >= 0.
  const DiskPoly z =
      solve_disk_spectral(Polynomial::constant(1.0) + Polynomial::variable(0), RimFourier{});
  const DiskGrid grid = build_disk_grid(24, 48);
  for (const Vec2& x : grid.nodes) CHECK(z.evaluate_xy(x) >= -1e-12);
}

TEST_CASE("polar-polynomial round trip", "[disk]") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial p;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) p.add_term({i, j, 0}, u(rng));
  const Polynomial back = DiskPoly::from_polynomial(p).to_polynomial();
  CHECK((back - p).max_abs_coeff() <= 1e-13);
  CHECK_THROWS_AS(DiskPoly::from_polynomial(Polynomial::variable(2)), std::invalid_argument);
}

TEST_CASE("Green's-function path", "[disk]") {
  const auto grid = std::make_shared<DiskGrid>(build_disk_grid(64, 128, 2.0));
  {
    const DiskField rhs = make_disk_field(grid, [](const Vec2&) { return 1.0; });
    const double z0 = solve_disk_green(rhs, [](double) { return 0.0; }, {0.0, 0.0});
    CHECK(std::abs(z0 - 0.25) <= 1e-4);
  }
  {
    const DiskField rhs = make_disk_field(grid, [](const Vec2&) { return 0.0; });
    const double z = solve_disk_green(rhs, [](double th) { return std::cos(th); }, {0.5, 0.0});
    CHECK(std::abs(z - 0.5) <= 1e-6);
  }
  CHECK_THROWS_AS(solve_disk_green(make_disk_field(grid, [](const Vec2&) { return 0.0; }),
                                   [](double) { return 0.0; }, {1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("dual-path agreement on the disk", "[disk]") {
  const auto grid = std::make_shared<DiskGrid>(build_disk_grid(64, 128, 2.0));
  const DiskField rhs = make_disk_field(grid, [](const Vec2& x) { return x[0]; });
  const DiskPoly z = solve_disk_spectral(Polynomial::variable(0), RimFourier{});
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-0.65, 0.65);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 x{u(rng), u(rng)};
    const double green = solve_disk_green(rhs, [](double) { return 0.0; }, x);
    worst = std::max(worst, std::abs(green - z.evaluate_xy(x)));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("mode guards", "[disk]") {
  DiskPoly p;
  CHECK_THROWS_AS(p.add(-1, false, 0, 1.0), std::invalid_argument);
  p.add(2, false, 1, 1.0);  // k < m: not a polynomial mode
  CHECK_THROWS_AS(p.to_polynomial(), std::domain_error);
}

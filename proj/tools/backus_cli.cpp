// Command-line front end: parse a run configuration, dispatch solves and
// verification suites, and emit machine-readable JSON/CSV artifacts.
//
// Exit codes: 0 success, 1 verification failures, 2 configuration error,
// 3 file I/O error, 4 fixed-point divergence.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "backus/backus.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace backus;

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDiverged = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

json poly_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms()) terms.push_back({k[0], k[1], k[2], c});
  return terms;
}

json expansion_to_json(const SphereExpansion& e) {
  json out = json::array();
  for (int l = 0; l <= e.L; ++l)
    for (int m = -l; m <= l; ++m)
      if (e.at(l, m) != 0.0) out.push_back({l, m, e.at(l, m)});
  return out;
}

SolveMode parse_mode(const std::string& s) {
  if (s == "odd") return SolveMode::odd;
  if (s == "axisym" || s == "axisymmetric") return SolveMode::axisymmetric;
  throw ConfigError("mode must be odd or axisym");
}

struct RunConfig {
  int L = 8;
  SolveMode mode = SolveMode::odd;
  double tol = 1e-10;
  int max_iter = 50;
  double alpha = 0.5;
  double h = 0.0;
  std::uint64_t seed = 42;
  json g_spec;  // family / constant / coefficients / tabulated
  json phi_spec;
  json psi_spec;
  json raw;
};

RunConfig load_config(const std::string& config_path) {
  RunConfig c;
  if (config_path.empty()) return c;
  std::ifstream in(config_path);
  if (!in) throw std::ios_base::failure("cannot open config " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  c.raw = j;
  if (j.contains("N") && j["N"].get<int>() != 3)
    throw ConfigError("only dimension N = 3 is supported");
  if (j.contains("L")) c.L = j["L"].get<int>();
  if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("max_iter")) c.max_iter = j["max_iter"].get<int>();
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("h")) c.h = j["h"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("g")) c.g_spec = j["g"];
  if (j.contains("phi")) c.phi_spec = j["phi"];
  if (j.contains("psi")) c.psi_spec = j["psi"];
  return c;
}

void validate(const RunConfig& c) {
  if (c.L < 1) throw ConfigError("L must be >= 1");
  if (c.tol <= 0.0) throw ConfigError("tol must be > 0");
  if (c.alpha <= 0.0 || c.alpha >= 1.0) throw ConfigError("alpha must lie in (0, 1)");
  if (c.max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

BoundaryData resolve_g(const RunConfig& c) {
  const json& spec = c.g_spec;
  if (spec.is_null()) throw ConfigError("config must provide a g spec");
  const Symmetry tag =
      (c.mode == SolveMode::odd) ? Symmetry::even : Symmetry::axisymmetric;
  try {
    if (spec.contains("constant")) {
      BoundaryData b = BoundaryData::constant(spec["constant"].get<double>(), tag);
      b.h = c.h;
      return b;
    }
    if (spec.contains("family")) {
      const std::string family = spec["family"].get<std::string>();
      const double eps = spec.value("eps", 0.05);
      Polynomial q;
      if (family == "manufactured_odd") {
        q = manufactured_q_odd();
      } else if (family == "manufactured_axisym") {
        q = manufactured_q_axisym();
      } else if (family == "manufactured_tilt") {
        q = manufactured_q_tilt();
      } else {
        throw ConfigError("unknown g family: " + family);
      }
      return make_manufactured(q, eps, c.mode, family).g;
    }
    if (spec.contains("coefficients")) {
      // g = sum c_lm Y_lm on S, entries [l, m, c].
      std::vector<std::pair<Polynomial, double>> parts;
      for (const auto& row : spec["coefficients"]) {
        if (!row.is_array() || row.size() != 3) throw ConfigError("bad coefficient row in g spec");
        parts.emplace_back(solid_harmonic(row[0].get<int>(), row[1].get<int>()),
                           row[2].get<double>());
      }
      BoundaryData b;
      b.kind = BoundaryData::Kind::coefficients;
      b.tag = tag;
      b.h = c.h;
      b.name = "coefficients";
      b.eval = [parts](const Vec3& y) {
        double s = 0.0;
        for (const auto& [p, coef] : parts) s += coef * p.evaluate(y);
        return s;
      };
      return b;
    }
    if (spec.contains("tabulated"))
      return boundary_from_csv(spec["tabulated"].get<std::string>(), tag, c.h);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("g spec must contain one of: constant, family, coefficients, tabulated");
}

std::string trace_csv(const SphereBasis& basis, const Polynomial& u,
                      const std::vector<double>& g_nodes) {
  const SphereGrid& grid = basis.grid();
  const std::array<Polynomial, 3> grad = u.gradient();
  std::string out = "theta,phi_az,y1,y2,y3,u,du_dxN,grad_norm,g\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& y = grid.nodes[i];
    double phi_az = std::atan2(y[1], y[0]);
    if (phi_az < 0.0) phi_az += 2.0 * pi;
    const double theta = std::acos(std::clamp(y[2], -1.0, 1.0));
    const Vec3 gu{grad[0].evaluate(y), grad[1].evaluate(y), grad[2].evaluate(y)};
    const double row[9] = {theta, phi_az, y[0], y[1], y[2], u.evaluate(y), gu[2], norm(gu),
                           g_nodes[i]};
    for (int c = 0; c < 9; ++c) {
      out += fmt17(row[c]);
      out += (c == 8) ? '\n' : ',';
    }
  }
  return out;
}

json report_to_json(const FixedPointReport& r) {
  json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["lambda_target"] = r.lambda_target;
  j["iterate_norms"] = r.iterate_norms;
  j["step_norms"] = r.step_norms;
  j["contraction_ratios"] = r.contraction_ratios;
  j["truncation_tails"] = r.truncation_tails;
  j["smallness_warning"] = r.smallness_warning;
  j["g_minus_1_sup"] = r.g_minus_1_sup;
  j["gsq_minus_1_sup"] = r.gsq_minus_1_sup;
  j["c0_factorization"] = r.c0_factorization;
  j["c1_quadratic_bound"] = r.c1_quadratic_bound;
  j["boundary_identity_sup"] = r.boundary_identity_sup;
  j["v_holder"] = {{"sup_value", r.v_holder.sup_value},
                   {"sup_grad", r.v_holder.sup_grad},
                   {"grad_holder", r.v_holder.grad_holder},
                   {"c1alpha", r.v_holder.c1alpha()}};
  return j;
}

int run_solve(const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  const BoundaryData g = resolve_g(cfg);
  const SphereBasis basis = make_default_basis(cfg.L);
  const std::vector<double> g_nodes = g.values_on(basis.grid());

  FixedPointConfig fp;
  fp.tol = cfg.tol;
  fp.max_iter = cfg.max_iter;
  fp.alpha = cfg.alpha;
  fp.seed = cfg.seed;

  json report;
  std::string solution_body, trace_body;
  try {
    const FixedPointResult res = fixed_point_solve(basis, g, cfg.mode, fp);
    report = report_to_json(res.report);
    json solution;
    solution["config"] = {{"L", cfg.L},
                          {"mode", cfg.mode == SolveMode::odd ? "odd" : "axisym"},
                          {"tol", cfg.tol},
                          {"max_iter", cfg.max_iter},
                          {"alpha", cfg.alpha},
                          {"h", g.h},
                          {"seed", cfg.seed},
                          {"g", cfg.g_spec}};
    solution["phi_coefficients"] = expansion_to_json(res.phi_fixed);
    solution["u_polynomial"] = poly_to_json(res.u);
    solution["v_polynomial"] = poly_to_json(res.v);
    solution["residuals"] = {{"harmonicity", res.lin.residuals.harmonicity},
                             {"boundary_sup", res.lin.residuals.boundary_sup},
                             {"equator_sup", res.lin.residuals.equator_sup}};
    solution_body = solution.dump(2) + "\n";
    trace_body = trace_csv(basis, res.u, g_nodes);
  } catch (const DivergenceError& e) {
    report = report_to_json(e.report);
    report["error"] = e.what();
    fs::create_directories(out_dir);
    write_text(out_dir / "report.json", report.dump(2) + "\n");
    std::cerr << "solve: " << e.what() << "\n";
    return kExitDiverged;
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "solution.json", solution_body);
  write_text(out_dir / "trace.csv", trace_body);
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  return 0;
}

SphereExpansion resolve_expansion(const json& spec, int L) {
  SphereExpansion e = SphereExpansion::zero(L);
  if (spec.is_null()) return e;
  if (!spec.contains("coefficients"))
    throw ConfigError("phi spec must contain a coefficients list of [l, m, c] rows");
  for (const auto& row : spec["coefficients"]) {
    if (!row.is_array() || row.size() != 3) throw ConfigError("bad coefficient row in phi spec");
    const int l = row[0].get<int>(), m = row[1].get<int>();
    if (l > L || std::abs(m) > l) throw ConfigError("phi coefficient outside degree range");
    e.at(l, m) = row[2].get<double>();
  }
  return e;
}

int run_linearized(const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  const SphereBasis basis = make_default_basis(cfg.L);
  const SphereExpansion phi = resolve_expansion(cfg.phi_spec, cfg.L);
  RimFourier psi = RimFourier::constant(cfg.h);
  if (!cfg.psi_spec.is_null() && cfg.psi_spec.contains("constant"))
    psi = RimFourier::constant(cfg.psi_spec["constant"].get<double>());
  const LinearizedSolution sol = solve_linearized(basis, phi, psi);

  json out;
  out["config"] = {{"L", cfg.L}, {"h", psi.a0}, {"seed", cfg.seed}};
  out["v_polynomial"] = poly_to_json(sol.v);
  out["w_polynomial"] = poly_to_json(sol.w);
  out["residuals"] = {{"harmonicity", sol.residuals.harmonicity},
                      {"boundary_sup", sol.residuals.boundary_sup},
                      {"equator_sup", sol.residuals.equator_sup}};
  fs::create_directories(out_dir);
  write_text(out_dir / "solution.json", out.dump(2) + "\n");
  return 0;
}

struct Case {
  std::string name;
  bool pass;
  double measured;
  double tolerance;
};

json cases_to_json(const std::vector<Case>& cases) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : cases) {
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance}});
    all = all && c.pass;
  }
  json out;
  out["all_pass"] = all;
  out["cases"] = arr;
  return out;
}

int run_verify(const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  std::vector<Case> cases;
  const auto push = [&cases](const std::string& name, double measured, double tol) {
    cases.push_back({name, measured <= tol, measured, tol});
  };

  const SphereBasis basis = make_default_basis(std::max(cfg.L, 4));

  {  // Closed form: phi == 1 gives v = x3.
    SphereExpansion phi = SphereExpansion::zero(basis.L());
    phi.at(0, 0) = std::sqrt(4.0 * pi);  // Y_00 = 1/sqrt(4 pi)
    const LinearizedSolution sol = solve_linearized(basis, phi);
    push("closed_form_phi_const", (sol.v - Polynomial::variable(2)).max_abs_coeff(), 1e-10);
  }
  {  // Closed form: phi = y3 gives v = x3^2/2 + (1 - x1^2 - x2^2)/4.
    const SphereExpansion phi =
        basis.project(make_sphere_field(basis.grid_ptr(), [](const Vec3& y) {
                        return y[2];
                      }).values);
    const LinearizedSolution sol = solve_linearized(basis, phi);
    Polynomial ref = Polynomial::monomial(0, 0, 2, 0.5) + Polynomial::constant(0.25) +
                     Polynomial::monomial(2, 0, 0, -0.25) + Polynomial::monomial(0, 2, 0, -0.25);
    push("closed_form_phi_yN", (sol.v - ref).max_abs_coeff(), 1e-10);
  }
  {  // Dual path agreement for phi = y1 y3.
    const SphereExpansion phi =
        basis.project(make_sphere_field(basis.grid_ptr(), [](const Vec3& y) {
                        return y[0] * y[2];
                      }).values);
    const LinearizedSolution sol = solve_linearized(basis, phi);
    const auto sphere = std::make_shared<SphereGrid>(build_sphere_grid(32, 64));
    const auto disk = std::make_shared<DiskGrid>(build_disk_grid(32, 64));
    std::vector<double> phi_vals(sphere->size());
    for (std::size_t i = 0; i < sphere->size(); ++i)
      phi_vals[i] = sphere->nodes[i][0] * sphere->nodes[i][2];
    const KernelPathEvaluator kp(sphere, disk, phi_vals, [](double) { return 0.0; });
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-0.55, 0.55);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const Vec3 x{unif(rng), unif(rng), unif(rng)};
      worst = std::max(worst, std::abs(kp.evaluate(x) - sol.v.evaluate(x)));
    }
    push("dual_path_y1yN", worst, 1e-3);
  }
  {  // g == 1 collapses to u = x3 in one step.
    const FixedPointResult res =
        fixed_point_solve(basis, BoundaryData::constant(1.0), SolveMode::odd,
                          FixedPointConfig{.seed = cfg.seed});
    push("g_equals_one", (res.u - Polynomial::variable(2)).max_abs_coeff(), 1e-12);
    push("g_equals_one_identity", res.report.boundary_identity_sup, 1e-12);
  }
  {  // Manufactured odd branch.
    const ManufacturedCase mc = make_manufactured(manufactured_q_odd(), 0.05, SolveMode::odd);
    const FixedPointResult res =
        fixed_point_solve(basis, mc.g, SolveMode::odd, FixedPointConfig{.seed = cfg.seed});
    double err = 0.0;
    for (const Vec3& y : basis.grid().nodes)
      err = std::max(err, std::abs(res.u.evaluate(y) - mc.u_exact.poly.evaluate(y)));
    push("manufactured_odd_recovery", err, 1e-6);
    push("manufactured_odd_symmetry", project_symmetry(res.phi_fixed, Symmetry::odd)
                                          .sup_coeff_norm(), 1e-12);
  }
  {  // Manufactured axisymmetric branch.
    const ManufacturedCase mc =
        make_manufactured(manufactured_q_axisym(), 0.05, SolveMode::axisymmetric);
    const FixedPointResult res = fixed_point_solve(basis, mc.g, SolveMode::axisymmetric,
                                                   FixedPointConfig{.seed = cfg.seed});
    double err = 0.0;
    for (const Vec3& y : basis.grid().nodes)
      err = std::max(err, std::abs(res.u.evaluate(y) - mc.u_exact.poly.evaluate(y)));
    push("manufactured_axisym_recovery", err, 1e-5);
    double rim = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double th = 2.0 * pi * i / 64;
      rim = std::max(rim, std::abs(res.u.evaluate({std::cos(th), std::sin(th), 0.0}) - mc.h));
    }
    push("manufactured_axisym_rim", rim, 1e-8);
    push("manufactured_axisym_modes", res.phi_fixed.axisym_violation(), 1e-12);
  }
  {  // Weighted integral limit 1/(2 kappa).
    for (double kappa : {0.5, 1.0, 2.0}) {
      const IntegralLemmaResult r = check_integral_lemma(kappa, 0.999);
      push("integral_limit_kappa_" + fmt17(kappa), std::abs(r.value - r.limit) / r.limit, 0.01);
    }
  }
  {  // Weighted second-derivative decay for smooth data.
    const SphereGrid grid = build_sphere_grid(48, 96);
    const DecayReport rep = check_derivative_decay(
        grid, [](const Vec3& y) { return y[0] * y[2]; },
        [](const Vec3& y) { return Vec3{y[2], 0.0, y[0]}; }, cfg.alpha, 2);
    push("derivative_decay_bounded", rep.bounded(2.0) ? 0.0 : 1.0, 0.5);
  }
  {  // Lipschitz data has a finite Hoelder quotient.
    const GradientHolderResult r = check_gradient_to_holder(
        [](const Vec3& x) { return x[2]; }, 1.0, cfg.alpha, 10000, cfg.seed);
    push("gradient_to_holder_lipschitz", r.ratio, std::pow(2.0, 1.0 - cfg.alpha) + 1e-12);
  }

  const json out = cases_to_json(cases);
  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", out.dump(2) + "\n");
  for (const auto& c : cases)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " measured=" << c.measured
              << " tol=" << c.tolerance << "\n";
  return out["all_pass"].get<bool>() ? 0 : kExitVerifyFail;
}

int run_estimates(const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  json out;
  json lemma = json::array();
  for (double kappa : {0.5, 1.0, 2.0})
    for (double sigma : {0.9, 0.99, 0.999}) {
      const IntegralLemmaResult r = check_integral_lemma(kappa, sigma);
      lemma.push_back(
          {{"kappa", kappa}, {"sigma", sigma}, {"value", r.value}, {"limit", r.limit}});
    }
  out["integral_lemma"] = lemma;

  const SphereGrid grid = build_sphere_grid(48, 96);
  const DecayReport rep = check_derivative_decay(
      grid, [](const Vec3& y) { return y[0] * y[2]; },
      [](const Vec3& y) { return Vec3{y[2], 0.0, y[0]}; }, cfg.alpha, 2);
  out["derivative_decay"] = {{"radii", rep.radii},
                             {"weighted_sup", rep.weighted_sup},
                             {"bounded", rep.bounded(2.0)}};

  const GradientHolderResult gh = check_gradient_to_holder(
      [](const Vec3& x) { return x[2]; }, 1.0, cfg.alpha, 10000, cfg.seed);
  out["gradient_to_holder"] = {{"quotient", gh.holder_quotient},
                               {"gradient_bound", gh.gradient_bound},
                               {"ratio", gh.ratio}};
  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior Backus problem solver: harmonic u in the unit ball with |grad u| = g on the sphere"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", mode_flag;
  std::optional<int> L_flag;
  std::optional<double> tol_flag;
  std::optional<std::uint64_t> seed_flag;

  for (const std::string name : {"solve", "linearized", "verify", "estimates"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--L", L_flag, "spectral degree");
    sub->add_option("--mode", mode_flag, "odd | axisym");
    sub->add_option("--tol", tol_flag, "fixed-point step tolerance");
    sub->add_option("--seed", seed_flag, "sampling seed (default 42)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (L_flag) cfg.L = *L_flag;
    if (!mode_flag.empty()) cfg.mode = parse_mode(mode_flag);
    if (tol_flag) cfg.tol = *tol_flag;
    if (seed_flag) cfg.seed = *seed_flag;

    const fs::path out(out_dir);
    if (app.got_subcommand("solve")) return run_solve(cfg, out);
    if (app.got_subcommand("linearized")) return run_linearized(cfg, out);
    if (app.got_subcommand("verify")) return run_verify(cfg, out);
    if (app.got_subcommand("estimates")) return run_estimates(cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

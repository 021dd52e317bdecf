#include "gad/cli.hpp"

#include "gad/dynamics.hpp"
#include "gad/jacobian.hpp"
#include "gad/metric.hpp"
#include "gad/problems.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace gad::cli {

namespace fs = std::filesystem;

namespace {

// ============================================================================
// JSON field access with ConfigError reporting
// ============================================================================

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

const json* find(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  return value.get<double>();
}

double number_or(const json& obj, const char* key, double fallback,
                 const std::string& where) {
  const json* v = find(obj, key);
  return v ? as_number(*v, where + "." + key) : fallback;
}

long integer_or(const json& obj, const char* key, long fallback,
                const std::string& where) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer())
    fail(where + "." + key + " must be an integer");
  return v->get<long>();
}

std::string string_or(const json& obj, const char* key,
                      const std::string& fallback, const std::string& where) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(where + "." + key + " must be a string");
  return v->get<std::string>();
}

Matrix matrix_from_params(const json& params) {
  if (const json* rows = find(params, "matrix")) {
    if (!rows->is_array() || rows->empty())
      fail("problem.params.matrix must be a non-empty array of rows");
    const Index n = static_cast<Index>(rows->size());
    Matrix a(n, n);
    for (Index r = 0; r < n; ++r) {
      const json& row = (*rows)[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n)
        fail("problem.params.matrix must be square");
      for (Index c = 0; c < n; ++c)
        a(r, c) = as_number(row[static_cast<size_t>(c)],
                            "problem.params.matrix entry");
    }
    return a;
  }
  if (const json* diag = find(params, "diag")) {
    if (!diag->is_array() || diag->empty())
      fail("problem.params.diag must be a non-empty array");
    Vector d(static_cast<Index>(diag->size()));
    for (Index k = 0; k < d.size(); ++k)
      d(k) = as_number((*diag)[static_cast<size_t>(k)],
                       "problem.params.diag entry");
    return Matrix(d.asDiagonal());
  }
  fail("rayleigh needs problem.params.matrix or problem.params.diag");
}

// ============================================================================
// Self-check battery helpers
// ============================================================================

// Linear field with a prescribed, well-separated real spectrum and a mildly
// non-orthogonal eigenbasis; exact Jacobian callbacks.
struct CheckSystem {
  ProblemSpec problem;
  Vector x_star;
  std::vector<double> lambdas;
  Matrix v_right;
  Matrix w_left;
};

CheckSystem make_check_system(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double margin = 0.2;

  Vector lam(n);
  for (bool ok = false; !ok;) {
    for (int i = 0; i < n; ++i) lam(i) = unif(rng);
    ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (std::abs(lam(i)) < margin) ok = false;
      for (int j = 0; j < n && ok; ++j) {
        if (i != j && std::abs(lam(i) - lam(j)) < margin) ok = false;
        if (std::abs(lam(i) + lam(j)) < margin) ok = false;
        if (std::abs(2.0 * lam(i) + lam(j)) < margin) ok = false;
        for (int k = 0; k < n && ok; ++k)
          if (std::abs(lam(i) + lam(j) - lam(k)) < margin) ok = false;
      }
    }
  }

  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = gauss(rng);
  s *= 0.25 / s.norm();
  const Matrix v = q * (Matrix::Identity(n, n) + s);
  const Matrix a = v * lam.asDiagonal() * v.inverse();

  CheckSystem sys;
  sys.x_star = Vector(n);
  for (int i = 0; i < n; ++i) sys.x_star(i) = gauss(rng);
  const Vector xs = sys.x_star;
  sys.problem.dim = n;
  sys.problem.field = [a, xs](const Vector& x) { return Vector(a * (x - xs)); };
  sys.problem.jacobian_action = [a](const Vector&, const Vector& b) {
    return Vector(a * b);
  };
  sys.problem.jacobian_transpose_action = [a](const Vector&, const Vector& b) {
    return Vector(a.transpose() * b);
  };
  sys.problem.metric_weights = Vector::Ones(n);

  sys.lambdas.assign(lam.data(), lam.data() + n);
  sys.v_right = Matrix(n, n);
  sys.w_left = Matrix(n, n);
  const Matrix v_inv_t = v.inverse().transpose();
  for (int i = 0; i < n; ++i) {
    const double nrm = v.col(i).norm();
    sys.v_right.col(i) = v.col(i) / nrm;
    sys.w_left.col(i) = v_inv_t.col(i) * nrm;
  }
  return sys;
}

json run_spectrum_check(int n_random, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < std::max(1, n_random); ++k) {
    const int n = 2 + k % 5;
    auto sys = make_check_system(rng, n);
    const int target = k % n;
    GadState state;
    state.x = sys.x_star;
    state.pairs.push_back(
        DirectionPair{sys.v_right.col(target), sys.w_left.col(target)});
    const Matrix numeric = gad_jacobian_numeric(
        sys.problem, state, GadVariant{GadKind::Index1General, 1.0});
    const double dist = max_matched_distance(
        eig_dense(numeric).values, gad_spectrum_expected(sys.lambdas, target));
    worst = std::max(worst, dist);
  }
  return json{{"name", "augmented-spectrum-vs-prediction"},
              {"pass", worst <= 1e-4},
              {"worst_distance", worst}};
}

json run_deflation_check(int n_random, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < std::max(1, n_random); ++k) {
    const int n = 3 + k % 4;
    auto sys = make_check_system(rng, n);
    const int target = k % n;
    const Vector v1 = sys.v_right.col(target);
    const Vector w1 = sys.w_left.col(target);
    Matrix deflated(n, n);
    for (int c = 0; c < n; ++c)
      deflated.col(c) =
          deflate_action(sys.problem, sys.x_star, v1, w1, Vector::Unit(n, c));
    std::vector<double> expected{0.0};
    for (int j = 0; j < n; ++j)
      if (j != target) expected.push_back(sys.lambdas[static_cast<size_t>(j)]);
    worst = std::max(
        worst, max_matched_distance(eig_dense(deflated).values, expected));
  }
  return json{{"name", "deflated-operator-spectrum"},
              {"pass", worst <= 1e-8},
              {"worst_distance", worst}};
}

json run_double_well_check() {
  auto problem = problems::double_well(1.0);
  GadState state;
  state.x = Vector::Zero(2);
  Vector e0 = Vector::Unit(2, 0);
  state.pairs.push_back(DirectionPair{e0, e0});
  auto res = verify_fixed_point(problem, state);
  return json{{"name", "double-well-saddle-residuals"},
              {"pass", res.pass},
              {"force_inf", res.force_inf},
              {"eig_right_inf", res.eig_right_inf}};
}

json run_lorenz_check() {
  auto problem = problems::lorenz();
  const Vector origin = Vector::Zero(3);
  auto eig = eig_dense(assemble_jacobian(problem, origin));
  auto eig_t =
      eig_dense(Matrix(assemble_jacobian(problem, origin).transpose()));
  const double lambda = eig.values(0).real();
  Vector v = eig.vectors.col(0).real();
  v /= v.norm();
  // Left direction: transpose eigenvector of the same eigenvalue, scaled to
  // unit duality.
  Index match = 0;
  for (Index k = 1; k < 3; ++k)
    if (std::abs(eig_t.values(k).real() - lambda) <
        std::abs(eig_t.values(match).real() - lambda))
      match = k;
  Vector w = eig_t.vectors.col(match).real();
  w /= w.dot(v);

  GadState state;
  state.x = origin;
  state.pairs.push_back(DirectionPair{v, w});
  auto res = verify_fixed_point(problem, state);
  return json{{"name", "lorenz-origin-residuals"},
              {"pass", res.pass},
              {"lambda", lambda},
              {"force_inf", res.force_inf},
              {"eig_right_inf", res.eig_right_inf}};
}

}  // namespace

// ============================================================================
// Catalogue and config decoding
// ============================================================================

ProblemSpec make_problem(const std::string& id, const json& params) {
  if (!params.is_object() && !params.is_null())
    fail("problem.params must be an object");
  try {
    if (id == "double-well") {
      const json* mu = find(params, "mu");
      if (!mu) fail("double-well needs problem.params.mu");
      return problems::double_well(as_number(*mu, "problem.params.mu"));
    }
    if (id == "lorenz" || id == "lorenz-reversed") {
      const double sigma =
          number_or(params, "sigma", 10.0, "problem.params");
      const double beta =
          number_or(params, "beta", 8.0 / 3.0, "problem.params");
      const double rho = number_or(params, "rho", 30.0, "problem.params");
      return problems::lorenz(sigma, beta, rho, id == "lorenz-reversed");
    }
    if (id == "rd-nucleation") {
      const double mu = number_or(params, "mu", -1.0, "problem.params");
      const double delta =
          number_or(params, "delta", 0.01, "problem.params");
      const long n_grid =
          integer_or(params, "n_grid", 128, "problem.params");
      return problems::reaction_diffusion(mu, delta,
                                          static_cast<int>(n_grid));
    }
    if (id == "allen-cahn") {
      const long n_grid =
          integer_or(params, "n_grid", 128, "problem.params");
      const double length =
          number_or(params, "domain_length", 1.0, "problem.params");
      return problems::allen_cahn(static_cast<int>(n_grid), length);
    }
    if (id == "rayleigh") return problems::rayleigh(matrix_from_params(params));
  } catch (const ConfigError&) {
    throw;
  } catch (const GadError& e) {
    fail(std::string("problem '") + id + "': " + e.what());
  }
  fail("unknown problem id '" + id + "'");
}

RunSetup parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  if (!root.is_object()) fail(path.string() + ": top level must be an object");

  RunSetup setup;

  const json* problem = find(root, "problem");
  if (!problem) fail("config needs a \"problem\" object");
  setup.problem_id = string_or(*problem, "id", "", "problem");
  if (setup.problem_id.empty()) fail("config needs problem.id");
  const json* params = find(*problem, "params");
  setup.problem_params = params ? *params : json::object();
  setup.problem = make_problem(setup.problem_id, setup.problem_params);

  if (const json* variant = find(root, "variant")) {
    const std::string kind = string_or(*variant, "kind", "", "variant");
    if (kind.empty()) fail("variant needs a \"kind\" name");
    auto parsed = parse_gad_kind(kind);
    if (!parsed) fail("unknown variant kind '" + kind + "'");
    setup.variant.kind = *parsed;
    setup.variant.tau = number_or(*variant, "tau", 1.0, "variant");
    if (!(setup.variant.tau > 0.0)) fail("variant.tau must be positive");
  }

  if (const json* run = find(root, "run")) {
    RunConfig& cfg = setup.run;
    cfg.dt = number_or(*run, "dt", cfg.dt, "run");
    if (!(cfg.dt > 0.0)) fail("run.dt must be positive");
    const std::string stepper =
        string_or(*run, "stepper", to_string(cfg.stepper), "run");
    auto parsed = parse_stepper(stepper);
    if (!parsed) fail("unknown stepper '" + stepper + "'");
    cfg.stepper = *parsed;
    cfg.max_steps = integer_or(*run, "max_steps", cfg.max_steps, "run");
    if (cfg.max_steps < 0) fail("run.max_steps must be non-negative");
    cfg.tol_force = number_or(*run, "tol_force", cfg.tol_force, "run");
    cfg.tol_rhs = number_or(*run, "tol_rhs", cfg.tol_rhs, "run");
    cfg.blowup_norm = number_or(*run, "blowup_norm", cfg.blowup_norm, "run");
    if (!(cfg.blowup_norm > 0.0)) fail("run.blowup_norm must be positive");
    cfg.warmup_steps =
        integer_or(*run, "warmup_steps", cfg.warmup_steps, "run");
    if (cfg.warmup_steps < 0) fail("run.warmup_steps must be non-negative");
    cfg.record_every =
        integer_or(*run, "record_every", cfg.record_every, "run");
    if (cfg.record_every < 1) fail("run.record_every must be at least 1");
    cfg.seed = static_cast<std::uint64_t>(
        integer_or(*run, "seed", static_cast<long>(cfg.seed), "run"));
  }

  if (const json* x0 = find(root, "x0")) {
    if (x0->is_array()) {
      if (static_cast<Index>(x0->size()) != setup.problem.dim)
        fail("x0 has " + std::to_string(x0->size()) + " entries; problem '" +
             setup.problem_id + "' needs " +
             std::to_string(setup.problem.dim));
      setup.x0 = Vector(setup.problem.dim);
      for (Index k = 0; k < setup.x0.size(); ++k)
        setup.x0(k) = as_number((*x0)[static_cast<size_t>(k)], "x0 entry");
    } else if (x0->is_object()) {
      const std::string preset = string_or(*x0, "preset", "", "x0");
      if (preset != "rd-perturbed")
        fail("unknown x0 preset '" + preset + "'");
      const double mu =
          number_or(setup.problem_params, "mu", -1.0, "problem.params");
      const long n_grid =
          integer_or(setup.problem_params, "n_grid", 128, "problem.params");
      const std::string base = string_or(*x0, "base", "zero", "x0");
      const double amplitude = number_or(*x0, "amplitude", 0.01, "x0");
      const auto seed = static_cast<std::uint64_t>(
          integer_or(*x0, "seed", 0, "x0"));
      try {
        setup.x0 = problems::rd_perturbed_state(
            mu, static_cast<int>(n_grid), base, amplitude, seed);
      } catch (const GadError& e) {
        fail(std::string("x0 preset: ") + e.what());
      }
      if (setup.x0.size() != setup.problem.dim)
        fail("x0 preset size does not match the problem dimension");
    } else {
      fail("x0 must be an array or a preset object");
    }
    setup.has_x0 = true;
  }

  if (const json* scan = find(root, "scan")) {
    GridSpec& grid = setup.grid;
    grid.xmin = number_or(*scan, "xmin", grid.xmin, "scan");
    grid.xmax = number_or(*scan, "xmax", grid.xmax, "scan");
    grid.ymin = number_or(*scan, "ymin", grid.ymin, "scan");
    grid.ymax = number_or(*scan, "ymax", grid.ymax, "scan");
    grid.nx = static_cast<int>(integer_or(*scan, "nx", grid.nx, "scan"));
    grid.ny = static_cast<int>(integer_or(*scan, "ny", grid.ny, "scan"));
    if (grid.nx < 1 || grid.ny < 1) fail("scan.nx and scan.ny must be >= 1");
    setup.method = string_or(*scan, "method", "gad", "scan");
    if (setup.method != "gad" && setup.method != "newton")
      fail("scan.method must be \"gad\" or \"newton\"");
    setup.cluster_tol =
        number_or(*scan, "cluster_tol", setup.cluster_tol, "scan");
    if (!(setup.cluster_tol > 0.0)) fail("scan.cluster_tol must be positive");
    setup.has_grid = true;
  }

  setup.output_dir = string_or(root, "output_dir", ".", "config");
  return setup;
}

// ============================================================================
// Serialization
// ============================================================================

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

json report_to_json(const SaddleReport& report) {
  json x_star = json::array();
  for (Index k = 0; k < report.x_star.size(); ++k)
    x_star.push_back(report.x_star(k));
  json pair = nullptr;
  if (report.lambda_pair)
    pair = json{{"re", report.lambda_pair->real()},
                {"im", report.lambda_pair->imag()}};
  return json{{"x_star", std::move(x_star)},
              {"lambda_star", report.lambda_star},
              {"lambda_pair", std::move(pair)},
              {"residual_force", report.residual_force},
              {"residual_eig", report.residual_eig},
              {"morse_index", report.morse_index},
              {"converged", report.converged},
              {"steps", report.steps},
              {"status", report.status}};
}

SaddleReport report_from_json(const json& j) {
  SaddleReport report;
  const json& x_star = j.at("x_star");
  report.x_star = Vector(static_cast<Index>(x_star.size()));
  for (Index k = 0; k < report.x_star.size(); ++k)
    report.x_star(k) = x_star[static_cast<size_t>(k)].get<double>();
  report.lambda_star = j.at("lambda_star").get<double>();
  if (j.contains("lambda_pair") && !j.at("lambda_pair").is_null())
    report.lambda_pair = Complex(j.at("lambda_pair").at("re").get<double>(),
                                 j.at("lambda_pair").at("im").get<double>());
  report.residual_force = j.at("residual_force").get<double>();
  report.residual_eig = j.at("residual_eig").get<double>();
  report.morse_index = j.at("morse_index").get<int>();
  report.converged = j.at("converged").get<bool>();
  report.steps = j.at("steps").get<long>();
  report.status = j.at("status").get<std::string>();
  return report;
}

void write_trajectory_csv(const fs::path& path, const ProblemSpec& problem,
                          const TrajectoryRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GadError("cannot write " + path.string());

  const Index n = problem.dim;
  const int pairs =
      record.samples.empty() ? 0 : static_cast<int>(record.samples[0].state.pairs.size());
  out << "t";
  for (Index k = 0; k < n; ++k) out << ",x" << k;
  out << ",force_inf,alpha,beta,drift";
  for (int p = 0; p < pairs; ++p) {
    for (Index k = 0; k < n; ++k) out << ",v" << p << "_" << k;
    for (Index k = 0; k < n; ++k) out << ",w" << p << "_" << k;
  }
  out << "\n";

  for (const auto& sample : record.samples) {
    out << format_double(sample.t());
    for (Index k = 0; k < n; ++k) out << "," << format_double(sample.state.x(k));
    out << "," << format_double(sample.force_inf) << ","
        << format_double(sample.alpha) << "," << format_double(sample.beta)
        << "," << format_double(sample.drift);
    for (const auto& pair : sample.state.pairs) {
      for (Index k = 0; k < n; ++k) out << "," << format_double(pair.v(k));
      for (Index k = 0; k < n; ++k) out << "," << format_double(pair.w(k));
    }
    out << "\n";
  }
}

void write_basin_csv(const fs::path& path, const BasinScan& scan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GadError("cannot write " + path.string());
  out << "x,y,label,steps,limit_x,limit_y\n";
  for (int iy = 0; iy < scan.grid.ny; ++iy) {
    for (int ix = 0; ix < scan.grid.nx; ++ix) {
      const size_t c = static_cast<size_t>(iy) * scan.grid.nx + ix;
      const int label = scan.labels[c];
      out << format_double(scan.grid.x_at(ix)) << ","
          << format_double(scan.grid.y_at(iy)) << "," << label << ","
          << scan.steps[c] << ",";
      if (label >= 0) {
        const Vector& limit = scan.limit_points[static_cast<size_t>(label)];
        out << format_double(limit(0)) << "," << format_double(limit(1));
      } else {
        out << "nan,nan";
      }
      out << "\n";
    }
  }
}

// ============================================================================
// Subcommands
// ============================================================================

int cmd_run(const fs::path& config_path) {
  RunSetup setup = parse_config_file(config_path);
  if (!setup.has_x0) fail("run needs an x0 in the config");
  fs::create_directories(setup.output_dir);

  auto result = run_gad(setup.problem, setup.x0, setup.variant, setup.run);
  write_trajectory_csv(setup.output_dir / "trajectory.csv", setup.problem,
                       result.trajectory);

  json out{{"problem",
            {{"id", setup.problem_id}, {"params", setup.problem_params}}},
           {"variant",
            {{"kind", to_string(setup.variant.kind)},
             {"tau", setup.variant.tau}}},
           {"report", report_to_json(result.report)}};
  std::ofstream file(setup.output_dir / "report.json", std::ios::binary);
  if (!file) throw GadError("cannot write report.json");
  file << out.dump(2) << "\n";
  return result.report.converged ? 0 : 2;
}

int cmd_scan(const fs::path& config_path) {
  RunSetup setup = parse_config_file(config_path);
  if (!setup.has_grid) fail("scan needs a \"scan\" grid in the config");
  fs::create_directories(setup.output_dir);

  BasinScan scan =
      setup.method == "newton"
          ? newton_basin_scan(setup.problem, setup.grid, setup.run,
                              setup.cluster_tol)
          : basin_scan(setup.problem, setup.variant, setup.grid, setup.run,
                       setup.cluster_tol);
  write_basin_csv(setup.output_dir / "basin.csv", scan);
  return 0;
}

int cmd_verify(int n_random, std::uint64_t seed, const fs::path& output_dir) {
  std::mt19937_64 rng(seed);
  json checks = json::array();
  checks.push_back(run_spectrum_check(n_random, rng));
  checks.push_back(run_deflation_check(n_random, rng));
  checks.push_back(run_double_well_check());
  checks.push_back(run_lorenz_check());

  bool all_pass = true;
  for (const auto& check : checks) all_pass = all_pass && check.at("pass").get<bool>();

  fs::create_directories(output_dir);
  json out{{"all_pass", all_pass}, {"checks", std::move(checks)}};
  std::ofstream file(output_dir / "verify.json", std::ios::binary);
  if (!file) throw GadError("cannot write verify.json");
  file << out.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_list(std::ostream& out) {
  out << "problems:\n";
  for (const auto& id : problems::problem_ids()) out << "  " << id << "\n";
  out << "variants:\n";
  for (GadKind kind :
       {GadKind::Index1Gradient, GadKind::Index1General,
        GadKind::Index1ReducedTau0, GadKind::Index2Complex,
        GadKind::Index2RealDeflated})
    out << "  " << to_string(kind) << "\n";
  return 0;
}

int run_main(int argc, char** argv) {
  CLI::App app{"saddle-point search by gentlest ascent dynamics"};
  app.require_subcommand(1);

  std::string run_config;
  std::string scan_config;
  std::string verify_dir = ".";
  int n_random = 8;
  std::uint64_t seed = 1;

  auto* run_cmd =
      app.add_subcommand("run", "integrate one saddle search from a JSON config");
  run_cmd->add_option("config", run_config, "JSON config file")->required();
  auto* scan_cmd = app.add_subcommand(
      "scan", "label a grid of starting points by their limit points");
  scan_cmd->add_option("config", scan_config, "JSON config file")->required();
  auto* verify_cmd =
      app.add_subcommand("verify", "run the built-in self-check battery");
  verify_cmd->add_option("--n-random", n_random,
                         "number of random spectrum checks");
  verify_cmd->add_option("--seed", seed, "seed for the random checks");
  verify_cmd->add_option("--output-dir", verify_dir,
                         "directory for verify.json");
  auto* list_cmd =
      app.add_subcommand("list", "print the problem and variant catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run_cmd) return cmd_run(run_config);
    if (*scan_cmd) return cmd_scan(scan_config);
    if (*verify_cmd) return cmd_verify(n_random, seed, verify_dir);
    if (*list_cmd) return cmd_list(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const GadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gad::cli

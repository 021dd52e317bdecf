#include <doctest.h>

#include <gad/cli.hpp>
#include <gad/problems.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace gad;
using gad::cli::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("gad_cli_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << j.dump(2) << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(line);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

json quick_reduced_config(const fs::path& outdir) {
  return json{
      {"problem", {{"id", "double-well"}, {"params", {{"mu", 3.0}}}}},
      {"variant", {{"kind", "index1-reduced"}}},
      {"x0", {0.9, 0.2}},
      {"run",
       {{"dt", 0.01},
        {"stepper", "rk4"},
        {"max_steps", 20000},
        {"tol_force", 1e-8},
        {"tol_rhs", 1e-8},
        {"record_every", 100}}},
      {"output_dir", outdir.string()}};
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {1.0 / 3.0, 6.02e23, -2.5e-300, 0.0, 12.39555, -8.0 / 3.0,
                   1e-17, 3.141592653589793}) {
    std::string s = gad::cli::format_double(v);
    CHECK(std::stod(s) == v);
    CHECK(s.find('e') != std::string::npos);
    CHECK(s.find(',') == std::string::npos);  // locale-independent
  }
}

TEST_CASE("make_problem builds every catalogue entry") {
  CHECK(gad::cli::make_problem("double-well", {{"mu", 1.0}}).dim == 2);
  CHECK(gad::cli::make_problem("lorenz", json::object()).dim == 3);
  CHECK(gad::cli::make_problem("lorenz-reversed", json::object()).dim == 3);
  CHECK(gad::cli::make_problem("rd-nucleation", {{"n_grid", 16}}).dim == 32);
  CHECK(gad::cli::make_problem("allen-cahn", {{"n_grid", 16}}).dim == 16);
  CHECK(gad::cli::make_problem("rayleigh", {{"diag", {1.0, 2.0, 3.0}}}).dim == 3);
  CHECK_THROWS_AS((void)gad::cli::make_problem("no-such-problem", json::object()),
                  gad::cli::ConfigError);
  CHECK_THROWS_AS(
      (void)gad::cli::make_problem("rayleigh", json::object()),  // matrix required
      gad::cli::ConfigError);
}

TEST_CASE("saddle reports round-trip through JSON") {
  SaddleReport rep;
  rep.x_star = Vector(2);
  rep.x_star << 1.0 / 3.0, -2.718281828459045;
  rep.lambda_star = 12.39555;
  rep.lambda_pair = Complex(0.1474, 10.5243);
  rep.residual_force = 3.2e-9;
  rep.residual_eig = 1.1e-8;
  rep.morse_index = 2;
  rep.converged = true;
  rep.steps = 4242;
  rep.status = "converged";

  json j = gad::cli::report_to_json(rep);
  SaddleReport back = gad::cli::report_from_json(j);
  CHECK(back.x_star(0) == rep.x_star(0));
  CHECK(back.x_star(1) == rep.x_star(1));
  CHECK(back.lambda_star == rep.lambda_star);
  REQUIRE(back.lambda_pair.has_value());
  CHECK(back.lambda_pair->real() == rep.lambda_pair->real());
  CHECK(back.lambda_pair->imag() == rep.lambda_pair->imag());
  CHECK(back.residual_force == rep.residual_force);
  CHECK(back.residual_eig == rep.residual_eig);
  CHECK(back.morse_index == 2);
  CHECK(back.converged);
  CHECK(back.steps == 4242);
  CHECK(back.status == "converged");

  rep.lambda_pair.reset();
  SaddleReport no_pair = gad::cli::report_from_json(gad::cli::report_to_json(rep));
  CHECK_FALSE(no_pair.lambda_pair.has_value());
}

TEST_CASE("parse_config_file populates a full run setup") {
  auto dir = fresh_dir("parse");
  json cfg = quick_reduced_config(dir / "out");
  cfg["run"]["seed"] = 5;
  cfg["scan"] = {{"xmin", -1.0}, {"xmax", 1.0},  {"ymin", -0.5},
                 {"ymax", 0.5},  {"nx", 11},     {"ny", 7},
                 {"method", "newton"}, {"cluster_tol", 5e-4}};
  auto path = write_json(dir, "config.json", cfg);

  auto setup = gad::cli::parse_config_file(path);
  CHECK(setup.problem_id == "double-well");
  CHECK(setup.problem.dim == 2);
  CHECK(setup.variant.kind == GadKind::Index1ReducedTau0);
  CHECK(setup.has_x0);
  CHECK(setup.x0(0) == 0.9);
  CHECK(setup.x0(1) == 0.2);
  CHECK(setup.run.dt == 0.01);
  CHECK(setup.run.stepper == Stepper::Rk4);
  CHECK(setup.run.max_steps == 20000);
  CHECK(setup.run.seed == 5);
  CHECK(setup.has_grid);
  CHECK(setup.grid.nx == 11);
  CHECK(setup.grid.ny == 7);
  CHECK(setup.method == "newton");
  CHECK(setup.cluster_tol == 5e-4);
  CHECK(setup.output_dir == dir / "out");
}

TEST_CASE("parse_config_file rejects bad input with ConfigError") {
  auto dir = fresh_dir("badcfg");

  CHECK_THROWS_AS((void)gad::cli::parse_config_file(dir / "missing.json"),
                  gad::cli::ConfigError);

  fs::path mangled = dir / "mangled.json";
  std::ofstream(mangled) << "{ \"problem\": { \"id\": \"lorenz\" ";  // truncated
  CHECK_THROWS_AS((void)gad::cli::parse_config_file(mangled),
                  gad::cli::ConfigError);

  json unknown = quick_reduced_config(dir);
  unknown["problem"]["id"] = "quintuple-well";
  CHECK_THROWS_AS(
      (void)gad::cli::parse_config_file(write_json(dir, "unknown.json", unknown)),
      gad::cli::ConfigError);

  json badvar = quick_reduced_config(dir);
  badvar["variant"]["kind"] = "index-9";
  CHECK_THROWS_AS(
      (void)gad::cli::parse_config_file(write_json(dir, "badvar.json", badvar)),
      gad::cli::ConfigError);

  json badx0 = quick_reduced_config(dir);
  badx0["x0"] = {0.9};  // wrong length for a 2-d problem
  CHECK_THROWS_AS(
      (void)gad::cli::parse_config_file(write_json(dir, "badx0.json", badx0)),
      gad::cli::ConfigError);
}

TEST_CASE("the rd-perturbed preset expands to a full state vector") {
  auto dir = fresh_dir("preset");
  json cfg{{"problem", {{"id", "rd-nucleation"}, {"params", {{"n_grid", 16}}}}},
           {"variant", {{"kind", "index1"}}},
           {"x0", {{"preset", "rd-perturbed"},
                   {"base", "zero"},
                   {"amplitude", 0.05},
                   {"seed", 3}}},
           {"output_dir", dir.string()}};
  auto setup = gad::cli::parse_config_file(write_json(dir, "cfg.json", cfg));
  CHECK(setup.has_x0);
  CHECK(setup.x0.size() == 32);
  CHECK(setup.x0.head(16).lpNorm<Eigen::Infinity>() ==
        doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("cmd_run produces a report and trajectory and exits 0 on success") {
  auto dir = fresh_dir("run_ok");
  auto cfgpath = write_json(dir, "config.json", quick_reduced_config(dir / "out"));
  CHECK(gad::cli::cmd_run(cfgpath) == 0);

  json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["problem"]["id"] == "double-well");
  CHECK(report["variant"]["kind"] == "index1-reduced");
  CHECK(report["report"]["converged"] == true);
  CHECK(report["report"]["status"] == "converged");
  double x0 = report["report"]["x_star"][0].get<double>();
  double x1 = report["report"]["x_star"][1].get<double>();
  CHECK(std::abs(x0) <= 1e-6);
  CHECK(std::abs(x1) <= 1e-6);
  CHECK(report["report"]["morse_index"] == 1);
  CHECK(report["report"]["lambda_star"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));

  std::string csv = slurp(dir / "out" / "trajectory.csv");
  auto lines = split(csv, '\n');
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "t,x0,x1,force_inf,alpha,beta,drift");
  double prev_t = -1.0;
  for (size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    auto cells = split(lines[k], ',');
    REQUIRE(cells.size() == 7);
    double t = std::stod(cells[0]);
    CHECK(t > prev_t);
    prev_t = t;
    for (const auto& cell : cells) (void)std::stod(cell);  // all parse
  }
}

TEST_CASE("cmd_run output is byte-for-byte deterministic") {
  auto dir_a = fresh_dir("det_a");
  auto dir_b = fresh_dir("det_b");
  auto cfg_a = write_json(dir_a, "config.json", quick_reduced_config(dir_a / "o"));
  auto cfg_b = write_json(dir_b, "config.json", quick_reduced_config(dir_b / "o"));
  REQUIRE(gad::cli::cmd_run(cfg_a) == 0);
  REQUIRE(gad::cli::cmd_run(cfg_b) == 0);
  CHECK(slurp(dir_a / "o" / "trajectory.csv") == slurp(dir_b / "o" / "trajectory.csv"));
  CHECK(slurp(dir_a / "o" / "report.json") == slurp(dir_b / "o" / "report.json"));
}

TEST_CASE("cmd_run signals non-convergence with exit code 2") {
  auto dir = fresh_dir("run_short");
  json cfg = quick_reduced_config(dir / "out");
  cfg["run"]["max_steps"] = 3;
  auto cfgpath = write_json(dir, "config.json", cfg);
  CHECK(gad::cli::cmd_run(cfgpath) == 2);
  json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["report"]["converged"] == false);
  CHECK(report["report"]["status"] == "max-steps");
}

TEST_CASE("cmd_scan writes one labelled row per grid point") {
  auto dir = fresh_dir("scan");
  json cfg = quick_reduced_config(dir / "out");
  cfg.erase("x0");
  cfg["run"]["max_steps"] = 2000;
  cfg["run"]["tol_force"] = 1e-6;
  cfg["run"]["tol_rhs"] = 1e-6;
  cfg["scan"] = {{"xmin", -0.5}, {"xmax", 0.5}, {"ymin", -0.5},
                 {"ymax", 0.5},  {"nx", 6},     {"ny", 6}};
  auto cfgpath = write_json(dir, "config.json", cfg);
  CHECK(gad::cli::cmd_scan(cfgpath) == 0);

  std::string csv = slurp(dir / "out" / "basin.csv");
  auto lines = split(csv, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  REQUIRE(lines.size() == 37);  // header + 36 cells
  CHECK(lines[0] == "x,y,label,steps,limit_x,limit_y");
  for (size_t k = 1; k < lines.size(); ++k) {
    auto cells = split(lines[k], ',');
    REQUIRE(cells.size() == 6);
    CHECK(std::stoi(cells[2]) == 0);  // every start point reaches the saddle
    CHECK(std::stod(cells[4]) == doctest::Approx(0.0).epsilon(1e-5));
  }
}

TEST_CASE("cmd_verify runs the built-in battery and reports success") {
  auto dir = fresh_dir("verify");
  CHECK(gad::cli::cmd_verify(4, 1, dir) == 0);
  json j = json::parse(slurp(dir / "verify.json"));
  CHECK(j["all_pass"] == true);
  REQUIRE(j["checks"].is_array());
  CHECK(j["checks"].size() >= 3);
  for (const auto& chk : j["checks"]) {
    CHECK(chk.contains("name"));
    CHECK(chk["pass"] == true);
  }
}

TEST_CASE("cmd_list names every problem and variant") {
  std::ostringstream out;
  CHECK(gad::cli::cmd_list(out) == 0);
  std::string text = out.str();
  for (const auto& id : problems::problem_ids())
    CHECK(text.find(id) != std::string::npos);
  for (const char* name : {"index1-gradient", "index1", "index1-reduced",
                           "index2-complex", "index2-real"})
    CHECK(text.find(name) != std::string::npos);
}

TEST_CASE("run_main maps config problems to exit code 1") {
  auto dir = fresh_dir("main");
  std::string missing = (dir / "nope.json").string();
  const char* argv_bad[] = {"gad", "run", missing.c_str()};
  CHECK(gad::cli::run_main(3, const_cast<char**>(argv_bad)) == 1);

  const char* argv_list[] = {"gad", "list"};
  CHECK(gad::cli::run_main(2, const_cast<char**>(argv_list)) == 0);

  const char* argv_none[] = {"gad"};
  CHECK(gad::cli::run_main(1, const_cast<char**>(argv_none)) == 1);
}

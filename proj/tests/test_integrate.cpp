#include <doctest.h>

#include <gad/integrate.hpp>
#include <gad/jacobian.hpp>
#include <gad/metric.hpp>
#include <gad/problems.hpp>

#include "helpers.hpp"

#include <cmath>

using namespace gad;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

// V = (x^2 - y^2) / 2: a pure linear saddle. With v = e_y invariant, the
// position dynamics is exactly x' = -x, y' = -y, so one RK4 step of the x
// component from 1 must equal the degree-4 Taylor polynomial of exp(-dt).
ProblemSpec linear_saddle() {
  ProblemSpec p;
  p.dim = 2;
  p.field = [](const Vector& x) { return vec2(-x(0), x(1)); };
  p.is_gradient = true;
  p.potential = [](const Vector& x) { return 0.5 * (x(0) * x(0) - x(1) * x(1)); };
  p.jacobian_action = [](const Vector&, const Vector& b) {
    return vec2(-b(0), b(1));
  };
  p.jacobian_transpose_action = p.jacobian_action;
  p.metric_weights = Vector::Ones(2);
  return p;
}

GadState make_state(Vector x, Vector v, Vector w) {
  GadState st;
  st.x = std::move(x);
  st.pairs.push_back(DirectionPair{std::move(v), std::move(w)});
  return st;
}

}  // namespace

TEST_CASE("warmup settles v onto the softest double-well mode") {
  auto dw = problems::double_well(1.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.warmup_steps = 800;
  cfg.seed = 3;
  auto pairs = warmup_directions(dw, Vector::Zero(2), variant, cfg);
  REQUIRE(pairs.size() == 1);
  CHECK(std::abs(std::abs(pairs[0].v(0)) - 1.0) <= 1e-6);
  CHECK(std::abs(pairs[0].v(1)) <= 1e-6);
  CHECK(pairs[0].w == pairs[0].v);  // gradient systems alias the dual
}

TEST_CASE("warmup settles both directions of a general system") {
  Matrix a = Vector(vec3(-0.5, 0.7, 2.0)).asDiagonal();
  auto p = gad::testing::linear_problem(a);
  GadVariant variant{GadKind::Index1General, 1.0};
  RunConfig cfg;
  cfg.dt = 0.02;
  cfg.warmup_steps = 1500;
  cfg.seed = 11;
  auto pairs = warmup_directions(p, Vector::Zero(3), variant, cfg);
  REQUIRE(pairs.size() == 1);
  Vector jv = jvp(p, Vector::Zero(3), pairs[0].v);
  CHECK(alpha(p, pairs[0].v, jv) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(inner_product(p, pairs[0].w, pairs[0].v) == doctest::Approx(1.0).epsilon(1e-12));
  // For a symmetric Jacobian the settled left direction matches v itself.
  CHECK(std::abs(std::abs(pairs[0].w(2)) - std::abs(pairs[0].v(2))) <= 1e-6);
}

TEST_CASE("warmup is deterministic and honors warmup_steps = 0") {
  auto lor = problems::lorenz(10.0, 8.0 / 3.0, 28.0);
  GadVariant variant{GadKind::Index1General, 1.0};
  RunConfig cfg;
  cfg.seed = 42;
  cfg.warmup_steps = 0;
  auto a = warmup_directions(lor, vec3(1.0, 2.0, 3.0), variant, cfg);
  auto b = warmup_directions(lor, vec3(1.0, 2.0, 3.0), variant, cfg);
  REQUIRE(a.size() == 1);
  CHECK(a[0].v == b[0].v);
  CHECK(a[0].w == b[0].w);
  CHECK(std::abs(inner_product(lor, a[0].v, a[0].v) - 1.0) <= 1e-14);
  CHECK(std::abs(inner_product(lor, a[0].w, a[0].v) - 1.0) <= 1e-14);

  GadVariant reduced{GadKind::Index1ReducedTau0, 1.0};
  auto dw = problems::double_well(1.0);
  CHECK(warmup_directions(dw, Vector::Zero(2), reduced, cfg).empty());
}

TEST_CASE("a fixed point of the augmented system does not move") {
  auto dw = problems::double_well(1.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 0.05;
  GadState st = make_state(Vector::Zero(2), vec2(1.0, 0.0), vec2(1.0, 0.0));
  for (auto stepper : {Stepper::Euler, Stepper::Rk4}) {
    cfg.stepper = stepper;
    auto out = step(dw, st, variant, cfg);
    CHECK((out.state.x - st.x).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((out.state.pairs[0].v - st.pairs[0].v).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(out.drift == 0.0);
    CHECK(out.state.t == doctest::Approx(cfg.dt));
  }
}

TEST_CASE("hand-checked Euler step on the double well") {
  auto dw = problems::double_well(3.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.stepper = Stepper::Euler;
  GadState st = make_state(vec2(0.1, 0.2), vec2(1.0, 0.0), vec2(1.0, 0.0));
  auto out = step(dw, st, variant, cfg);
  // F = (0.099, -0.6); x' = F - 2 (F, v) v = (-0.099, -0.6).
  CHECK(out.state.x(0) == doctest::Approx(0.09901).epsilon(1e-14));
  CHECK(out.state.x(1) == doctest::Approx(0.194).epsilon(1e-14));
  // v is already the soft eigenvector: J v - alpha v = 0, so v is unchanged.
  CHECK(out.state.pairs[0].v(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(out.state.pairs[0].v(1)) <= 1e-15);
  CHECK(out.drift <= 1e-15);
}

TEST_CASE("one RK4 step reproduces the quartic Taylor polynomial of exp") {
  auto p = linear_saddle();
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 0.1;
  cfg.stepper = Stepper::Rk4;
  GadState st = make_state(vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(0.0, 1.0));
  auto out = step(p, st, variant, cfg);
  // 1 - h + h^2/2 - h^3/6 + h^4/24 at h = 0.1.
  CHECK(out.state.x(0) == doctest::Approx(0.9048375).epsilon(1e-14));
  CHECK(std::abs(out.state.x(0) - std::exp(-0.1)) <= 1e-7);
  CHECK(std::abs(out.state.x(1)) <= 1e-16);
}

TEST_CASE("Euler normalization drift shrinks quadratically with dt") {
  auto lor = problems::lorenz(10.0, 8.0 / 3.0, 28.0);
  GadVariant variant{GadKind::Index1General, 1.0};

  auto max_drift = [&](double dt, int steps) {
    RunConfig cfg;
    cfg.dt = dt;
    cfg.stepper = Stepper::Euler;
    cfg.seed = 7;
    cfg.warmup_steps = 0;
    GadState st;
    st.x = vec3(2.0, 1.0, 18.0);
    st.pairs = warmup_directions(lor, st.x, variant, cfg);
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      auto out = step(lor, st, variant, cfg);
      worst = std::max(worst, out.drift);
      st = out.state;
    }
    return worst;
  };

  double coarse = max_drift(2e-3, 100);
  double fine = max_drift(1e-3, 200);
  CHECK(coarse > 0.0);
  double ratio = coarse / fine;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("RK4 keeps post-step pairs normalized to round-off") {
  auto lor = problems::lorenz(10.0, 8.0 / 3.0, 28.0);
  GadVariant variant{GadKind::Index1General, 1.0};
  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.seed = 19;
  cfg.warmup_steps = 50;
  GadState st;
  st.x = vec3(1.0, -2.0, 12.0);
  st.pairs = warmup_directions(lor, st.x, variant, cfg);
  for (int k = 0; k < 200; ++k) {
    auto out = step(lor, st, variant, cfg);
    st = out.state;
    CHECK(std::abs(inner_product(lor, st.pairs[0].v, st.pairs[0].v) - 1.0) <= 1e-12);
    CHECK(std::abs(inner_product(lor, st.pairs[0].w, st.pairs[0].v) - 1.0) <= 1e-12);
  }
}

TEST_CASE("step reports a blowup as DivergenceError") {
  auto dw = problems::double_well(3.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.blowup_norm = 0.5;
  GadState st = make_state(vec2(0.9, 0.2), vec2(1.0, 0.0), vec2(1.0, 0.0));
  CHECK_THROWS_AS((void)step(dw, st, variant, cfg), DivergenceError);
}

TEST_CASE("check_convergence distinguishes the three regimes") {
  auto dw = problems::double_well(1.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  GadState at_saddle = make_state(Vector::Zero(2), vec2(1.0, 0.0), vec2(1.0, 0.0));
  CHECK(check_convergence(dw, at_saddle, variant, cfg) == RunStatus::Converged);

  GadState away = make_state(vec2(0.5, 0.1), vec2(1.0, 0.0), vec2(1.0, 0.0));
  CHECK(check_convergence(dw, away, variant, cfg) == RunStatus::Running);

  GadState far = make_state(vec2(1e7, 0.0), vec2(1.0, 0.0), vec2(1.0, 0.0));
  CHECK(check_convergence(dw, far, variant, cfg) == RunStatus::Diverged);
}

TEST_CASE("the reduced flow finds the double-well saddle from the strip") {
  auto dw = problems::double_well(3.0);
  GadVariant variant{GadKind::Index1ReducedTau0, 1.0};
  RunConfig cfg;
  cfg.dt = 1e-2;
  cfg.stepper = Stepper::Rk4;
  cfg.max_steps = 20000;
  auto out = run_gad(dw, vec2(0.9, 0.2), variant, cfg);
  REQUIRE(out.report.converged);
  CHECK(out.report.status == "converged");
  CHECK(out.report.x_star.lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(out.report.lambda_star == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(out.report.residual_force <= cfg.tol_force);
  CHECK(out.report.morse_index == 1);
}

TEST_CASE("the reduced flow reports escape from outside the strip") {
  // For mu < 2 the wells sit outside the branch-switch strip, so x settles
  // at +-1 while the reflected y-force grows without bound: a genuine escape.
  // (For mu > 2 the exterior stalls on the switch line instead; the basin
  // tests cover that.)
  auto dw = problems::double_well(1.0);
  GadVariant variant{GadKind::Index1ReducedTau0, 1.0};
  RunConfig cfg;
  cfg.dt = 1e-2;
  cfg.stepper = Stepper::Euler;
  cfg.max_steps = 20000;
  cfg.blowup_norm = 1e3;
  auto out = run_gad(dw, vec2(2.0, 1.0), variant, cfg);
  CHECK_FALSE(out.report.converged);
  CHECK(out.report.status == "diverged");
}

TEST_CASE("a run that exhausts its budget says so") {
  auto dw = problems::double_well(1.0);
  GadVariant variant{GadKind::Index1Gradient, 1.0};
  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.max_steps = 25;
  cfg.record_every = 10;
  cfg.tol_force = 0.0;  // unreachable: the run must hit the step budget
  cfg.tol_rhs = 0.0;
  cfg.seed = 5;
  auto out = run_gad(dw, vec2(0.4, 0.1), variant, cfg);
  CHECK_FALSE(out.report.converged);
  CHECK(out.report.status == "max-steps");
  CHECK(out.report.steps == 25);
  // Samples at steps 0, 10, 20 and the terminal state 25.
  REQUIRE(out.trajectory.samples.size() == 4);
  CHECK(out.trajectory.samples[0].t() == 0.0);
  CHECK(out.trajectory.samples[1].t() == doctest::Approx(0.010).epsilon(1e-12));
  CHECK(out.trajectory.samples[3].t() == doctest::Approx(0.025).epsilon(1e-12));
  for (size_t i = 1; i < out.trajectory.samples.size(); ++i)
    CHECK(out.trajectory.samples[i].t() > out.trajectory.samples[i - 1].t());
}

TEST_CASE("index-1 GAD climbs from the Lorenz attractor basin to the origin") {
  auto lor = problems::lorenz(10.0, 8.0 / 3.0, 30.0);
  GadVariant variant{GadKind::Index1General, 1.0};
  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.stepper = Stepper::Rk4;
  cfg.max_steps = 200000;
  cfg.warmup_steps = 500;
  cfg.seed = 1;
  cfg.record_every = 100;
  auto out = run_gad(lor, vec3(1.0, 1.0, 20.0), variant, cfg);
  REQUIRE(out.report.converged);
  CHECK(out.report.x_star.lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(out.report.lambda_star == doctest::Approx(12.3955).epsilon(1e-3));
  CHECK(out.report.morse_index == 1);
  CHECK(out.report.residual_eig <= 1e-6);

  // Determinism: identical inputs, identical outputs.
  auto again = run_gad(lor, vec3(1.0, 1.0, 20.0), variant, cfg);
  CHECK(again.report.steps == out.report.steps);
  CHECK((again.report.x_star - out.report.x_star).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("complex-pair GAD finds a linear spiral saddle") {
  // Eigenvalues 0.1 +- i and -1: an unstable rotating plane.
  Matrix a(3, 3);
  a << 0.1, -1.0, 0.0, 1.0, 0.1, 0.0, 0.0, 0.0, -1.0;
  auto p = gad::testing::linear_problem(a);
  GadVariant variant{GadKind::Index2Complex, 1.0};
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.stepper = Stepper::Rk4;
  cfg.max_steps = 40000;
  cfg.warmup_steps = 200;
  cfg.seed = 9;
  cfg.record_every = 200;
  auto out = run_gad(p, vec3(0.5, 0.5, 0.5), variant, cfg);
  REQUIRE(out.report.converged);
  CHECK(out.report.x_star.lpNorm<Eigen::Infinity>() <= 1e-6);
  REQUIRE(out.report.lambda_pair.has_value());
  CHECK(out.report.lambda_pair->real() == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(std::abs(out.report.lambda_pair->imag()) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(out.report.morse_index == 2);
}

TEST_CASE("two-pair real GAD finds a linear index-2 saddle") {
  Matrix a = Vector(vec3(2.0, 1.0, -1.0)).asDiagonal();
  auto p = gad::testing::linear_problem(a);
  GadVariant variant{GadKind::Index2RealDeflated, 1.0};
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.stepper = Stepper::Rk4;
  cfg.max_steps = 20000;
  cfg.warmup_steps = 400;
  cfg.seed = 13;
  cfg.record_every = 100;
  auto out = run_gad(p, vec3(0.4, 0.3, 0.5), variant, cfg);
  REQUIRE(out.report.converged);
  CHECK(out.report.x_star.lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(out.report.lambda_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(out.report.morse_index == 2);

  // Normalization stays at round-off along the recorded trajectory.
  for (const auto& s : out.trajectory.samples) {
    if (s.state.pairs.empty()) continue;
    for (const auto& pr : s.state.pairs) {
      CHECK(std::abs(inner_product(p, pr.v, pr.v) - 1.0) <= 1e-12);
      CHECK(std::abs(inner_product(p, pr.w, pr.v) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("stepper names round-trip") {
  CHECK(parse_stepper("euler") == Stepper::Euler);
  CHECK(parse_stepper("rk4") == Stepper::Rk4);
  CHECK_FALSE(parse_stepper("rk5").has_value());
  CHECK(parse_stepper(to_string(Stepper::Euler)) == Stepper::Euler);
  CHECK(parse_stepper(to_string(Stepper::Rk4)) == Stepper::Rk4);
}

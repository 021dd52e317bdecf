#include "gad/integrate.hpp"

#include "gad/dynamics.hpp"
#include "gad/metric.hpp"
#include "gad/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

namespace gad {

namespace {

// Pre-renormalization deviation of every pair in a stacked phase vector.
double measure_drift(const ProblemSpec& problem, const Vector& flat,
                     GadKind kind) {
  const Index n = problem.dim;
  double drift = 0.0;
  Index at = n;
  for (int p = 0; p < pair_count(kind); ++p) {
    const Vector v = flat.segment(at, n);
    at += n;
    Vector w = v;
    if (kind != GadKind::Index1Gradient) {
      w = flat.segment(at, n);
      at += n;
    }
    drift = std::max(drift, std::abs(inner_product(problem, v, v) - 1.0));
    // The complex pair keeps |w| = 1 instead of (w, v) = 1: the phases of the
    // counter-rotating directions cross periodically, so the duality pairing
    // has no stable scale.
    drift = std::max(drift, kind == GadKind::Index2Complex
                                ? std::abs(inner_product(problem, w, w) - 1.0)
                                : std::abs(inner_product(problem, w, v) - 1.0));
  }
  return drift;
}

DirectionPair renormalize_unit(const ProblemSpec& problem, DirectionPair pair) {
  const double vn = metric_norm(problem, pair.v);
  const double wn = metric_norm(problem, pair.w);
  if (!(vn > 1e-12) || !(wn > 1e-12))
    throw DegenerateDualityError("complex pair collapsed to zero length");
  if (std::abs(vn * vn - 1.0) > 4e-15) pair.v /= vn;
  if (std::abs(wn * wn - 1.0) > 4e-15) pair.w /= wn;
  return pair;
}

void renormalize_state(const ProblemSpec& problem, GadState& state,
                       GadKind kind) {
  for (auto& pair : state.pairs) {
    pair = kind == GadKind::Index2Complex
               ? renormalize_unit(problem, std::move(pair))
               : normalize_pair(problem, std::move(pair));
    if (kind == GadKind::Index1Gradient) pair.w = pair.v;
  }
}

// One stepper advance from a pre-evaluated slope k1 (shared by step() and
// the run loop so convergence checks reuse the first evaluation).
Vector advance_flat(const ProblemSpec& problem, const Vector& flat,
                    const Vector& k1, const GadVariant& variant,
                    const RunConfig& cfg) {
  const double dt = cfg.dt;
  if (cfg.stepper == Stepper::Euler) return flat + dt * k1;

  const Vector k2 =
      eval_rhs_flat(problem, Vector(flat + 0.5 * dt * k1), variant, cfg.jvp);
  const Vector k3 =
      eval_rhs_flat(problem, Vector(flat + 0.5 * dt * k2), variant, cfg.jvp);
  const Vector k4 =
      eval_rhs_flat(problem, Vector(flat + dt * k3), variant, cfg.jvp);
  return flat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

StepResult finish_step(const ProblemSpec& problem, const Vector& next_flat,
                       const GadVariant& variant, const RunConfig& cfg,
                       double next_t) {
  const Vector x = next_flat.head(problem.dim);
  if (!x.allFinite() || norm_inf(x) > cfg.blowup_norm)
    throw DivergenceError("trajectory left the norm bound " +
                              std::to_string(cfg.blowup_norm),
                          x.allFinite() ? norm_inf(x)
                                        : std::numeric_limits<double>::infinity(),
                          0);
  StepResult result;
  result.drift = measure_drift(problem, next_flat, variant.kind);
  result.state = unpack_state(problem, next_flat, variant.kind, next_t);
  renormalize_state(problem, result.state, variant.kind);
  return result;
}

RunStatus status_from_rhs(const ProblemSpec& problem, const Vector& x,
                          const Vector& rhs_flat, double force_inf,
                          const RunConfig& cfg) {
  if (norm_inf(x) > cfg.blowup_norm) return RunStatus::Diverged;
  if (force_inf < cfg.tol_force &&
      norm_inf(Vector(rhs_flat.head(problem.dim))) < cfg.tol_rhs)
    return RunStatus::Converged;
  return RunStatus::Running;
}

// Terminal diagnostics: the inverted eigenvalue, its residual, the rotation
// pair for the complex variant, and the dense index count.
void fill_report_spectrum(const ProblemSpec& problem, const GadState& state,
                          const GadVariant& variant, const RunConfig& cfg,
                          SaddleReport& report) {
  const Vector& x = state.x;
  switch (variant.kind) {
    case GadKind::Index1Gradient:
    case GadKind::Index1General: {
      const Vector& v = state.pairs.at(0).v;
      const Vector jv = jvp(problem, x, v, cfg.jvp);
      report.lambda_star = alpha(problem, v, jv);
      report.residual_eig = norm_inf(jv - report.lambda_star * v);
      break;
    }
    case GadKind::Index1ReducedTau0: {
      auto eig = hessian_smallest_eigvec(problem, x, cfg.jvp);
      report.lambda_star = -eig.value;  // field-Jacobian convention
      const Vector jv = jvp(problem, x, eig.vector, cfg.jvp);
      report.residual_eig = norm_inf(jv - report.lambda_star * eig.vector);
      break;
    }
    case GadKind::Index2Complex: {
      const Vector& v1 = state.pairs.at(0).v;
      const Vector& w1 = state.pairs.at(0).w;
      const Vector v2 = jvp(problem, x, v1, cfg.jvp);
      const Vector w2 = jtvp(problem, x, w1, cfg.jvp);
      const Vector jv2 = jvp(problem, x, v2, cfg.jvp);
      Eigen::Matrix2d a, m;
      a << inner_product(problem, w1, v1), inner_product(problem, w1, v2),
          inner_product(problem, w2, v1), inner_product(problem, w2, v2);
      m << inner_product(problem, w1, v2), inner_product(problem, w1, jv2),
          inner_product(problem, w2, v2), inner_product(problem, w2, jv2);
      Eigen::EigenSolver<Eigen::Matrix2d> es(a.inverse() * m);
      Complex pair = es.eigenvalues()(0).imag() >= 0.0 ? es.eigenvalues()(0)
                                                       : es.eigenvalues()(1);
      report.lambda_pair = pair;
      report.lambda_star = pair.real();
      // Residual of the invariant plane: (J^2 - 2 Re J + |pair|^2) v1.
      report.residual_eig = norm_inf(jv2 - 2.0 * pair.real() * v2 +
                                     std::norm(pair) * v1);
      break;
    }
    case GadKind::Index2RealDeflated: {
      const DirectionPair& p1 = state.pairs.at(0);
      const DirectionPair& p2 = state.pairs.at(1);
      const Vector jv1 = jvp(problem, x, p1.v, cfg.jvp);
      report.lambda_star = alpha(problem, p1.v, jv1);
      const Vector j2v2 =
          deflate_action(problem, x, p1.v, p1.w, p2.v, cfg.jvp);
      const double alpha2 = alpha(problem, p2.v, j2v2);
      report.residual_eig =
          std::max(norm_inf(jv1 - report.lambda_star * p1.v),
                   norm_inf(j2v2 - alpha2 * p2.v));
      break;
    }
  }
  if (problem.dim <= cfg.jvp.dense_assembly_limit)
    report.morse_index = classify_index(problem, x, cfg.jvp).morse_index;
}

}  // namespace

const char* to_string(Stepper stepper) {
  return stepper == Stepper::Euler ? "euler" : "rk4";
}

std::optional<Stepper> parse_stepper(std::string_view name) {
  if (name == "euler") return Stepper::Euler;
  if (name == "rk4") return Stepper::Rk4;
  return std::nullopt;
}

std::vector<DirectionPair> warmup_directions(const ProblemSpec& problem,
                                             const Vector& x0,
                                             const GadVariant& variant,
                                             const RunConfig& cfg) {
  const int pairs = pair_count(variant.kind);
  if (pairs == 0) return {};

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    Vector v(problem.dim);
    for (Index i = 0; i < problem.dim; ++i) v(i) = gauss(rng);
    return v;
  };

  std::vector<DirectionPair> out;
  for (int p = 0; p < pairs; ++p) {
    DirectionPair pair;
    pair.v = draw();
    pair.w = variant.kind == GadKind::Index1Gradient ? pair.v : draw();
    pair = renormalize_unit(problem, std::move(pair));
    out.push_back(std::move(pair));
  }

  // The relaxation keeps every direction at unit length and uses the
  // matching Rayleigh-quotient multipliers. Duality-preserving multipliers
  // are unusable here: a transient that pushes w nearly orthogonal to v
  // makes the (w,v)=1 rescale inflate |w|, the multiplier grows with |w|,
  // and once step*multiplier passes the Euler stability bound the most
  // negative eigendirection becomes the fastest-growing discrete mode. The
  // duality scale the run dynamics maintain is restored once at the end.
  const double step_scale = cfg.dt / variant.tau;
  for (long s = 0; s < cfg.warmup_steps; ++s) {
    // Synchronous Euler update of the direction equations at frozen x0.
    const Vector jv1 = jvp(problem, x0, out[0].v, cfg.jvp);
    const Scalar a1 = alpha(problem, out[0].v, jv1);
    Vector v1_new = out[0].v + step_scale * (jv1 - a1 * out[0].v);
    Vector w1_new;
    if (variant.kind == GadKind::Index1Gradient) {
      w1_new = v1_new;
    } else {
      const Vector jtw1 = jtvp(problem, x0, out[0].w, cfg.jvp);
      const Scalar b1 = alpha(problem, out[0].w, jtw1);
      w1_new = out[0].w + step_scale * (jtw1 - b1 * out[0].w);
    }

    if (pairs == 2) {
      const Vector j2v2 =
          deflate_action(problem, x0, out[0].v, out[0].w, out[1].v, cfg.jvp);
      const Vector j2tw2 = deflate_transpose_action(problem, x0, out[0].v,
                                                    out[0].w, out[1].w,
                                                    cfg.jvp);
      const Scalar a2 = alpha(problem, out[1].v, j2v2);
      const Scalar b2 = alpha(problem, out[1].w, j2tw2);
      out[1].v += step_scale * (j2v2 - a2 * out[1].v);
      out[1].w += step_scale * (j2tw2 - b2 * out[1].w);
      out[1] = renormalize_unit(problem, std::move(out[1]));
    }

    out[0].v = std::move(v1_new);
    out[0].w = std::move(w1_new);
    out[0] = renormalize_unit(problem, std::move(out[0]));
    if (variant.kind == GadKind::Index1Gradient) out[0].w = out[0].v;
  }

  // The run dynamics keep (w,v)=1 for every kind except the complex one,
  // whose counter-rotating w stays at unit length instead.
  if (variant.kind != GadKind::Index2Complex)
    for (auto& pair : out) pair = normalize_pair(problem, std::move(pair));
  return out;
}

StepResult step(const ProblemSpec& problem, const GadState& state,
                const GadVariant& variant, const RunConfig& cfg) {
  const Vector flat = pack_state(state, variant.kind);
  const Vector k1 = eval_rhs_flat(problem, flat, variant, cfg.jvp);
  return finish_step(problem, advance_flat(problem, flat, k1, variant, cfg),
                     variant, cfg, state.t + cfg.dt);
}

RunStatus check_convergence(const ProblemSpec& problem, const GadState& state,
                            const GadVariant& variant, const RunConfig& cfg) {
  RhsDiagnostics diag;
  const Vector flat = pack_state(state, variant.kind);
  const Vector rhs = eval_rhs_flat(problem, flat, variant, cfg.jvp, &diag);
  return status_from_rhs(problem, state.x, rhs, diag.force_inf, cfg);
}

RunResult run_gad(const ProblemSpec& problem, const Vector& x0,
                  const GadVariant& variant, const RunConfig& cfg) {
  GadState initial;
  initial.x = x0;
  initial.pairs = warmup_directions(problem, x0, variant, cfg);
  return run_gad(problem, std::move(initial), variant, cfg);
}

RunResult run_gad(const ProblemSpec& problem, GadState initial,
                  const GadVariant& variant, const RunConfig& cfg) {
  validate_problem(problem);
  if (static_cast<int>(initial.pairs.size()) != pair_count(variant.kind))
    throw DimensionError(
        "run_gad: initial state carries " +
        std::to_string(initial.pairs.size()) + " pairs, variant needs " +
        std::to_string(pair_count(variant.kind)));
  renormalize_state(problem, initial, variant.kind);

  RunResult result;
  GadState state = std::move(initial);
  double last_drift = 0.0;
  long step_idx = 0;
  long last_recorded = -1;
  RunStatus status = RunStatus::Running;

  auto record = [&](double force_inf, const RhsDiagnostics& diag) {
    if (step_idx == last_recorded) return;
    TrajectorySample sample;
    sample.state = state;
    sample.force_inf = force_inf;
    sample.alpha = diag.alpha;
    sample.beta = diag.beta;
    sample.drift = last_drift;
    result.trajectory.samples.push_back(std::move(sample));
    last_recorded = step_idx;
  };

  try {
    while (true) {
      RhsDiagnostics diag;
      const Vector flat = pack_state(state, variant.kind);
      const Vector k1 = eval_rhs_flat(problem, flat, variant, cfg.jvp, &diag);

      if (step_idx % std::max(cfg.record_every, 1L) == 0)
        record(diag.force_inf, diag);
      // Convergence is certified on post-step states only, so every
      // converged run performs at least one step.
      status = step_idx == 0
                   ? RunStatus::Running
                   : status_from_rhs(problem, state.x, k1, diag.force_inf, cfg);
      if (status != RunStatus::Running || step_idx >= cfg.max_steps) {
        record(diag.force_inf, diag);
        break;
      }

      auto advanced = finish_step(
          problem, advance_flat(problem, flat, k1, variant, cfg), variant,
          cfg, state.t + cfg.dt);
      state = std::move(advanced.state);
      last_drift = advanced.drift;
      ++step_idx;
    }
  } catch (const DivergenceError&) {
    status = RunStatus::Diverged;
  } catch (const DegenerateDualityError&) {
    status = RunStatus::Diverged;  // unrecoverable direction collapse
  }

  SaddleReport& report = result.report;
  report.x_star = state.x;
  report.steps = step_idx;
  report.converged = status == RunStatus::Converged;
  report.status = status == RunStatus::Converged   ? "converged"
                  : status == RunStatus::Diverged ? "diverged"
                                                  : "max-steps";
  try {
    report.residual_force =
        norm_inf(problem.field(state.x));
    fill_report_spectrum(problem, state, variant, cfg, report);
  } catch (const GadError&) {
    // Terminal diagnostics are best-effort for failed runs.
  }
  return result;
}

}  // namespace gad

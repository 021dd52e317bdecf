#pragma once

#include <cstdint>

#include "gad/dynamics.hpp"
#include "gad/types.hpp"

namespace gad {

enum class Stepper { Euler, Rk4 };

const char* to_string(Stepper stepper);
std::optional<Stepper> parse_stepper(std::string_view name);

/// Time stepping and termination controls.
struct RunConfig {
  double dt = 1e-3;
  Stepper stepper = Stepper::Rk4;
  long max_steps = 1'000'000;
  /// Converged when |F(x)|_inf < tol_force and |x'|_inf < tol_rhs.
  double tol_force = 1e-8;
  double tol_rhs = 1e-8;
  /// Diverged when |x|_inf exceeds this.
  double blowup_norm = 1e6;
  /// Direction-only settling steps at frozen x0 before the run.
  long warmup_steps = 0;
  /// Trajectory sampling stride in steps.
  long record_every = 10;
  /// Seeds the random initial directions.
  std::uint64_t seed = 0;
  JvpConfig jvp;
};

enum class RunStatus { Running, Converged, Diverged };

/// Draws seeded random unit directions for the variant (gradient variants
/// alias w = v) and settles them by integrating only the direction
/// equations at frozen x0 for cfg.warmup_steps Euler steps of size cfg.dt,
/// renormalizing after each. Returns normalized pairs; empty for the
/// reduced variant.
std::vector<DirectionPair> warmup_directions(const ProblemSpec& problem,
                                             const Vector& x0,
                                             const GadVariant& variant,
                                             const RunConfig& cfg);

/// One explicit step of the full augmented system.
struct StepResult {
  GadState state;
  /// Pre-renormalization drift: max over pairs of |(v,v)-1| and |(w,v)-1|
  /// after the raw step.
  double drift = 0.0;
};

/// Advances one step of cfg.stepper, renormalizes every pair, advances t.
/// Throws DivergenceError when |x|_inf exceeds cfg.blowup_norm after the
/// step, and propagates normalization failures (DegenerateDualityError).
StepResult step(const ProblemSpec& problem, const GadState& state,
                const GadVariant& variant, const RunConfig& cfg);

/// Pure classification of the current state: Diverged on the norm bound,
/// Converged when both residual tests pass, Running otherwise.
RunStatus check_convergence(const ProblemSpec& problem, const GadState& state,
                            const GadVariant& variant, const RunConfig& cfg);

struct RunResult {
  SaddleReport report;
  TrajectoryRecord trajectory;
};

/// Integrates the variant from x0 until convergence, divergence, or
/// cfg.max_steps. Directions come from warmup_directions. Divergence and
/// degenerate-duality failures are caught and reported (converged = false);
/// the partial trajectory is always returned. Identical inputs (problem,
/// x0, variant, cfg) produce identical results.
RunResult run_gad(const ProblemSpec& problem, const Vector& x0,
                  const GadVariant& variant, const RunConfig& cfg);

/// Same, from a caller-supplied initial state (pairs are renormalized).
RunResult run_gad(const ProblemSpec& problem, GadState initial,
                  const GadVariant& variant, const RunConfig& cfg);

}  // namespace gad

#pragma once

#include "gad/types.hpp"

namespace gad {

// ============================================================================
// Jacobian actions
// ============================================================================

/// Controls finite-difference probes and dense fallbacks.
struct JvpConfig {
  /// Base step of the central-difference probe.
  double epsilon0 = 1e-5;
  /// Floor of the denominator in the step scaling rule.
  double eps_floor = 1e-12;
  /// Largest dimension for which a dense Jacobian may be assembled when no
  /// transpose callback exists.
  Index dense_assembly_limit = 2048;
};

/// Probe step eps = epsilon0 * (1 + |x|_inf) / max(|b|_inf, eps_floor).
double fd_step(const JvpConfig& cfg, const Vector& x, const Vector& b);

/// J(x) b. Uses the problem's jacobian_action callback when present,
/// otherwise the central difference (F(x+eps b) - F(x-eps b)) / (2 eps).
/// Throws EvaluationError when an evaluation is non-finite.
Vector jvp(const ProblemSpec& problem, const Vector& x, const Vector& b,
           const JvpConfig& cfg = {});

/// J(x)^T b. Resolution order: transpose callback; gradient systems reuse
/// jvp (symmetric Jacobian); otherwise a dense Jacobian is assembled and
/// transpose-multiplied, which requires dim <= cfg.dense_assembly_limit
/// (CapabilityError beyond it).
Vector jtvp(const ProblemSpec& problem, const Vector& x, const Vector& b,
            const JvpConfig& cfg = {});

/// Dense J(x); column j is jvp(x, e_j). Throws CapabilityError when
/// dim > cfg.dense_assembly_limit.
Matrix assemble_jacobian(const ProblemSpec& problem, const Vector& x,
                         const JvpConfig& cfg = {});

// ============================================================================
// Dense eigensolves
// ============================================================================

/// Eigenvalues sorted by descending real part (descending imaginary part on
/// ties); columns of `vectors` are the matching unit right eigenvectors.
/// Real eigenvectors have their first significant component positive.
struct EigDecomposition {
  ComplexVector values;
  ComplexMatrix vectors;
};

/// Dense nonsymmetric eigendecomposition. Throws NumericalError when the
/// underlying iteration fails.
EigDecomposition eig_dense(const Matrix& m);

/// Smallest eigenpair of the Hessian of V, for gradient systems.
struct SmallestHessianEig {
  double value = 0.0;
  Vector vector;
  /// Set when the two smallest eigenvalues are within tie_tol of each other;
  /// the returned vector is then an arbitrary member of the near-eigenspace.
  bool degenerate = false;
};

/// Assembles H = -J(x) (gradient systems have J = -Hess V), symmetrizes,
/// and returns the smallest eigenpair. The eigenvector is Euclidean-unit
/// with its first significant component positive. Throws CapabilityError on
/// non-gradient problems.
SmallestHessianEig hessian_smallest_eigvec(const ProblemSpec& problem,
                                           const Vector& x,
                                           const JvpConfig& cfg = {},
                                           double tie_tol = 1e-8);

}  // namespace gad

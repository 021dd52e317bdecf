#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gad {

// ============================================================================
// Dense types
// ============================================================================

template <class ScalarT>
using DenseVector = Eigen::Matrix<ScalarT, Eigen::Dynamic, 1>;

template <class ScalarT>
using DenseMatrix = Eigen::Matrix<ScalarT, Eigen::Dynamic, Eigen::Dynamic>;

using Scalar = double;
using Index = Eigen::Index;
using Vector = DenseVector<Scalar>;
using Matrix = DenseMatrix<Scalar>;
using Complex = std::complex<Scalar>;
using ComplexVector = DenseVector<Complex>;
using ComplexMatrix = DenseMatrix<Complex>;

// ============================================================================
// Errors
// ============================================================================

/// Base class for all errors thrown by this library.
struct GadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector lengths disagree with the declared problem dimension.
struct DimensionError : GadError {
  using GadError::GadError;
};

/// A direction pair cannot be normalized because (w, v/|v|) is (near) zero,
/// or because v itself is (near) zero.
struct DegenerateDualityError : GadError {
  using GadError::GadError;
};

/// A field, potential, or Jacobian-action callback produced a non-finite
/// value.
struct EvaluationError : GadError {
  using GadError::GadError;
};

/// The requested operation needs a capability the problem does not provide
/// (e.g. dense assembly beyond the configured size limit, or a
/// gradient-only operation on a non-gradient system).
struct CapabilityError : GadError {
  using GadError::GadError;
};

/// A dense numerical routine (eigensolver, linear solve) failed to converge.
struct NumericalError : GadError {
  using GadError::GadError;
};

/// The 2x2 projection system of the two-direction dynamics is singular to
/// working precision.
struct NearSingularProjectionError : GadError {
  using GadError::GadError;
};

/// A spectrum prediction was requested for a matrix with (near) repeated
/// eigenvalues.
struct DegenerateEigenvalueError : GadError {
  using GadError::GadError;
};

/// The trajectory left the configured norm bound.
struct DivergenceError : GadError {
  DivergenceError(const std::string& what, double norm, long step)
      : GadError(what), norm(norm), step(step) {}
  double norm = 0.0;
  long step = 0;
};

// ============================================================================
// Problem description
// ============================================================================

/// F(x). Must return a finite vector of length dim for finite input.
using FieldFn = std::function<Vector(const Vector&)>;

/// (x, b) -> J(x) b where J = dF/dx, or its transpose.
using JacobianActionFn = std::function<Vector(const Vector&, const Vector&)>;

/// V(x), for gradient systems where F = -grad V in the problem metric.
using PotentialFn = std::function<Scalar(const Vector&)>;

/// Immutable description of an autonomous system x' = F(x).
///
/// Optional callbacks refine behaviour but never change semantics: when
/// jacobian_action / jacobian_transpose_action are absent, finite
/// differences (or dense assembly) take over.
struct ProblemSpec {
  Index dim = 0;
  FieldFn field;
  JacobianActionFn jacobian_action;            ///< optional
  JacobianActionFn jacobian_transpose_action;  ///< optional
  bool is_gradient = false;
  PotentialFn potential;  ///< optional, gradient systems only
  /// Diagonal metric; inner products are sum_i metric_weights[i] u_i z_i.
  /// Strictly positive, length dim.
  Vector metric_weights;
};

/// Throws DimensionError / GadError when the problem is malformed
/// (dim < 1, missing field, non-positive or mis-sized metric weights).
void validate_problem(const ProblemSpec& problem);

// ============================================================================
// Dynamic state
// ============================================================================

/// Right/left direction pair carried by the ascent dynamics.
/// Normalized pairs satisfy (v,v) = 1 and (w,v) = 1 in the problem metric.
/// Gradient variants keep w equal to v.
struct DirectionPair {
  Vector v;
  Vector w;
};

/// Position plus its direction pairs. `pairs` holds zero (reduced variant),
/// one (single-direction variants), or two (two-direction variants) entries.
struct GadState {
  Vector x;
  std::vector<DirectionPair> pairs;
  double t = 0.0;
};

// ============================================================================
// Results
// ============================================================================

/// Outcome of a saddle search.
struct SaddleReport {
  Vector x_star;
  /// (v, Jv) at the terminal state.
  double lambda_star = 0.0;
  /// Rotation pair estimate for the complex two-direction variant
  /// (conjugate implied).
  std::optional<Complex> lambda_pair;
  /// |F(x_star)|_inf.
  double residual_force = std::numeric_limits<double>::infinity();
  /// |J v - lambda_star v|_inf at the terminal state.
  double residual_eig = std::numeric_limits<double>::infinity();
  /// Count of Jacobian eigenvalues with positive real part; -1 if not
  /// computed.
  int morse_index = -1;
  bool converged = false;
  long steps = 0;
  /// "converged" | "max-steps" | "diverged".
  std::string status;
};

/// One recorded trajectory point. Time lives in state.t.
struct TrajectorySample {
  GadState state;
  double force_inf = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Pre-renormalization drift of the step that produced this sample:
  /// max over pairs of |(v,v)-1| and |(w,v)-1| (|(w,w)-1| for the complex
  /// variant, whose w is kept at unit length) before renormalizing.
  double drift = 0.0;

  double t() const { return state.t; }
};

/// Samples in strictly increasing time order.
struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
};

}  // namespace gad

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "gad/jacobian.hpp"
#include "gad/types.hpp"

namespace gad {

// ============================================================================
// Variants
// ============================================================================

enum class GadKind {
  /// Single direction, gradient systems; w aliases v.
  Index1Gradient,
  /// Single right/left pair, general systems.
  Index1General,
  /// Relaxation limit of the direction equation: v is the smallest-eigenvalue
  /// Hessian eigenvector of the current point. Gradient systems only.
  Index1ReducedTau0,
  /// Two reflected directions; the second pair is formed algebraically as
  /// (J v1, J^T w1). Targets saddles whose unstable plane is a complex pair.
  Index2Complex,
  /// Two integrated pairs, the second driven by the rank-one deflated
  /// Jacobian. Targets saddles with two real unstable eigenvalues.
  Index2RealDeflated,
};

struct GadVariant {
  GadKind kind = GadKind::Index1General;
  /// Relaxation constant scaling the direction equations as 1/tau.
  double tau = 1.0;
};

/// Number of integrated direction pairs carried by a variant (0, 1, or 2).
int pair_count(GadKind kind);

const char* to_string(GadKind kind);

/// Parses the identifiers accepted in config files:
/// "index1-gradient", "index1", "index1-reduced", "index2-complex",
/// "index2-real".
std::optional<GadKind> parse_gad_kind(std::string_view name);

// ============================================================================
// Scalar coefficients
// ============================================================================

/// alpha = (v, Jv) in the problem metric.
Scalar alpha(const ProblemSpec& problem, const Vector& v, const Vector& jv);

/// beta = 2 (w, Jv) - alpha_val in the problem metric.
Scalar beta(const ProblemSpec& problem, const Vector& w, const Vector& jv,
            Scalar alpha_val);

// ============================================================================
// Right-hand sides
// ============================================================================

/// Gradient form, single direction (w = v):
///   x' = F - 2 (F, v) v
///   v' = (1/tau) [Jv - (v, Jv) v]
/// with F = -grad V and J = dF/dx = -Hess V.
struct Index1GradientRhs {
  Vector x_dot;
  Vector v_dot;
  Scalar alpha = 0.0;
  Scalar force_inf = 0.0;
};
Index1GradientRhs rhs_index1_gradient(const ProblemSpec& problem,
                                      const Vector& x, const Vector& v,
                                      double tau = 1.0,
                                      const JvpConfig& cfg = {});

/// General form, single right/left pair:
///   x' = F - 2 (F, w) v
///   v' = (1/tau) [Jv   - alpha(v) v]
///   w' = (1/tau) [J^T w - beta(v,w) w]
struct Index1Rhs {
  Vector x_dot;
  Vector v_dot;
  Vector w_dot;
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Scalar force_inf = 0.0;
};
Index1Rhs rhs_index1(const ProblemSpec& problem, const Vector& x,
                     const Vector& v, const Vector& w, double tau = 1.0,
                     const JvpConfig& cfg = {});

/// Relaxation limit (tau -> 0) of the gradient form: the direction is the
/// smallest-eigenvalue Hessian eigenvector at the current point,
///   x' = -grad V + 2 (grad V, v(x)) v(x).
struct ReducedRhs {
  Vector x_dot;
  /// The direction used, Euclidean-unit.
  Vector v;
  /// Smallest Hessian eigenvalue at x.
  Scalar lambda_min = 0.0;
  Scalar force_inf = 0.0;
  /// Smallest Hessian eigenvalue nearly tied with the next one.
  bool degenerate = false;
};
ReducedRhs rhs_index1_reduced(const ProblemSpec& problem, const Vector& x,
                              const JvpConfig& cfg = {});

/// Projection coefficients (c1, c2) solving
///   (F - c1 v1 - c2 v2, w1) = 0 and (F - c1 v1 - c2 v2, w2) = 0,
/// i.e. the 2x2 system a c = f with a_ij = (w_i, v_j), f_i = (F, w_i),
/// by Cramer's rule with determinant a11 a22 - a12 a21. Throws
/// NearSingularProjectionError when |det| < det_tol * scale with
/// scale = max(|a11 a22|, |a12 a21|).
std::array<Scalar, 2> coeffs_c1c2(const ProblemSpec& problem, const Vector& f,
                                  const Vector& v1, const Vector& v2,
                                  const Vector& w1, const Vector& w2,
                                  double det_tol = 1e-10);

/// Two-direction form for a complex unstable pair. Only (v1, w1) is
/// integrated; the second pair is algebraic: v2 = J v1, w2 = J^T w1.
///   x'  = F - 2 c1 v1 - 2 c2 v2
///   v1' = (1/tau) [J v1   - alpha v1],  alpha = (v1, J v1)/(v1, v1)
///   w1' = (1/tau) [J^T w1 - beta  w1],  beta  = (w1, J^T w1)/(w1, w1)
/// v1 and w1 rotate within the right/left invariant planes of the complex
/// pair, so both are kept at unit length independently; a duality constraint
/// (w1, v1) = 1 would blow up whenever the counter-rotating phases cross.
/// The projection coefficients c1, c2 are invariant to those scalings.
struct Index2ComplexRhs {
  Vector x_dot;
  Vector v1_dot;
  Vector w1_dot;
  Vector v2;  ///< J v1
  Vector w2;  ///< J^T w1
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Scalar c1 = 0.0;
  Scalar c2 = 0.0;
  Scalar force_inf = 0.0;
};
Index2ComplexRhs rhs_index2_complex(const ProblemSpec& problem,
                                    const Vector& x, const Vector& v1,
                                    const Vector& w1, double tau = 1.0,
                                    const JvpConfig& cfg = {});

/// Rank-one deflated Jacobian action:
///   J2 b = J b - [(v1, J v1) / ((v1,v1)(w1,v1))] v1 (w1, b),
/// all inner products in the problem metric. When (v1, w1) is the dominant
/// eigenpair of J, J2 has that eigenvalue replaced by zero.
Vector deflate_action(const ProblemSpec& problem, const Vector& x,
                      const Vector& v1, const Vector& w1, const Vector& b,
                      const JvpConfig& cfg = {});

/// Transpose of the deflated operator:
///   J2^T b = J^T b - [(v1, J v1) / ((v1,v1)(w1,v1))] (v1 . b) W w1,
/// where W is the diagonal metric and . the Euclidean dot product.
Vector deflate_transpose_action(const ProblemSpec& problem, const Vector& x,
                                const Vector& v1, const Vector& w1,
                                const Vector& b, const JvpConfig& cfg = {});

/// Two-direction form for two real unstable eigenvalues. Both pairs are
/// integrated; the second sees the deflated operator:
///   x'  = F - 2 c1 v1 - 2 c2 v2
///   v1' = (1/tau) [J v1    - alpha1 v1]
///   w1' = (1/tau) [J^T w1  - beta1  w1]
///   v2' = (1/tau) [J2 v2   - alpha2 v2]
///   w2' = (1/tau) [J2^T w2 - beta2  w2]
/// with alpha2 = (v2, J2 v2), beta2 = 2 (w2, J2 v2) - alpha2.
struct Index2RealRhs {
  Vector x_dot;
  Vector v1_dot;
  Vector w1_dot;
  Vector v2_dot;
  Vector w2_dot;
  Scalar alpha1 = 0.0;
  Scalar beta1 = 0.0;
  Scalar alpha2 = 0.0;
  Scalar beta2 = 0.0;
  Scalar c1 = 0.0;
  Scalar c2 = 0.0;
  Scalar force_inf = 0.0;
};
Index2RealRhs rhs_index2_real(const ProblemSpec& problem, const Vector& x,
                              const DirectionPair& p1, const DirectionPair& p2,
                              double tau = 1.0, const JvpConfig& cfg = {});

// ============================================================================
// Flat interface (stepping, numeric Jacobians)
// ============================================================================

/// Length of the stacked phase vector: n (reduced), 2n (gradient),
/// 3n (general / complex), 5n (two real pairs).
Index flat_size(const ProblemSpec& problem, GadKind kind);

/// Stacks [x; v1; w1; v2; w2] as far as the variant carries them; the
/// gradient variant stacks [x; v].
Vector pack_state(const GadState& state, GadKind kind);

/// Inverse of pack_state.
GadState unpack_state(const ProblemSpec& problem, const Vector& flat,
                      GadKind kind, double t = 0.0);

/// Scalar diagnostics of one right-hand-side evaluation.
struct RhsDiagnostics {
  Scalar force_inf = 0.0;
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Scalar alpha2 = 0.0;
  Scalar beta2 = 0.0;
  Scalar c1 = 0.0;
  Scalar c2 = 0.0;
};

/// Full right-hand side of the chosen variant on the stacked phase vector.
/// Pure vector field: no renormalization is applied here.
Vector eval_rhs_flat(const ProblemSpec& problem, const Vector& flat,
                     const GadVariant& variant, const JvpConfig& cfg = {},
                     RhsDiagnostics* diag = nullptr);

}  // namespace gad

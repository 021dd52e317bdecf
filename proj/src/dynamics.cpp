#include "gad/dynamics.hpp"

#include "gad/metric.hpp"

#include <cmath>
#include <string>

namespace gad {

namespace {

void check_dim(const ProblemSpec& problem, const Vector& u, const char* name) {
  if (u.size() != problem.dim)
    throw DimensionError(std::string(name) + ": length " +
                         std::to_string(u.size()) + " != problem dim " +
                         std::to_string(problem.dim));
}

Vector checked_field(const ProblemSpec& problem, const Vector& x,
                     const char* caller) {
  Vector f = problem.field(x);
  if (f.size() != problem.dim)
    throw DimensionError(std::string(caller) + ": field returned length " +
                         std::to_string(f.size()));
  if (!f.allFinite())
    throw EvaluationError(std::string(caller) +
                          ": field evaluation is not finite");
  return f;
}

// Deflation weight (v1, J v1) / ((v1, v1) (w1, v1)); the rank-one update
// J2 b = J b - weight * v1 (w1, b) zeroes the (v1, w1) eigenvalue.
Scalar deflation_weight(const ProblemSpec& problem, const Vector& v1,
                        const Vector& jv1, const Vector& w1) {
  return inner_product(problem, v1, jv1) /
         (inner_product(problem, v1, v1) * inner_product(problem, w1, v1));
}

}  // namespace

int pair_count(GadKind kind) {
  switch (kind) {
    case GadKind::Index1ReducedTau0:
      return 0;
    case GadKind::Index1Gradient:
    case GadKind::Index1General:
    case GadKind::Index2Complex:
      return 1;
    case GadKind::Index2RealDeflated:
      return 2;
  }
  return 0;
}

const char* to_string(GadKind kind) {
  switch (kind) {
    case GadKind::Index1Gradient:
      return "index1-gradient";
    case GadKind::Index1General:
      return "index1";
    case GadKind::Index1ReducedTau0:
      return "index1-reduced";
    case GadKind::Index2Complex:
      return "index2-complex";
    case GadKind::Index2RealDeflated:
      return "index2-real";
  }
  return "unknown";
}

std::optional<GadKind> parse_gad_kind(std::string_view name) {
  if (name == "index1-gradient") return GadKind::Index1Gradient;
  if (name == "index1") return GadKind::Index1General;
  if (name == "index1-reduced") return GadKind::Index1ReducedTau0;
  if (name == "index2-complex") return GadKind::Index2Complex;
  if (name == "index2-real") return GadKind::Index2RealDeflated;
  return std::nullopt;
}

Scalar alpha(const ProblemSpec& problem, const Vector& v, const Vector& jv) {
  return inner_product(problem, v, jv);
}

Scalar beta(const ProblemSpec& problem, const Vector& w, const Vector& jv,
            Scalar alpha_val) {
  return 2.0 * inner_product(problem, w, jv) - alpha_val;
}

Index1Rhs rhs_index1(const ProblemSpec& problem, const Vector& x,
                     const Vector& v, const Vector& w, double tau,
                     const JvpConfig& cfg) {
  check_dim(problem, x, "rhs_index1: x");
  check_dim(problem, v, "rhs_index1: v");
  check_dim(problem, w, "rhs_index1: w");

  Index1Rhs out;
  const Vector f = checked_field(problem, x, "rhs_index1");
  const Vector jv = jvp(problem, x, v, cfg);
  const Vector jtw = jtvp(problem, x, w, cfg);

  out.alpha = alpha(problem, v, jv);
  out.beta = beta(problem, w, jv, out.alpha);
  out.x_dot = f - 2.0 * inner_product(problem, f, w) * v;
  out.v_dot = (jv - out.alpha * v) / tau;
  out.w_dot = (jtw - out.beta * w) / tau;
  out.force_inf = norm_inf(f);
  return out;
}

Index1GradientRhs rhs_index1_gradient(const ProblemSpec& problem,
                                      const Vector& x, const Vector& v,
                                      double tau, const JvpConfig& cfg) {
  if (!problem.is_gradient)
    throw CapabilityError(
        "rhs_index1_gradient: problem is not a gradient system");
  check_dim(problem, x, "rhs_index1_gradient: x");
  check_dim(problem, v, "rhs_index1_gradient: v");

  // Same arithmetic as rhs_index1 with w = v, so the two agree exactly;
  // only the redundant transpose action is skipped.
  Index1GradientRhs out;
  const Vector f = checked_field(problem, x, "rhs_index1_gradient");
  const Vector jv = jvp(problem, x, v, cfg);

  out.alpha = alpha(problem, v, jv);
  out.x_dot = f - 2.0 * inner_product(problem, f, v) * v;
  out.v_dot = (jv - out.alpha * v) / tau;
  out.force_inf = norm_inf(f);
  return out;
}

ReducedRhs rhs_index1_reduced(const ProblemSpec& problem, const Vector& x,
                              const JvpConfig& cfg) {
  check_dim(problem, x, "rhs_index1_reduced: x");
  auto eig = hessian_smallest_eigvec(problem, x, cfg);  // gradient-only

  ReducedRhs out;
  out.v = eig.vector;
  out.lambda_min = eig.value;
  out.degenerate = eig.degenerate;

  const Vector f = checked_field(problem, x, "rhs_index1_reduced");
  Vector u = eig.vector / metric_norm(problem, eig.vector);
  out.x_dot = f - 2.0 * inner_product(problem, f, u) * u;
  out.force_inf = norm_inf(f);
  return out;
}

std::array<Scalar, 2> coeffs_c1c2(const ProblemSpec& problem, const Vector& f,
                                  const Vector& v1, const Vector& v2,
                                  const Vector& w1, const Vector& w2,
                                  double det_tol) {
  const Scalar a11 = inner_product(problem, w1, v1);
  const Scalar a12 = inner_product(problem, w1, v2);
  const Scalar a21 = inner_product(problem, w2, v1);
  const Scalar a22 = inner_product(problem, w2, v2);
  const Scalar f1 = inner_product(problem, f, w1);
  const Scalar f2 = inner_product(problem, f, w2);

  const Scalar det = a11 * a22 - a12 * a21;
  const Scalar scale = std::max(std::abs(a11 * a22), std::abs(a12 * a21));
  if (det == 0.0 || std::abs(det) < det_tol * scale)
    throw NearSingularProjectionError(
        "coeffs_c1c2: projection determinant " + std::to_string(det) +
        " is singular to working precision (scale " + std::to_string(scale) +
        ")");
  return {(a22 * f1 - a12 * f2) / det, (a11 * f2 - a21 * f1) / det};
}

Index2ComplexRhs rhs_index2_complex(const ProblemSpec& problem,
                                    const Vector& x, const Vector& v1,
                                    const Vector& w1, double tau,
                                    const JvpConfig& cfg) {
  check_dim(problem, x, "rhs_index2_complex: x");
  check_dim(problem, v1, "rhs_index2_complex: v1");
  check_dim(problem, w1, "rhs_index2_complex: w1");

  Index2ComplexRhs out;
  const Vector f = checked_field(problem, x, "rhs_index2_complex");
  const Vector jv = jvp(problem, x, v1, cfg);
  const Vector jtw = jtvp(problem, x, w1, cfg);
  out.v2 = jv;
  out.w2 = jtw;

  auto c = coeffs_c1c2(problem, f, v1, out.v2, w1, out.w2);
  out.c1 = c[0];
  out.c2 = c[1];
  out.alpha = alpha(problem, v1, jv);
  // Left-mirror multiplier: keeps |w1| constant while w1 counter-rotates.
  out.beta = alpha(problem, w1, jtw);

  out.x_dot = f - 2.0 * out.c1 * v1 - 2.0 * out.c2 * out.v2;
  out.v1_dot = (jv - out.alpha * v1) / tau;
  out.w1_dot = (jtw - out.beta * w1) / tau;
  out.force_inf = norm_inf(f);
  return out;
}

Vector deflate_action(const ProblemSpec& problem, const Vector& x,
                      const Vector& v1, const Vector& w1, const Vector& b,
                      const JvpConfig& cfg) {
  const Vector jv1 = jvp(problem, x, v1, cfg);
  const Scalar weight = deflation_weight(problem, v1, jv1, w1);
  return jvp(problem, x, b, cfg) -
         weight * inner_product(problem, w1, b) * v1;
}

Vector deflate_transpose_action(const ProblemSpec& problem, const Vector& x,
                                const Vector& v1, const Vector& w1,
                                const Vector& b, const JvpConfig& cfg) {
  const Vector jv1 = jvp(problem, x, v1, cfg);
  const Scalar weight = deflation_weight(problem, v1, jv1, w1);
  return jtvp(problem, x, b, cfg) -
         weight * v1.dot(b) *
             (problem.metric_weights.array() * w1.array()).matrix();
}

Index2RealRhs rhs_index2_real(const ProblemSpec& problem, const Vector& x,
                              const DirectionPair& p1, const DirectionPair& p2,
                              double tau, const JvpConfig& cfg) {
  check_dim(problem, x, "rhs_index2_real: x");
  check_dim(problem, p1.v, "rhs_index2_real: v1");
  check_dim(problem, p1.w, "rhs_index2_real: w1");
  check_dim(problem, p2.v, "rhs_index2_real: v2");
  check_dim(problem, p2.w, "rhs_index2_real: w2");

  Index2RealRhs out;
  const Vector f = checked_field(problem, x, "rhs_index2_real");
  const Vector jv1 = jvp(problem, x, p1.v, cfg);
  const Vector jtw1 = jtvp(problem, x, p1.w, cfg);

  out.alpha1 = alpha(problem, p1.v, jv1);
  out.beta1 = beta(problem, p1.w, jv1, out.alpha1);
  out.v1_dot = (jv1 - out.alpha1 * p1.v) / tau;
  out.w1_dot = (jtw1 - out.beta1 * p1.w) / tau;

  // The second pair evolves under the rank-one deflated operator.
  const Scalar weight = deflation_weight(problem, p1.v, jv1, p1.w);
  const Vector j2v2 = jvp(problem, x, p2.v, cfg) -
                      weight * inner_product(problem, p1.w, p2.v) * p1.v;
  const Vector j2tw2 =
      jtvp(problem, x, p2.w, cfg) -
      weight * p1.v.dot(p2.w) *
          (problem.metric_weights.array() * p1.w.array()).matrix();

  out.alpha2 = alpha(problem, p2.v, j2v2);
  out.beta2 = beta(problem, p2.w, j2v2, out.alpha2);
  out.v2_dot = (j2v2 - out.alpha2 * p2.v) / tau;
  out.w2_dot = (j2tw2 - out.beta2 * p2.w) / tau;

  auto c = coeffs_c1c2(problem, f, p1.v, p2.v, p1.w, p2.w);
  out.c1 = c[0];
  out.c2 = c[1];
  out.x_dot = f - 2.0 * out.c1 * p1.v - 2.0 * out.c2 * p2.v;
  out.force_inf = norm_inf(f);
  return out;
}

// ============================================================================
// Flat interface
// ============================================================================

Index flat_size(const ProblemSpec& problem, GadKind kind) {
  switch (kind) {
    case GadKind::Index1ReducedTau0:
      return problem.dim;
    case GadKind::Index1Gradient:
      return 2 * problem.dim;
    case GadKind::Index1General:
    case GadKind::Index2Complex:
      return 3 * problem.dim;
    case GadKind::Index2RealDeflated:
      return 5 * problem.dim;
  }
  return 0;
}

Vector pack_state(const GadState& state, GadKind kind) {
  const Index n = state.x.size();
  const int pairs = pair_count(kind);
  const bool with_w = kind != GadKind::Index1Gradient;

  Vector flat(n * (1 + pairs * (with_w ? 2 : 1)));
  flat.head(n) = state.x;
  Index at = n;
  for (int p = 0; p < pairs; ++p) {
    flat.segment(at, n) = state.pairs.at(p).v;
    at += n;
    if (with_w) {
      flat.segment(at, n) = state.pairs.at(p).w;
      at += n;
    }
  }
  return flat;
}

GadState unpack_state(const ProblemSpec& problem, const Vector& flat,
                      GadKind kind, double t) {
  if (flat.size() != flat_size(problem, kind))
    throw DimensionError("unpack_state: flat length " +
                         std::to_string(flat.size()) + " != expected " +
                         std::to_string(flat_size(problem, kind)));
  const Index n = problem.dim;
  GadState state;
  state.t = t;
  state.x = flat.head(n);
  Index at = n;
  for (int p = 0; p < pair_count(kind); ++p) {
    DirectionPair pair;
    pair.v = flat.segment(at, n);
    at += n;
    if (kind == GadKind::Index1Gradient) {
      pair.w = pair.v;
    } else {
      pair.w = flat.segment(at, n);
      at += n;
    }
    state.pairs.push_back(std::move(pair));
  }
  return state;
}

Vector eval_rhs_flat(const ProblemSpec& problem, const Vector& flat,
                     const GadVariant& variant, const JvpConfig& cfg,
                     RhsDiagnostics* diag) {
  const Index n = problem.dim;
  if (flat.size() != flat_size(problem, variant.kind))
    throw DimensionError("eval_rhs_flat: flat length " +
                         std::to_string(flat.size()) + " != expected " +
                         std::to_string(flat_size(problem, variant.kind)));
  Vector out(flat.size());
  RhsDiagnostics d;

  switch (variant.kind) {
    case GadKind::Index1ReducedTau0: {
      auto rhs = rhs_index1_reduced(problem, flat, cfg);
      out = rhs.x_dot;
      d.force_inf = rhs.force_inf;
      d.alpha = -rhs.lambda_min;  // field-Jacobian convention
      d.beta = d.alpha;
      break;
    }
    case GadKind::Index1Gradient: {
      auto rhs = rhs_index1_gradient(problem, flat.head(n), flat.segment(n, n),
                                     variant.tau, cfg);
      out.head(n) = rhs.x_dot;
      out.segment(n, n) = rhs.v_dot;
      d.force_inf = rhs.force_inf;
      d.alpha = rhs.alpha;
      d.beta = rhs.alpha;
      break;
    }
    case GadKind::Index1General: {
      auto rhs = rhs_index1(problem, flat.head(n), flat.segment(n, n),
                            flat.segment(2 * n, n), variant.tau, cfg);
      out.head(n) = rhs.x_dot;
      out.segment(n, n) = rhs.v_dot;
      out.segment(2 * n, n) = rhs.w_dot;
      d.force_inf = rhs.force_inf;
      d.alpha = rhs.alpha;
      d.beta = rhs.beta;
      break;
    }
    case GadKind::Index2Complex: {
      auto rhs = rhs_index2_complex(problem, flat.head(n), flat.segment(n, n),
                                    flat.segment(2 * n, n), variant.tau, cfg);
      out.head(n) = rhs.x_dot;
      out.segment(n, n) = rhs.v1_dot;
      out.segment(2 * n, n) = rhs.w1_dot;
      d.force_inf = rhs.force_inf;
      d.alpha = rhs.alpha;
      d.beta = rhs.beta;
      d.c1 = rhs.c1;
      d.c2 = rhs.c2;
      break;
    }
    case GadKind::Index2RealDeflated: {
      DirectionPair p1{flat.segment(n, n), flat.segment(2 * n, n)};
      DirectionPair p2{flat.segment(3 * n, n), flat.segment(4 * n, n)};
      auto rhs = rhs_index2_real(problem, flat.head(n), p1, p2, variant.tau,
                                 cfg);
      out.head(n) = rhs.x_dot;
      out.segment(n, n) = rhs.v1_dot;
      out.segment(2 * n, n) = rhs.w1_dot;
      out.segment(3 * n, n) = rhs.v2_dot;
      out.segment(4 * n, n) = rhs.w2_dot;
      d.force_inf = rhs.force_inf;
      d.alpha = rhs.alpha1;
      d.beta = rhs.beta1;
      d.alpha2 = rhs.alpha2;
      d.beta2 = rhs.beta2;
      d.c1 = rhs.c1;
      d.c2 = rhs.c2;
      break;
    }
  }
  if (diag) *diag = d;
  return out;
}

}  // namespace gad

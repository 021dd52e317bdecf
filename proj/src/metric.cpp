#include "gad/metric.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gad {

namespace {

void check_dim(const ProblemSpec& problem, const Vector& u, const char* name) {
  if (u.size() != problem.dim)
    throw DimensionError(std::string(name) + ": length " +
                         std::to_string(u.size()) + " != problem dim " +
                         std::to_string(problem.dim));
}

}  // namespace

void validate_problem(const ProblemSpec& problem) {
  if (problem.dim < 1)
    throw GadError("problem dim must be >= 1, got " +
                   std::to_string(problem.dim));
  if (!problem.field) throw GadError("problem has no field callback");
  if (problem.metric_weights.size() != problem.dim)
    throw DimensionError("metric_weights length " +
                         std::to_string(problem.metric_weights.size()) +
                         " != problem dim " + std::to_string(problem.dim));
  for (Index i = 0; i < problem.dim; ++i)
    if (!(problem.metric_weights(i) > 0.0))
      throw GadError("metric_weights must be strictly positive (component " +
                     std::to_string(i) + " is " +
                     std::to_string(problem.metric_weights(i)) + ")");
}

Scalar inner_product(const ProblemSpec& problem, const Vector& u,
                     const Vector& z) {
  check_dim(problem, u, "inner_product: first argument");
  check_dim(problem, z, "inner_product: second argument");
  return weighted_inner(u, z, problem.metric_weights);
}

Scalar metric_norm(const ProblemSpec& problem, const Vector& u) {
  return std::sqrt(inner_product(problem, u, u));
}

DirectionPair normalize_pair(const ProblemSpec& problem, DirectionPair pair,
                             double duality_tol) {
  const Scalar v_norm = metric_norm(problem, pair.v);
  if (!(v_norm > duality_tol))
    throw DegenerateDualityError("normalize_pair: |v| = " +
                                 std::to_string(v_norm) + " is degenerate");
  // Rescale only when measurably off the sphere so an already normalized
  // pair passes through bit-identically (idempotence).
  if (std::abs(v_norm * v_norm - 1.0) > 4e-15) pair.v /= v_norm;

  const Scalar duality = inner_product(problem, pair.w, pair.v);
  if (std::abs(duality) < duality_tol)
    throw DegenerateDualityError(
        "normalize_pair: (w, v) = " + std::to_string(duality) +
        " is below the duality tolerance " + std::to_string(duality_tol));
  if (std::abs(duality - 1.0) <= 4e-15) return pair;
  pair.w /= duality;

  // The elementwise division leaves a rounding residue in (w, v) that can be
  // far above one ulp when the product terms cancel. Nudging the single
  // coordinate with the least quantization (smallest |W_j w_j v_j|, among
  // healthy v_j) removes it without disturbing the direction.
  const double v_inf = pair.v.lpNorm<Eigen::Infinity>();
  Index best = -1;
  double best_q = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < problem.dim; ++j) {
    if (std::abs(pair.v(j)) < 0.125 * v_inf) continue;
    const double q = std::abs(pair.w(j)) *
                     std::abs(problem.metric_weights(j) * pair.v(j));
    if (q < best_q) {
      best_q = q;
      best = j;
    }
  }
  for (int iter = 0; best >= 0 && iter < 4; ++iter) {
    const Scalar r = inner_product(problem, pair.w, pair.v) - 1.0;
    if (std::abs(r) <= 1e-15) break;
    pair.w(best) -= r / (problem.metric_weights(best) * pair.v(best));
  }
  return pair;
}

}  // namespace gad

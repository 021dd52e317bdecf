#include "gad/jacobian.hpp"

#include "gad/metric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

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
    throw DimensionError(std::string(caller) +
                         ": field returned length " + std::to_string(f.size()));
  if (!f.allFinite())
    throw EvaluationError(std::string(caller) +
                          ": field evaluation is not finite");
  return f;
}

// Rotate an eigenvector so its first significant component is real positive;
// fixes the free phase/sign deterministically.
void orient_eigvec(Eigen::Ref<ComplexVector> v) {
  for (Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-8) {
      v *= std::conj(v(k)) / mag;
      return;
    }
  }
}

}  // namespace

double fd_step(const JvpConfig& cfg, const Vector& x, const Vector& b) {
  return cfg.epsilon0 * (1.0 + norm_inf(x)) /
         std::max(norm_inf(b), cfg.eps_floor);
}

Vector jvp(const ProblemSpec& problem, const Vector& x, const Vector& b,
           const JvpConfig& cfg) {
  check_dim(problem, x, "jvp: x");
  check_dim(problem, b, "jvp: b");
  if (problem.jacobian_action) {
    Vector out = problem.jacobian_action(x, b);
    if (!out.allFinite())
      throw EvaluationError("jvp: jacobian_action returned non-finite values");
    return out;
  }
  const double eps = fd_step(cfg, x, b);
  Vector plus = checked_field(problem, x + eps * b, "jvp");
  Vector minus = checked_field(problem, x - eps * b, "jvp");
  return (plus - minus) / (2.0 * eps);
}

Vector jtvp(const ProblemSpec& problem, const Vector& x, const Vector& b,
            const JvpConfig& cfg) {
  check_dim(problem, x, "jtvp: x");
  check_dim(problem, b, "jtvp: b");
  if (problem.jacobian_transpose_action) {
    Vector out = problem.jacobian_transpose_action(x, b);
    if (!out.allFinite())
      throw EvaluationError(
          "jtvp: jacobian_transpose_action returned non-finite values");
    return out;
  }
  if (problem.is_gradient) return jvp(problem, x, b, cfg);  // J symmetric
  if (problem.dim > cfg.dense_assembly_limit)
    throw CapabilityError(
        "jtvp: no transpose callback and dim " + std::to_string(problem.dim) +
        " exceeds the dense assembly limit " +
        std::to_string(cfg.dense_assembly_limit));
  return assemble_jacobian(problem, x, cfg).transpose() * b;
}

Matrix assemble_jacobian(const ProblemSpec& problem, const Vector& x,
                         const JvpConfig& cfg) {
  check_dim(problem, x, "assemble_jacobian: x");
  if (problem.dim > cfg.dense_assembly_limit)
    throw CapabilityError("assemble_jacobian: dim " +
                          std::to_string(problem.dim) +
                          " exceeds the dense assembly limit " +
                          std::to_string(cfg.dense_assembly_limit));
  Matrix j(problem.dim, problem.dim);
  for (Index c = 0; c < problem.dim; ++c)
    j.col(c) = jvp(problem, x, Vector(Vector::Unit(problem.dim, c)), cfg);
  return j;
}

EigDecomposition eig_dense(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("eig_dense: matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  if (!m.allFinite())
    throw EvaluationError("eig_dense: matrix has non-finite entries");

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_dense: QR iteration failed to converge");

  const ComplexVector raw_values = solver.eigenvalues();
  const ComplexMatrix raw_vectors = solver.eigenvectors();

  std::vector<Index> order(raw_values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (raw_values(a).real() != raw_values(b).real())
      return raw_values(a).real() > raw_values(b).real();
    return raw_values(a).imag() > raw_values(b).imag();
  });

  EigDecomposition out;
  out.values = ComplexVector(raw_values.size());
  out.vectors = ComplexMatrix(raw_vectors.rows(), raw_vectors.cols());
  for (Index k = 0; k < raw_values.size(); ++k) {
    out.values(k) = raw_values(order[k]);
    ComplexVector v = raw_vectors.col(order[k]);
    v /= v.norm();
    out.vectors.col(k) = v;
    orient_eigvec(out.vectors.col(k));
  }
  return out;
}

SmallestHessianEig hessian_smallest_eigvec(const ProblemSpec& problem,
                                           const Vector& x,
                                           const JvpConfig& cfg,
                                           double tie_tol) {
  if (!problem.is_gradient)
    throw CapabilityError(
        "hessian_smallest_eigvec: problem is not a gradient system");
  Matrix h = -assemble_jacobian(problem, x, cfg);  // J = -Hess V
  h = Scalar(0.5) * (h + h.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  if (problem.dim <= 3)
    solver.computeDirect(h);
  else
    solver.compute(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hessian_smallest_eigvec: eigensolve failed");

  SmallestHessianEig out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0);
  out.vector /= out.vector.norm();
  for (Index k = 0; k < out.vector.size(); ++k) {
    if (std::abs(out.vector(k)) > 1e-8) {
      if (out.vector(k) < 0.0) out.vector = -out.vector;
      break;
    }
  }
  out.degenerate = problem.dim > 1 &&
                   solver.eigenvalues()(1) - solver.eigenvalues()(0) < tie_tol;
  return out;
}

}  // namespace gad

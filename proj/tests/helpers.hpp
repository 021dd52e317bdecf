#pragma once

// Shared fixtures for the test suite: hand-built problems with known Jacobians
// and a generator of synthetic fields whose fixed-point eigenstructure is
// chosen up front (used by the spectrum and deflation checks).

#include <gad/jacobian.hpp>
#include <gad/metric.hpp>
#include <gad/types.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace gad::testing {

/// Problem with a trivial field; used where only the metric matters.
inline ProblemSpec metric_only_problem(Vector weights) {
  ProblemSpec p;
  p.dim = weights.size();
  p.field = [n = p.dim](const Vector&) { return Vector(Vector::Zero(n)); };
  p.metric_weights = std::move(weights);
  return p;
}

inline ProblemSpec unit_metric_problem(Index n) {
  return metric_only_problem(Vector::Ones(n));
}

/// Linear field F(x) = A (x - shift) with optional exact callbacks.
inline ProblemSpec linear_problem(const Matrix& a, Vector shift = Vector(),
                                  bool with_callbacks = true) {
  ProblemSpec p;
  p.dim = a.rows();
  if (shift.size() == 0) shift = Vector::Zero(p.dim);
  p.field = [a, shift](const Vector& x) { return Vector(a * (x - shift)); };
  if (with_callbacks) {
    p.jacobian_action = [a](const Vector&, const Vector& b) { return Vector(a * b); };
    p.jacobian_transpose_action = [a](const Vector&, const Vector& b) {
      return Vector(a.transpose() * b);
    };
  }
  p.metric_weights = Vector::Ones(p.dim);
  return p;
}

/// Planar rotation field F(x, y) = (-y, x); antisymmetric Jacobian.
inline ProblemSpec rotation_problem() {
  Matrix a(2, 2);
  a << 0.0, -1.0, 1.0, 0.0;
  return linear_problem(a);
}

/// A synthetic field with fully controlled fixed-point eigenstructure.
///
/// F(x) = A (x - x_s) + q(x - x_s) where q is quadratic (zero Jacobian at
/// x_s), so dF/dx at the fixed point x_s is exactly A = V diag(lambda) V^-1.
struct SyntheticSystem {
  ProblemSpec problem;          // field only; no Jacobian callbacks
  ProblemSpec problem_exact;    // same field with exact Jacobian callbacks
  Vector x_star;
  Vector lambdas;               // real eigenvalues, unsorted
  Matrix v_right;               // columns: unit right eigenvectors
  Matrix w_left;                // columns: left eigenvectors, (w_i, v_i) = 1
  bool gradient = false;
};

/// Draws eigenvalues in [-3, 3] away from resonances so the augmented GAD
/// spectrum at the fixed point has only the designed multiplicities.
inline Vector draw_guarded_spectrum(std::mt19937_64& rng, int n, double margin = 0.15) {
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  Vector lam(n);
  // The resonance constraints grow like n^3, so for larger n the full margin
  // can be infeasible within a reasonable attempt budget. Relax it stepwise;
  // even the smallest level keeps predictions separated by orders of
  // magnitude more than the matching tolerances downstream.
  for (double m = margin; m >= 0.01; m *= 0.5) {
    for (int attempt = 0; attempt < 20000; ++attempt) {
      for (int i = 0; i < n; ++i) lam(i) = unif(rng);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        if (std::abs(lam(i)) < m) ok = false;
        for (int j = 0; j < n && ok; ++j) {
          if (i != j && std::abs(lam(i) - lam(j)) < m) ok = false;
          if (std::abs(lam(i) + lam(j)) < m) ok = false;
          if (std::abs(2.0 * lam(i) + lam(j)) < m) ok = false;
          for (int k = 0; k < n && ok; ++k)
            if (std::abs(lam(i) + lam(j) - lam(k)) < m) ok = false;
        }
      }
      if (ok) return lam;
    }
  }
  throw std::runtime_error("could not draw a guarded spectrum");
}

inline SyntheticSystem make_synthetic_system(std::uint64_t seed, int n, bool gradient) {
  std::mt19937_64 rng(seed);
  SyntheticSystem sys;
  sys.gradient = gradient;
  sys.lambdas = draw_guarded_spectrum(rng, n);

  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();

  Matrix v = q;
  if (!gradient) {
    // Mildly non-orthogonal eigenbasis: V = Q (I + S), ||S||_2 <= 0.3 keeps
    // cond(V) <= 1.3 / 0.7, so left/right eigvectors stay well separated.
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = gauss(rng);
    s *= 0.3 / s.norm();  // Frobenius bounds the spectral norm from above
    v = q * (Matrix::Identity(n, n) + s);
  }
  Matrix a = v * sys.lambdas.asDiagonal() * v.inverse();
  if (gradient) a = Scalar(0.5) * (a + a.transpose());  // exact symmetry

  sys.x_star = Vector(n);
  for (int i = 0; i < n; ++i) sys.x_star(i) = gauss(rng);

  // Quadratic correction with zero Jacobian at x_star. For gradient systems it
  // comes from a cubic potential term so the field stays a gradient field.
  Vector c(n);
  for (int i = 0; i < n; ++i) c(i) = 0.2 * gauss(rng);

  const Vector xs = sys.x_star;
  if (gradient) {
    // V(x) = -x'Ax/2 + sum_i c_i d_i^3 / 3 with d = x - xs; F = -grad V.
    sys.problem.field = [a, xs, c](const Vector& x) {
      Vector d = x - xs;
      return Vector(a * d - (c.array() * d.array() * d.array()).matrix());
    };
    sys.problem.is_gradient = true;
    sys.problem.potential = [a, xs, c](const Vector& x) {
      Vector d = x - xs;
      return -0.5 * d.dot(a * d) + (c.array() * d.array().pow(3)).sum() / 3.0;
    };
    sys.problem_exact = sys.problem;
    sys.problem_exact.jacobian_action = [a, xs, c](const Vector& x, const Vector& b) {
      Vector d = x - xs;
      return Vector(a * b - 2.0 * (c.array() * d.array() * b.array()).matrix());
    };
    sys.problem_exact.jacobian_transpose_action = sys.problem_exact.jacobian_action;
  } else {
    sys.problem.field = [a, xs, c](const Vector& x) {
      Vector d = x - xs;
      Vector quad = (c.array() * d.array() * d.array()).matrix();
      // Rotate the quadratic term so the correction is not componentwise.
      Vector rolled(d.size());
      for (Index i = 0; i < d.size(); ++i) rolled(i) = quad((i + 1) % d.size());
      return Vector(a * d + rolled);
    };
    sys.problem_exact = sys.problem;
    sys.problem_exact.jacobian_action = [a, xs, c](const Vector& x, const Vector& b) {
      Vector d = x - xs;
      Vector quad = (2.0 * c.array() * d.array() * b.array()).matrix();
      Vector rolled(d.size());
      for (Index i = 0; i < d.size(); ++i) rolled(i) = quad((i + 1) % d.size());
      return Vector(a * b + rolled);
    };
    sys.problem_exact.jacobian_transpose_action = [a, xs, c](const Vector& x,
                                                             const Vector& b) {
      Vector d = x - xs;
      // dF/dx = A + R diag(2 c .* d) with R the cyclic row shift, so the
      // transpose applies the inverse shift to b before the diagonal scaling.
      Vector shifted(d.size());
      for (Index i = 0; i < d.size(); ++i) shifted(i) = b((d.size() + i - 1) % d.size());
      return Vector(a.transpose() * b +
                    (2.0 * c.array() * d.array() * shifted.array()).matrix());
    };
  }
  sys.problem.dim = n;
  sys.problem.metric_weights = Vector::Ones(n);
  sys.problem_exact.dim = n;
  sys.problem_exact.metric_weights = Vector::Ones(n);

  sys.v_right = Matrix(n, n);
  sys.w_left = Matrix(n, n);
  Matrix v_inv_t = v.inverse().transpose();
  for (int i = 0; i < n; ++i) {
    double nrm = v.col(i).norm();
    sys.v_right.col(i) = v.col(i) / nrm;
    sys.w_left.col(i) = v_inv_t.col(i) * nrm;  // keeps (w_i, v_i) = 1
  }
  return sys;
}

}  // namespace gad::testing

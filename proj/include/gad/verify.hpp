#pragma once

#include "gad/integrate.hpp"
#include "gad/types.hpp"

namespace gad {

// ============================================================================
// Fixed-point checks
// ============================================================================

/// Residuals of the saddle conditions at a state carrying at least one pair:
/// force_inf = |F|_inf, eig_right_inf = |Jv - lambda v|_inf with
/// lambda = alpha(v), eig_left_inf = |J^T w - lambda w|_inf, and
/// alpha_beta_gap = |alpha - beta|. `pass` requires force_inf and
/// eig_right_inf to be at most 10 * tol_force.
struct ResidualSummary {
  double force_inf = 0.0;
  double eig_right_inf = 0.0;
  double eig_left_inf = 0.0;
  double alpha_beta_gap = 0.0;
  bool pass = false;
};
ResidualSummary verify_fixed_point(const ProblemSpec& problem,
                                   const GadState& state,
                                   double tol_force = 1e-8,
                                   const JvpConfig& cfg = {});

/// Unstable-dimension count from a dense eigensolve of J(x).
struct IndexClassification {
  /// Number of eigenvalues with real part > 0.
  int morse_index = 0;
  /// Full spectrum, descending real part.
  ComplexVector spectrum;
  /// Some eigenvalue has |Re| < marginal_tol; the count is then fragile.
  bool marginal = false;
};
IndexClassification classify_index(const ProblemSpec& problem, const Vector& x,
                                   const JvpConfig& cfg = {},
                                   double marginal_tol = 1e-8);

// ============================================================================
// Spectrum predictions
// ============================================================================

/// Closed-form spectrum of the augmented three-block linearization at a
/// fixed point whose Jacobian has distinct real eigenvalues `lambdas`,
/// with the carried pair aligned to eigenvalue i (0-based):
///   { -2 l_i (x2), -l_i } + { l_j : j != i } + { l_j - l_i (x2) : j != i }.
/// 3n values. Throws DegenerateEigenvalueError when two lambdas are within
/// distinct_tol.
std::vector<double> gad_spectrum_expected(const std::vector<double>& lambdas,
                                          int i, double distinct_tol = 1e-10);

/// Same for the gradient (two-block) system: { -2 l_i, -l_i } +
/// { l_j : j != i } + { l_j - l_i : j != i }. 2n values.
std::vector<double> gad_spectrum_expected_gradient(
    const std::vector<double>& lambdas, int i, double distinct_tol = 1e-10);

/// Central-difference Jacobian of an arbitrary map, step
/// eps0 * (1 + |y_k|) per coordinate.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                   const Vector& y, double eps0 = 1e-6);

/// Finite-difference Jacobian of the variant's full right-hand side with
/// respect to the stacked phase vector at `state`. Dimension follows
/// flat_size (2n for the gradient variant, 3n general, ...). Throws
/// CapabilityError when the base dimension exceeds 64.
Matrix gad_jacobian_numeric(const ProblemSpec& problem, const GadState& state,
                            const GadVariant& variant,
                            const JvpConfig& cfg = {}, double eps0 = 1e-6);

/// Worst pairing distance between a numeric spectrum and a real expected
/// multiset, both sorted by real part.
double max_matched_distance(const ComplexVector& numeric,
                            std::vector<double> expected);

// ============================================================================
// Baselines and scans
// ============================================================================

/// Damped Newton iteration on F(x) = 0: solves J dx = -F and halves the
/// step up to 30 times until |F|_inf improves. Stops on stagnation,
/// singular Jacobian, or max_iters; converges when |F|_inf <= cfg.tol_force.
SaddleReport newton_raphson(const ProblemSpec& problem, const Vector& x0,
                            const RunConfig& cfg, int max_iters = 100);

/// Inclusive rectangular grid, nx x ny points.
struct GridSpec {
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;
  int nx = 100, ny = 100;

  double x_at(int ix) const {
    return nx == 1 ? xmin : xmin + ix * (xmax - xmin) / (nx - 1);
  }
  double y_at(int iy) const {
    return ny == 1 ? ymin : ymin + iy * (ymax - ymin) / (ny - 1);
  }
};

/// Grid labelling of limit points. labels[iy * nx + ix] is an index into
/// limit_points for converged runs, -1 for diverged, -2 for exhausted
/// step/iteration budgets.
struct BasinScan {
  GridSpec grid;
  std::vector<int> labels;
  std::vector<long> steps;
  std::vector<Vector> limit_points;
};

/// Runs the variant from every grid point of a 2-d problem and clusters the
/// limit points with tolerance cluster_tol (infinity norm). Parallel over
/// rows; worker count is capped by the GAD_THREADS environment variable.
/// Output ordering is independent of the thread count.
BasinScan basin_scan(const ProblemSpec& problem, const GadVariant& variant,
                     const GridSpec& grid, const RunConfig& cfg,
                     double cluster_tol = 1e-3);

/// Same grid labelling for the damped Newton baseline.
BasinScan newton_basin_scan(const ProblemSpec& problem, const GridSpec& grid,
                            const RunConfig& cfg, double cluster_tol = 1e-3,
                            int max_iters = 100);

}  // namespace gad

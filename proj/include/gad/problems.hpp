#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gad/types.hpp"

namespace gad::problems {

// ============================================================================
// Low-dimensional model systems
// ============================================================================

/// Two-dimensional double well V(x, y) = (x^2 - 1)^2 / 4 + mu y^2 / 2.
/// Gradient system with unit metric; analytic Jacobian action. Minima at
/// (+-1, 0), saddle at (0, 0).
ProblemSpec double_well(double mu);

/// Effective potential of the reduced single-direction flow on the double
/// well: V1 = -(x^2-1)^2/4 + mu y^2/2 where |x| <= sqrt((1+mu)/3) (the V1
/// branch on the switching line itself), V2 = (x^2-1)^2/4 - mu y^2/2
/// outside.
double v_gad_potential(double x, double y, double mu);

/// Switching line |x| = sqrt((1+mu)/3) of v_gad_potential.
double v_gad_switch_x(double mu);

/// The Lorenz system
///   x' = sigma (y - x), y' = rho x - y - x z, z' = -beta z + x y,
/// sign-flipped when reversed. Analytic Jacobian and transpose actions.
ProblemSpec lorenz(double sigma = 10.0, double beta = 8.0 / 3.0,
                   double rho = 30.0, bool reversed = false);

/// Equilibria of the Lorenz field: the origin and the symmetric pair
/// (+-s, +-s, rho - 1) with s = sqrt(beta (rho - 1)).
struct LorenzFixedPoints {
  Vector o;
  Vector q_plus;
  Vector q_minus;
};
LorenzFixedPoints lorenz_fixed_points(double sigma = 10.0,
                                      double beta = 8.0 / 3.0,
                                      double rho = 30.0);

// ============================================================================
// Discretized PDE systems
// ============================================================================

/// Activator-inhibitor pair on the periodic unit interval,
///   u_t = delta Lap u + (1/delta) f(u, v),  f = (u - u^3 + 1.2) v + mu u / 2
///   v_t = delta Lap v + (1/delta) g(u, v),  g = u^2 / 2 - v,
/// second-order central differences on n_grid cells, h = 1 / n_grid. State
/// stacks [u_0..u_{n-1}, v_0..v_{n-1}]; metric weights are h. Analytic
/// Jacobian and transpose actions. Requires n_grid >= 16.
ProblemSpec reaction_diffusion(double mu, double delta = 0.01,
                               int n_grid = 128);

/// Real roots of the homogeneous balance u^2 - u^4 + 1.2 u + mu = 0
/// (from g = 0 substituted into f = 0), ascending. Positive roots only.
std::vector<double> rd_homogeneous_roots(double mu);

/// Largest positive real root of the homogeneous balance; the stable
/// non-zero homogeneous state (u+, u+^2 / 2).
double rd_u_plus(double mu);

/// Homogeneous base state ("zero" or "u-plus") plus a seeded smooth random
/// perturbation (low-order Fourier modes, infinity-norm amplitude as given)
/// applied to the u component.
Vector rd_perturbed_state(double mu, int n_grid, std::string_view base,
                          double amplitude, std::uint64_t seed);

/// Scalar bistable field u_t = Lap u - (u^2 - 1) u on a periodic interval
/// of the given length, n_grid cells, metric weights h. Gradient system of
/// the energy I(u) = sum h [ (du/dx)^2 / 2 + (u^2 - 1)^2 / 4 ] with forward
/// differences for du/dx. Requires n_grid >= 16.
ProblemSpec allen_cahn(int n_grid = 128, double domain_length = 1.0);

// ============================================================================
// Matrix test problem
// ============================================================================

/// V(x) = x^T A x / x^T x for symmetric A; gradient system, singular at the
/// origin (field evaluation throws EvaluationError for |x| < 1e-8).
/// Critical points are the eigenvectors of A with V = lambda.
ProblemSpec rayleigh(const Matrix& a);

// ============================================================================
// Registry
// ============================================================================

/// Stable catalogue order: "double-well", "lorenz", "lorenz-reversed",
/// "rd-nucleation", "allen-cahn", "rayleigh".
std::vector<std::string> problem_ids();

}  // namespace gad::problems

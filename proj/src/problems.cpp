#include "gad/problems.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace gad::problems {

ProblemSpec double_well(double mu) {
  ProblemSpec p;
  p.dim = 2;
  p.field = [mu](const Vector& x) {
    Vector f(2);
    f << x(0) - x(0) * x(0) * x(0), -mu * x(1);
    return f;
  };
  p.is_gradient = true;
  p.potential = [mu](const Vector& x) {
    const double q = x(0) * x(0) - 1.0;
    return 0.25 * q * q + 0.5 * mu * x(1) * x(1);
  };
  p.jacobian_action = [mu](const Vector& x, const Vector& b) {
    Vector out(2);
    out << (1.0 - 3.0 * x(0) * x(0)) * b(0), -mu * b(1);
    return out;
  };
  p.jacobian_transpose_action = p.jacobian_action;
  p.metric_weights = Vector::Ones(2);
  return p;
}

double v_gad_switch_x(double mu) { return std::sqrt((1.0 + mu) / 3.0); }

double v_gad_potential(double x, double y, double mu) {
  const double q = x * x - 1.0;
  if (std::abs(x) <= v_gad_switch_x(mu))
    return -0.25 * q * q + 0.5 * mu * y * y;
  return 0.25 * q * q - 0.5 * mu * y * y;
}

ProblemSpec lorenz(double sigma, double beta, double rho, bool reversed) {
  ProblemSpec p;
  p.dim = 3;
  const double sign = reversed ? -1.0 : 1.0;
  p.field = [sigma, beta, rho, sign](const Vector& x) {
    Vector f(3);
    f << sigma * (x(1) - x(0)),
        rho * x(0) - x(1) - x(0) * x(2),
        -beta * x(2) + x(0) * x(1);
    return Vector(sign * f);
  };
  p.jacobian_action = [sigma, beta, rho, sign](const Vector& x,
                                               const Vector& b) {
    Vector out(3);
    out << sigma * (b(1) - b(0)),
        (rho - x(2)) * b(0) - b(1) - x(0) * b(2),
        x(1) * b(0) + x(0) * b(1) - beta * b(2);
    return Vector(sign * out);
  };
  p.jacobian_transpose_action = [sigma, beta, rho, sign](const Vector& x,
                                                         const Vector& b) {
    Vector out(3);
    out << -sigma * b(0) + (rho - x(2)) * b(1) + x(1) * b(2),
        sigma * b(0) - b(1) + x(0) * b(2),
        -x(0) * b(1) - beta * b(2);
    return Vector(sign * out);
  };
  p.metric_weights = Vector::Ones(3);
  return p;
}

LorenzFixedPoints lorenz_fixed_points(double /*sigma*/, double beta,
                                      double rho) {
  LorenzFixedPoints out;
  out.o = Vector::Zero(3);
  const double s = std::sqrt(beta * (rho - 1.0));
  out.q_plus = Vector(3);
  out.q_plus << s, s, rho - 1.0;
  out.q_minus = Vector(3);
  out.q_minus << -s, -s, rho - 1.0;
  return out;
}

ProblemSpec reaction_diffusion(double mu, double delta, int n_grid) {
  if (n_grid < 16)
    throw GadError("reaction_diffusion needs n_grid >= 16; got " +
                   std::to_string(n_grid));
  ProblemSpec p;
  const int n = n_grid;
  p.dim = 2 * n;
  const double h = 1.0 / n;
  const double diff = delta / (h * h);
  const double inv_delta = 1.0 / delta;

  p.field = [n, mu, diff, inv_delta](const Vector& x) {
    Vector out(2 * n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      const double u = x(i);
      const double v = x(n + i);
      out(i) = diff * (x(ip) - 2.0 * u + x(im)) +
               inv_delta * ((u - u * u * u + 1.2) * v + 0.5 * mu * u);
      out(n + i) = diff * (x(n + ip) - 2.0 * v + x(n + im)) +
                   inv_delta * (0.5 * u * u - v);
    }
    return out;
  };
  p.jacobian_action = [n, mu, diff, inv_delta](const Vector& x,
                                               const Vector& b) {
    Vector out(2 * n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      const double u = x(i);
      const double v = x(n + i);
      const double fu = (1.0 - 3.0 * u * u) * v + 0.5 * mu;
      const double fv = u - u * u * u + 1.2;
      out(i) = diff * (b(ip) - 2.0 * b(i) + b(im)) +
               inv_delta * (fu * b(i) + fv * b(n + i));
      out(n + i) = diff * (b(n + ip) - 2.0 * b(n + i) + b(n + im)) +
                   inv_delta * (u * b(i) - b(n + i));
    }
    return out;
  };
  // The diffusion stencil is symmetric, so transposition only swaps the
  // off-diagonal reaction couplings.
  p.jacobian_transpose_action = [n, mu, diff, inv_delta](const Vector& x,
                                                         const Vector& b) {
    Vector out(2 * n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      const double u = x(i);
      const double v = x(n + i);
      const double fu = (1.0 - 3.0 * u * u) * v + 0.5 * mu;
      const double fv = u - u * u * u + 1.2;
      out(i) = diff * (b(ip) - 2.0 * b(i) + b(im)) +
               inv_delta * (fu * b(i) + u * b(n + i));
      out(n + i) = diff * (b(n + ip) - 2.0 * b(n + i) + b(n + im)) +
                   inv_delta * (fv * b(i) - b(n + i));
    }
    return out;
  };
  p.metric_weights = Vector::Constant(2 * n, h);
  return p;
}

std::vector<double> rd_homogeneous_roots(double mu) {
  // Monic form u^4 - u^2 - 1.2 u - mu = 0, solved through the companion
  // matrix and polished with a few Newton steps.
  Matrix companion = Matrix::Zero(4, 4);
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;
  companion(0, 3) = mu;
  companion(1, 3) = 1.2;
  companion(2, 3) = 1.0;
  companion(3, 3) = 0.0;
  Eigen::EigenSolver<Matrix> solver(companion);

  std::vector<double> out;
  for (Index k = 0; k < 4; ++k) {
    const Complex root = solver.eigenvalues()(k);
    if (std::abs(root.imag()) > 1e-8 * std::max(1.0, std::abs(root.real())))
      continue;
    double u = root.real();
    for (int it = 0; it < 4; ++it) {
      const double value = ((u * u - 1.0) * u - 1.2) * u - mu;
      const double slope = (4.0 * u * u - 2.0) * u - 1.2;
      if (slope == 0.0) break;
      u -= value / slope;
    }
    if (u <= 0.0) continue;
    bool duplicate = false;
    for (double seen : out)
      if (std::abs(seen - u) <= 1e-9) duplicate = true;
    if (!duplicate) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double rd_u_plus(double mu) {
  auto roots = rd_homogeneous_roots(mu);
  if (roots.empty())
    throw GadError("no positive homogeneous root at mu = " +
                   std::to_string(mu));
  return roots.back();
}

Vector rd_perturbed_state(double mu, int n_grid, std::string_view base,
                          double amplitude, std::uint64_t seed) {
  if (n_grid < 1)
    throw GadError("rd_perturbed_state needs a positive grid size");
  double u0 = 0.0;
  double v0 = 0.0;
  if (base == "u-plus") {
    u0 = rd_u_plus(mu);
    v0 = 0.5 * u0 * u0;
  } else if (base != "zero") {
    throw GadError("unknown base state '" + std::string(base) +
                   "'; expected \"zero\" or \"u-plus\"");
  }

  const int n = n_grid;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector bump = Vector::Zero(n);
  for (int k = 1; k <= 4; ++k) {
    const double a = gauss(rng);
    const double b = gauss(rng);
    for (int i = 0; i < n; ++i) {
      const double phase = 2.0 * std::numbers::pi * k * i / n;
      bump(i) += a * std::cos(phase) + b * std::sin(phase);
    }
  }
  const double peak = bump.lpNorm<Eigen::Infinity>();
  if (peak > 0.0) bump *= amplitude / peak;

  Vector state(2 * n);
  state.head(n) = Vector::Constant(n, u0) + bump;
  state.tail(n).setConstant(v0);
  return state;
}

ProblemSpec allen_cahn(int n_grid, double domain_length) {
  if (n_grid < 16)
    throw GadError("allen_cahn needs n_grid >= 16; got " +
                   std::to_string(n_grid));
  if (!(domain_length > 0.0))
    throw GadError("allen_cahn needs a positive domain length");
  ProblemSpec p;
  const int n = n_grid;
  p.dim = n;
  const double h = domain_length / n;
  const double inv_h2 = 1.0 / (h * h);

  p.field = [n, inv_h2](const Vector& u) {
    Vector out(n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      out(i) = inv_h2 * (u(ip) - 2.0 * u(i) + u(im)) -
               (u(i) * u(i) - 1.0) * u(i);
    }
    return out;
  };
  p.is_gradient = true;
  p.potential = [n, h](const Vector& u) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const double slope = (u(ip) - u(i)) / h;
      const double q = u(i) * u(i) - 1.0;
      total += h * (0.5 * slope * slope + 0.25 * q * q);
    }
    return total;
  };
  p.jacobian_action = [n, inv_h2](const Vector& u, const Vector& b) {
    Vector out(n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      out(i) = inv_h2 * (b(ip) - 2.0 * b(i) + b(im)) -
               (3.0 * u(i) * u(i) - 1.0) * b(i);
    }
    return out;
  };
  p.jacobian_transpose_action = p.jacobian_action;
  p.metric_weights = Vector::Constant(n, h);
  return p;
}

ProblemSpec rayleigh(const Matrix& a) {
  if (a.rows() != a.cols())
    throw GadError("rayleigh needs a square matrix; got " +
                   std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  const double scale = 1.0 + a.lpNorm<Eigen::Infinity>();
  if ((a - a.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * scale)
    throw GadError("rayleigh needs a symmetric matrix");

  ProblemSpec p;
  p.dim = a.rows();
  const Matrix m = a;
  auto guard = [](const Vector& x) {
    if (x.norm() < 1e-8)
      throw EvaluationError("Rayleigh quotient is singular near the origin");
  };

  p.field = [m, guard](const Vector& x) {
    guard(x);
    const double s = x.squaredNorm();
    const Vector mx = m * x;
    const double value = x.dot(mx) / s;
    return Vector((2.0 / s) * (value * x - mx));
  };
  p.is_gradient = true;
  p.potential = [m, guard](const Vector& x) {
    guard(x);
    return x.dot(m * x) / x.squaredNorm();
  };
  p.jacobian_action = [m, guard](const Vector& x, const Vector& b) {
    guard(x);
    const double s = x.squaredNorm();
    const Vector mx = m * x;
    const double value = x.dot(mx) / s;
    const Vector grad = (2.0 / s) * (mx - value * x);
    return Vector((2.0 / s) * (value * b - m * b) +
                  (2.0 / s) * grad.dot(b) * x + (2.0 / s) * x.dot(b) * grad);
  };
  p.jacobian_transpose_action = p.jacobian_action;
  p.metric_weights = Vector::Ones(p.dim);
  return p;
}

std::vector<std::string> problem_ids() {
  return {"double-well", "lorenz",     "lorenz-reversed",
          "rd-nucleation", "allen-cahn", "rayleigh"};
}

}  // namespace gad::problems

#include "gad/verify.hpp"

#include "gad/dynamics.hpp"
#include "gad/jacobian.hpp"
#include "gad/metric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace gad {

namespace {

void check_distinct(const std::vector<double>& lambdas, double distinct_tol) {
  for (size_t a = 0; a < lambdas.size(); ++a)
    for (size_t b = a + 1; b < lambdas.size(); ++b)
      if (std::abs(lambdas[a] - lambdas[b]) < distinct_tol)
        throw DegenerateEigenvalueError(
            "spectrum prediction needs distinct eigenvalues; two are within " +
            std::to_string(distinct_tol));
}

void check_target(const std::vector<double>& lambdas, int i) {
  if (i < 0 || static_cast<size_t>(i) >= lambdas.size())
    throw DimensionError("eigenvalue target " + std::to_string(i) +
                         " out of range for " +
                         std::to_string(lambdas.size()) + " eigenvalues");
}

// Outcome of a single scan cell before clustering.
struct CellOutcome {
  int kind = -2;  // 0 converged, -1 diverged, -2 budget exhausted / failed
  Vector x_star;
  long steps = 0;
};

int scan_worker_count(int rows) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("GAD_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed >= 1) workers = parsed;
  }
  return std::max(1, std::min(workers, rows));
}

// Runs `cell` over the whole grid, rows handed out through an atomic
// counter; outcomes land in a fixed array so the result is independent of
// the thread schedule.
template <typename CellFn>
std::vector<CellOutcome> scan_cells(const GridSpec& grid, const CellFn& cell) {
  std::vector<CellOutcome> outcomes(
      static_cast<size_t>(grid.nx) * static_cast<size_t>(grid.ny));
  std::atomic<int> next_row{0};
  auto work = [&] {
    for (int iy = next_row.fetch_add(1); iy < grid.ny;
         iy = next_row.fetch_add(1)) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        Vector x0(2);
        x0 << grid.x_at(ix), grid.y_at(iy);
        outcomes[static_cast<size_t>(iy) * grid.nx + ix] = cell(x0);
      }
    }
  };
  const int workers = scan_worker_count(grid.ny);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return outcomes;
}

// Serial row-major clustering pass: labels are indices of first encounter.
BasinScan cluster_outcomes(const GridSpec& grid,
                           const std::vector<CellOutcome>& outcomes,
                           double cluster_tol) {
  BasinScan out;
  out.grid = grid;
  out.labels.resize(outcomes.size());
  out.steps.resize(outcomes.size());
  for (size_t c = 0; c < outcomes.size(); ++c) {
    const CellOutcome& cell = outcomes[c];
    out.steps[c] = cell.steps;
    if (cell.kind < 0) {
      out.labels[c] = cell.kind;
      continue;
    }
    int label = -1;
    for (size_t k = 0; k < out.limit_points.size(); ++k) {
      if (norm_inf(Vector(cell.x_star - out.limit_points[k])) <= cluster_tol) {
        label = static_cast<int>(k);
        break;
      }
    }
    if (label < 0) {
      label = static_cast<int>(out.limit_points.size());
      out.limit_points.push_back(cell.x_star);
    }
    out.labels[c] = label;
  }
  return out;
}

}  // namespace

ResidualSummary verify_fixed_point(const ProblemSpec& problem,
                                   const GadState& state, double tol_force,
                                   const JvpConfig& cfg) {
  if (state.pairs.empty())
    throw DimensionError("verify_fixed_point needs a state with a direction pair");
  ResidualSummary out;
  out.force_inf = norm_inf(problem.field(state.x));
  const Vector& v = state.pairs.front().v;
  const Vector& w = state.pairs.front().w;
  const Vector jv = jvp(problem, state.x, v, cfg);
  const Vector jtw = jtvp(problem, state.x, w, cfg);
  const Scalar lambda = alpha(problem, v, jv);
  out.eig_right_inf = norm_inf(jv - lambda * v);
  out.eig_left_inf = norm_inf(jtw - lambda * w);
  out.alpha_beta_gap = std::abs(beta(problem, w, jv, lambda) - lambda);
  out.pass = out.force_inf <= 10.0 * tol_force &&
             out.eig_right_inf <= 10.0 * tol_force;
  return out;
}

IndexClassification classify_index(const ProblemSpec& problem, const Vector& x,
                                   const JvpConfig& cfg, double marginal_tol) {
  auto eig = eig_dense(assemble_jacobian(problem, x, cfg));
  IndexClassification out;
  out.spectrum = std::move(eig.values);
  for (Index k = 0; k < out.spectrum.size(); ++k) {
    if (out.spectrum(k).real() > 0.0) ++out.morse_index;
    if (std::abs(out.spectrum(k).real()) < marginal_tol) out.marginal = true;
  }
  return out;
}

std::vector<double> gad_spectrum_expected(const std::vector<double>& lambdas,
                                          int i, double distinct_tol) {
  check_target(lambdas, i);
  check_distinct(lambdas, distinct_tol);
  const double li = lambdas[static_cast<size_t>(i)];
  std::vector<double> out;
  out.reserve(3 * lambdas.size());
  out.push_back(-2.0 * li);
  out.push_back(-2.0 * li);
  out.push_back(-li);
  for (size_t j = 0; j < lambdas.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    out.push_back(lambdas[j]);
    out.push_back(lambdas[j] - li);
    out.push_back(lambdas[j] - li);
  }
  return out;
}

std::vector<double> gad_spectrum_expected_gradient(
    const std::vector<double>& lambdas, int i, double distinct_tol) {
  check_target(lambdas, i);
  check_distinct(lambdas, distinct_tol);
  const double li = lambdas[static_cast<size_t>(i)];
  std::vector<double> out;
  out.reserve(2 * lambdas.size());
  out.push_back(-2.0 * li);
  out.push_back(-li);
  for (size_t j = 0; j < lambdas.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    out.push_back(lambdas[j]);
    out.push_back(lambdas[j] - li);
  }
  return out;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                   const Vector& y, double eps0) {
  const Vector f0 = f(y);
  Matrix j(f0.size(), y.size());
  Vector shifted = y;
  for (Index k = 0; k < y.size(); ++k) {
    const double h = eps0 * (1.0 + std::abs(y(k)));
    shifted(k) = y(k) + h;
    const Vector fp = f(shifted);
    shifted(k) = y(k) - h;
    const Vector fm = f(shifted);
    shifted(k) = y(k);
    j.col(k) = (fp - fm) / (2.0 * h);
  }
  return j;
}

Matrix gad_jacobian_numeric(const ProblemSpec& problem, const GadState& state,
                            const GadVariant& variant, const JvpConfig& cfg,
                            double eps0) {
  if (problem.dim > 64)
    throw CapabilityError(
        "numeric augmented Jacobians are limited to base dimension 64; got " +
        std::to_string(problem.dim));
  const Vector flat = pack_state(state, variant.kind);
  auto rhs = [&](const Vector& y) {
    return eval_rhs_flat(problem, y, variant, cfg);
  };
  return fd_jacobian(rhs, flat, eps0);
}

double max_matched_distance(const ComplexVector& numeric,
                            std::vector<double> expected) {
  if (numeric.size() != static_cast<Index>(expected.size()))
    throw DimensionError("spectrum sizes differ: " +
                         std::to_string(numeric.size()) + " vs " +
                         std::to_string(expected.size()));
  std::vector<Complex> values(numeric.data(), numeric.data() + numeric.size());
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::sort(expected.begin(), expected.end());
  double worst = 0.0;
  for (size_t k = 0; k < expected.size(); ++k)
    worst = std::max(worst, std::abs(values[k] - expected[k]));
  return worst;
}

SaddleReport newton_raphson(const ProblemSpec& problem, const Vector& x0,
                            const RunConfig& cfg, int max_iters) {
  validate_problem(problem);
  Vector x = x0;
  Vector f = problem.field(x);
  double fn = norm_inf(f);
  long iters = 0;
  std::string status;

  if (fn <= cfg.tol_force) status = "converged";
  while (status.empty()) {
    if (iters >= max_iters) {
      status = "max-steps";
      break;
    }
    Eigen::FullPivLU<Matrix> lu(assemble_jacobian(problem, x, cfg.jvp));
    if (!lu.isInvertible()) {
      status = "singular-jacobian";
      break;
    }
    const Vector dx = lu.solve(-f);

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 30 && !accepted; ++halving) {
      const Vector candidate = x + scale * dx;
      try {
        const Vector fc = problem.field(candidate);
        const double fcn = norm_inf(fc);
        if (std::isfinite(fcn) && fcn < fn) {
          x = candidate;
          f = fc;
          fn = fcn;
          accepted = true;
        }
      } catch (const GadError&) {
        // Treat an unevaluable candidate like a non-improving one.
      }
      scale *= 0.5;
    }
    if (!accepted) {
      status = "stagnated";
      break;
    }
    ++iters;
    if (fn <= cfg.tol_force) status = "converged";
  }

  // Polish: once inside the tolerance, full steps keep squaring the residual,
  // so a couple more land on the root to round-off. Stop at the first step
  // that fails to improve strictly.
  for (int extra = 0; status == "converged" && fn > 0.0 && extra < 3;
       ++extra) {
    Eigen::FullPivLU<Matrix> lu(assemble_jacobian(problem, x, cfg.jvp));
    if (!lu.isInvertible()) break;
    const Vector candidate = x + Vector(lu.solve(-f));
    try {
      const Vector fc = problem.field(candidate);
      const double fcn = norm_inf(fc);
      if (!std::isfinite(fcn) || fcn >= fn) break;
      x = candidate;
      f = fc;
      fn = fcn;
      ++iters;
    } catch (const GadError&) {
      break;
    }
  }

  SaddleReport report;
  report.x_star = std::move(x);
  report.residual_force = fn;
  report.steps = iters;
  report.converged = status == "converged";
  report.status = std::move(status);
  if (problem.dim <= cfg.jvp.dense_assembly_limit) {
    try {
      report.morse_index =
          classify_index(problem, report.x_star, cfg.jvp).morse_index;
    } catch (const GadError&) {
      // Index is best-effort at failed terminal points.
    }
  }
  return report;
}

BasinScan basin_scan(const ProblemSpec& problem, const GadVariant& variant,
                     const GridSpec& grid, const RunConfig& cfg,
                     double cluster_tol) {
  validate_problem(problem);
  if (problem.dim != 2)
    throw DimensionError("basin scans are defined for planar problems; dim = " +
                         std::to_string(problem.dim));
  RunConfig cell_cfg = cfg;
  cell_cfg.record_every = std::max(cfg.max_steps, 1L) + 1;

  auto outcomes = scan_cells(grid, [&](const Vector& x0) {
    CellOutcome out;
    try {
      auto result = run_gad(problem, x0, variant, cell_cfg);
      out.steps = result.report.steps;
      if (result.report.converged) {
        out.kind = 0;
        out.x_star = result.report.x_star;
      } else {
        out.kind = result.report.status == "diverged" ? -1 : -2;
      }
    } catch (const GadError&) {
      out.kind = -1;
    }
    return out;
  });
  return cluster_outcomes(grid, outcomes, cluster_tol);
}

BasinScan newton_basin_scan(const ProblemSpec& problem, const GridSpec& grid,
                            const RunConfig& cfg, double cluster_tol,
                            int max_iters) {
  validate_problem(problem);
  if (problem.dim != 2)
    throw DimensionError("basin scans are defined for planar problems; dim = " +
                         std::to_string(problem.dim));
  auto outcomes = scan_cells(grid, [&](const Vector& x0) {
    CellOutcome out;
    try {
      auto report = newton_raphson(problem, x0, cfg, max_iters);
      out.steps = report.steps;
      if (report.converged) {
        out.kind = 0;
        out.x_star = report.x_star;
      }
    } catch (const GadError&) {
      out.kind = -2;
    }
    return out;
  });
  return cluster_outcomes(grid, outcomes, cluster_tol);
}

}  // namespace gad

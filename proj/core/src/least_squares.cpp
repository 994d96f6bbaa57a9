#include "wavesel/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wavesel {

namespace {

constexpr double kDampingGrow = 2.0;
constexpr double kDampingShrink = 3.0;
constexpr double kDampingMin = 1e-12;
constexpr double kDampingMax = 1e12;
constexpr double kPivotFloor = 1e-7;

// In-place Cholesky solve of A x = b for symmetric positive definite A
// (row-major n*n). Returns false when a pivot is not strictly positive.
bool cholesky_solve(std::vector<double> a, std::vector<double> b,
                    std::size_t n, std::vector<double>& x) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= a[i * n + k] * x[k];
    x[i] = sum / a[i * n + i];
  }
  for (std::size_t ii = n; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double sum = x[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= a[k * n + i] * x[k];
    x[i] = sum / a[i * n + i];
  }
  return true;
}

// Smallest Cholesky pivot of the unit-diagonal scaling of A, or 0 when the
// factorization fails outright. Near-proportional columns drive this toward
// sqrt(machine epsilon) and below.
double min_scaled_pivot(const std::vector<double>& a, std::size_t n) {
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i * n + i] > 0.0)) return 0.0;
    scale[i] = 1.0 / std::sqrt(a[i * n + i]);
  }
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = a[i * n + j] * scale[i] * scale[j];
    }
  }
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = c[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= c[i * n + k] * c[j * n + k];
      if (i == j) {
        if (!(sum > 0.0)) return 0.0;
        c[i * n + i] = std::sqrt(sum);
        min_pivot = std::min(min_pivot, c[i * n + i]);
      } else {
        c[i * n + j] = sum / c[j * n + j];
      }
    }
  }
  return min_pivot;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

LeastSquaresResult solve_least_squares(const ResidualFn& fn,
                                       std::vector<double> initial,
                                       std::size_t residual_count,
                                       const LeastSquaresOptions& options) {
  const std::size_t n = initial.size();
  const std::size_t m = residual_count;
  if (n == 0) throw std::invalid_argument("no parameters to fit");
  if (m == 0) throw std::invalid_argument("no residuals to fit");
  if (!fn) throw std::invalid_argument("missing residual function");
  if (options.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }
  const bool bounded = !options.lower_bounds.empty();
  if (bounded && (options.lower_bounds.size() != n ||
                  options.upper_bounds.size() != n)) {
    throw std::invalid_argument("bounds size does not match parameter count");
  }
  if (!options.typical_scale.empty() && options.typical_scale.size() != n) {
    throw std::invalid_argument("typical_scale size does not match parameters");
  }

  auto scale_of = [&](std::size_t j) {
    return options.typical_scale.empty() ? 1.0 : options.typical_scale[j];
  };
  auto project = [&](std::vector<double>& p) {
    if (!bounded) return;
    for (std::size_t j = 0; j < n; ++j) {
      p[j] = std::clamp(p[j], options.lower_bounds[j], options.upper_bounds[j]);
    }
  };

  LeastSquaresResult out;
  std::vector<double> p = std::move(initial);
  project(p);

  std::vector<double> r(m);
  fn(p, r);
  double cost = dot(r, r);
  if (!std::isfinite(cost)) {
    throw std::invalid_argument("residuals not finite at the initial point");
  }

  std::vector<double> jac(m * n);
  std::vector<double> jtj(n * n);
  std::vector<double> jtr(n);
  std::vector<double> delta(n);
  std::vector<double> r_lo(m);
  std::vector<double> r_hi(m);
  std::vector<double> trial(n);
  std::vector<double> r_trial(m);

  auto build_jacobian = [&](const std::vector<double>& at) {
    std::vector<double> probe = at;
    for (std::size_t j = 0; j < n; ++j) {
      const double h =
          options.jacobian_rel_step * std::max(std::abs(at[j]), scale_of(j));
      probe[j] = at[j] + h;
      fn(probe, r_hi);
      probe[j] = at[j] - h;
      fn(probe, r_lo);
      probe[j] = at[j];
      const double inv = 1.0 / (2.0 * h);
      for (std::size_t i = 0; i < m; ++i) {
        jac[i * n + j] = (r_hi[i] - r_lo[i]) * inv;
      }
    }
  };
  auto build_normal = [&](const std::vector<double>& res) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          sum += jac[i * n + a] * jac[i * n + b];
        }
        jtj[a * n + b] = sum;
        jtj[b * n + a] = sum;
      }
      double g = 0.0;
      for (std::size_t i = 0; i < m; ++i) g += jac[i * n + a] * res[i];
      jtr[a] = g;
    }
  };

  double damping = options.initial_damping;
  bool stalled = false;
  out.cost_history.reserve(static_cast<std::size_t>(options.max_iterations));

  for (int iter = 0; iter < options.max_iterations && !out.converged; ++iter) {
    out.iterations = iter + 1;
    build_jacobian(p);
    build_normal(r);

    for (std::size_t j = 0; j < n; ++j) {
      if (!(jtj[j * n + j] > 0.0) || !std::isfinite(jtj[j * n + j])) {
        out.singular = true;
      }
    }
    if (out.singular) break;

    bool accepted = false;
    while (!accepted) {
      std::vector<double> damped = jtj;
      for (std::size_t j = 0; j < n; ++j) {
        damped[j * n + j] += damping * jtj[j * n + j];
      }
      std::vector<double> rhs(n);
      for (std::size_t j = 0; j < n; ++j) rhs[j] = -jtr[j];
      const bool solved = cholesky_solve(std::move(damped), rhs, n, delta);
      if (solved) {
        trial = p;
        for (std::size_t j = 0; j < n; ++j) trial[j] += delta[j];
        project(trial);
        fn(trial, r_trial);
        const double trial_cost = dot(r_trial, r_trial);
        if (std::isfinite(trial_cost) && trial_cost <= cost) {
          double max_rel_step = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double denom = std::max(std::abs(p[j]), scale_of(j));
            max_rel_step =
                std::max(max_rel_step, std::abs(trial[j] - p[j]) / denom);
          }
          p = trial;
          r = r_trial;
          cost = trial_cost;
          damping = std::max(damping / kDampingShrink, kDampingMin);
          if (max_rel_step < options.step_tolerance) out.converged = true;
          accepted = true;
          continue;
        }
      }
      if (solved) {
        // Rejected step already below tolerance: no meaningful move exists.
        double max_rel_step = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double denom = std::max(std::abs(p[j]), scale_of(j));
          max_rel_step = std::max(max_rel_step, std::abs(delta[j]) / denom);
        }
        if (max_rel_step < options.step_tolerance) {
          out.converged = true;
          break;
        }
      }
      damping *= kDampingGrow;
      if (damping > kDampingMax) {
        stalled = true;
        break;
      }
    }
    out.cost_history.push_back(cost);
    if (stalled) break;
  }

  out.parameters = p;
  out.cost = cost;
  out.rms_residual = std::sqrt(cost / static_cast<double>(m));

  if (!out.singular) {
    build_jacobian(p);
    build_normal(r);
    const double pivot = min_scaled_pivot(jtj, n);
    if (pivot < kPivotFloor) out.ill_conditioned = true;
    if (m > n && pivot > 0.0) {
      const double sigma2 = cost / static_cast<double>(m - n);
      std::vector<double> basis(n, 0.0);
      std::vector<double> column(n);
      out.covariance_diag.resize(n);
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        basis.assign(n, 0.0);
        basis[j] = 1.0;
        ok = cholesky_solve(jtj, basis, n, column);
        if (ok) out.covariance_diag[j] = sigma2 * column[j];
      }
      if (!ok) out.covariance_diag.clear();
    }
  }
  return out;
}

}  // namespace wavesel

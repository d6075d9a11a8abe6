#include "sgbn/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgbn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double rho, double cut) {
  if (rho > cut) return rho - cut;
  if (rho < -cut) return rho + cut;
  return 0.0;
}
}  // namespace

// ---------------------------------------------------------------------------
// weighted lasso
// ---------------------------------------------------------------------------

Vector weighted_lasso(const Matrix& a, const Vector& y, const Vector& w, const Vector& theta0,
                      const LassoOptions& opts) {
  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();
  if (y.size() != n) throw std::invalid_argument("weighted_lasso: target length mismatch");
  if (w.size() != p || theta0.size() != p)
    throw std::invalid_argument("weighted_lasso: coefficient length mismatch");
  if ((w.array() < 0.0).any()) throw std::invalid_argument("weighted_lasso: negative weight");

  Vector colsq(p);
  for (Eigen::Index k = 0; k < p; ++k) colsq(k) = a.col(k).squaredNorm();

  Vector theta = theta0;
  Vector r = y - a * theta;

  auto objective = [&]() {
    double pen = 0.0;
    for (Eigen::Index k = 0; k < p; ++k)
      if (theta(k) != 0.0) pen += w(k) * std::abs(theta(k));
    return r.squaredNorm() + pen;
  };

  int sweep = 0;
  bool converged = false;
  for (; sweep < opts.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (colsq(k) == 0.0) {
        theta(k) = 0.0;
        continue;
      }
      const double rho = a.col(k).dot(r) + colsq(k) * theta(k);
      const double next = soft_threshold(rho, w(k) * 0.5) / colsq(k);
      const double delta = next - theta(k);
      if (delta != 0.0) {
        r -= a.col(k) * delta;
        theta(k) = next;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (opts.sweep_objectives) opts.sweep_objectives->push_back(objective());
    if (max_delta < opts.tol) {
      converged = true;
      ++sweep;
      break;
    }
  }

  if (!converged) {
    SolveReport rep{false, sweep, objective(), 0.0};
    throw SolverError("weighted_lasso: no convergence after max sweeps", rep);
  }
  return theta;
}

// ---------------------------------------------------------------------------
// SVM dual
// ---------------------------------------------------------------------------

QpDualSolution solve_svm_dual(const Matrix& k, const std::vector<int>& y,
                              const SvmDualOptions& opts) {
  const Eigen::Index n = k.rows();
  if (k.cols() != n) throw std::invalid_argument("solve_svm_dual: kernel must be square");
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw std::invalid_argument("solve_svm_dual: label length mismatch");
  for (int yi : y)
    if (yi != 1 && yi != -1) throw std::invalid_argument("solve_svm_dual: labels must be +/-1");

  QpDualSolution sol;
  sol.alpha = Vector::Zero(n);

  const bool mixed = std::any_of(y.begin(), y.end(), [&](int v) { return v != y[0]; });
  if (!mixed) {
    // The equality constraint with alpha >= 0 forces alpha = 0.
    sol.bias = static_cast<double>(y[0]);
    sol.objective = 0.0;
    sol.converged = true;
    sol.note = "single-class input: alpha pinned to zero by the equality constraint";
    return sol;
  }

  Vector f = Vector::Zero(n);  // f_i = sum_j y_j alpha_j K_ij
  auto e_val = [&](Eigen::Index i) { return static_cast<double>(y[static_cast<std::size_t>(i)]) - f(i); };

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    // b must satisfy  b >= E_i on the "lower" side and b <= E_j on the "upper"
    // side; the most violating pair bounds the KKT gap.
    Eigen::Index lo = -1, up = -1;
    double lo_e = -kInf, up_e = kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool sv = sol.alpha(i) > 0.0;
      const double e = e_val(i);
      if ((sv || y[static_cast<std::size_t>(i)] == 1) && e > lo_e) {
        lo_e = e;
        lo = i;
      }
      if ((sv || y[static_cast<std::size_t>(i)] == -1) && e < up_e) {
        up_e = e;
        up = i;
      }
    }
    if (lo < 0 || up < 0 || lo_e - up_e <= opts.kkt_tol) break;

    const Eigen::Index i = lo, j = up;
    const double yi = y[static_cast<std::size_t>(i)], yj = y[static_cast<std::size_t>(j)];
    // direction alpha_i += yi*s, alpha_j -= yj*s keeps sum(alpha .* y) fixed
    double smax = kInf;
    if (yi < 0) smax = std::min(smax, sol.alpha(i));
    if (yj > 0) smax = std::min(smax, sol.alpha(j));
    const double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
    double s;
    if (eta > 1e-14) {
      s = std::min((lo_e - up_e) / eta, smax);
    } else {
      if (!std::isfinite(smax)) {
        SolveReport rep{false, iter, sol.objective, lo_e - up_e};
        throw SolverError("solve_svm_dual: unbounded ascent direction (inseparable hard margin)", rep);
      }
      s = smax;
    }
    if (!(s > 0.0)) break;  // fully blocked: numerically optimal

    sol.alpha(i) += yi * s;
    sol.alpha(j) -= yj * s;
    if (sol.alpha(i) < 0.0) sol.alpha(i) = 0.0;
    if (sol.alpha(j) < 0.0) sol.alpha(j) = 0.0;
    f += s * (k.col(i) - k.col(j));
  }

  double viol = 0.0;
  {
    double lo_e = -kInf, up_e = kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool sv = sol.alpha(i) > 0.0;
      const double e = e_val(i);
      if (sv || y[static_cast<std::size_t>(i)] == 1) lo_e = std::max(lo_e, e);
      if (sv || y[static_cast<std::size_t>(i)] == -1) up_e = std::min(up_e, e);
    }
    viol = std::max(0.0, lo_e - up_e);
    // bias from unbounded support vectors, else the midpoint of the KKT window
    double acc = 0.0;
    int cnt = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (sol.alpha(i) > 1e-12) {
        acc += e_val(i);
        ++cnt;
      }
    sol.bias = cnt > 0 ? acc / cnt : 0.5 * (lo_e + up_e);
  }

  if (viol > opts.kkt_tol) {
    SolveReport rep{false, iter, sol.objective, viol};
    throw SolverError("solve_svm_dual: KKT tolerance not reached", rep);
  }

  double quad = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) quad += static_cast<double>(y[static_cast<std::size_t>(i)]) * sol.alpha(i) * f(i);
  sol.objective = sol.alpha.sum() - 0.5 * quad;
  sol.converged = true;
  sol.iterations = iter;
  return sol;
}

// ---------------------------------------------------------------------------
// dense two-phase simplex
// ---------------------------------------------------------------------------

namespace {

struct Simplex {
  // rows: constraints as equalities; cols: variables + rhs (last column)
  Matrix t;
  std::vector<Eigen::Index> basis;
  Eigen::Index rows, cols;  // cols excludes rhs

  double rhs(Eigen::Index r) const { return t(r, cols); }

  void pivot(Eigen::Index pr, Eigen::Index pc) {
    t.row(pr) /= t(pr, pc);
    for (Eigen::Index r = 0; r < rows + 1; ++r) {
      if (r == pr) continue;
      const double factor = t(r, pc);
      if (factor != 0.0) t.row(r) -= factor * t.row(pr);
    }
    basis[static_cast<std::size_t>(pr)] = pc;
  }

  // Minimizes the cost row (stored at row `rows`). Dantzig entering rule with
  // a Bland fallback once the objective stalls, so cycling cannot occur.
  // Returns false on unboundedness.
  bool run(Eigen::Index col_limit) {
    int stall = 0;
    double last_negz = -kInf;  // rhs cell of the cost row: rises as the objective falls
    const int stall_limit = 50;
    while (true) {
      const bool bland = stall >= stall_limit;
      Eigen::Index pc = -1;
      double best = -1e-9;
      for (Eigen::Index c = 0; c < col_limit; ++c) {
        const double red = t(rows, c);
        if (red < best) {
          pc = c;
          best = red;
          if (bland) break;
        }
      }
      if (pc < 0) return true;

      Eigen::Index pr = -1;
      double best_ratio = kInf;
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (t(r, pc) > 1e-11) {
          const double ratio = rhs(r) / t(r, pc);
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (pr < 0 || basis[static_cast<std::size_t>(r)] <
                                                            basis[static_cast<std::size_t>(pr)]))) {
            best_ratio = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return false;  // unbounded

      pivot(pr, pc);
      const double negz = t(rows, cols);
      if (negz > last_negz + 1e-12) {
        stall = 0;
        last_negz = negz;
      } else {
        ++stall;
      }
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const Eigen::Index p = lp.c.size();
  if (lp.lower.size() != p || lp.upper.size() != p)
    throw std::invalid_argument("solve_lp: bound length mismatch");
  if (lp.a.rows() != lp.b.size()) throw std::invalid_argument("solve_lp: inequality shape mismatch");
  if (lp.a.rows() > 0 && lp.a.cols() != p)
    throw std::invalid_argument("solve_lp: inequality width mismatch");
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!std::isfinite(lp.lower(k))) throw std::invalid_argument("solve_lp: lower bounds must be finite");
    if (lp.upper(k) < lp.lower(k)) throw std::invalid_argument("solve_lp: empty box");
  }

  // shift x = lower + z, z >= 0; finite upper bounds become extra rows
  std::vector<Eigen::Index> upper_rows;
  for (Eigen::Index k = 0; k < p; ++k)
    if (std::isfinite(lp.upper(k))) upper_rows.push_back(k);

  const Eigen::Index n_ineq = lp.a.rows();
  const Eigen::Index rows = n_ineq + static_cast<Eigen::Index>(upper_rows.size());
  const Eigen::Index n_slack = rows;

  // Assemble equality rows in z and slack variables, rhs >= 0.
  Matrix eq = Matrix::Zero(rows, p + n_slack);
  Vector rhs = Vector::Zero(rows);
  for (Eigen::Index r = 0; r < n_ineq; ++r) {
    // a'z >= b - a'lower  <=>  a'z - s = b - a'lower
    double b = lp.b(r) - lp.a.row(r).dot(lp.lower);
    eq.row(r).head(p) = lp.a.row(r);
    eq(r, p + r) = -1.0;
    rhs(r) = b;
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const Eigen::Index r = n_ineq + static_cast<Eigen::Index>(u);
    const Eigen::Index k = upper_rows[u];
    eq(r, k) = 1.0;
    eq(r, p + r) = 1.0;
    rhs(r) = lp.upper(k) - lp.lower(k);
  }
  for (Eigen::Index r = 0; r < rows; ++r)
    if (rhs(r) < 0.0) {
      eq.row(r) = -eq.row(r);
      rhs(r) = -rhs(r);
    }

  // Phase 1: artificial variable per row, minimize their sum.
  Simplex sx;
  sx.rows = rows;
  sx.cols = p + n_slack + rows;
  sx.t = Matrix::Zero(rows + 1, sx.cols + 1);
  sx.t.block(0, 0, rows, p + n_slack) = eq;
  for (Eigen::Index r = 0; r < rows; ++r) {
    sx.t(r, p + n_slack + r) = 1.0;
    sx.t(r, sx.cols) = rhs(r);
    sx.basis.push_back(p + n_slack + r);
  }
  for (Eigen::Index c = 0; c < p + n_slack; ++c) sx.t(rows, c) = -eq.col(c).sum();
  sx.t(rows, sx.cols) = -rhs.sum();

  if (!sx.run(p + n_slack)) throw SolverError("solve_lp: phase-1 unbounded", {});
  if (-sx.t(rows, sx.cols) > 1e-7) throw SolverError("solve_lp: infeasible", {});

  // Pivot leftover artificials out of the basis (or their rows are redundant).
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (sx.basis[static_cast<std::size_t>(r)] < p + n_slack) continue;
    Eigen::Index pc = -1;
    for (Eigen::Index c = 0; c < p + n_slack; ++c)
      if (std::abs(sx.t(r, c)) > 1e-9) {
        pc = c;
        break;
      }
    if (pc >= 0) sx.pivot(r, pc);
  }

  // Phase 2: original costs over z; artificial columns are frozen out.
  for (Eigen::Index c = 0; c < sx.cols; ++c) sx.t(rows, c) = 0.0;
  sx.t(rows, sx.cols) = 0.0;
  for (Eigen::Index c = 0; c < p; ++c) sx.t(rows, c) = lp.c(c);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index bc = sx.basis[static_cast<std::size_t>(r)];
    const double cost = sx.t(rows, bc);
    if (cost != 0.0) sx.t.row(rows) -= cost * sx.t.row(r);
  }
  if (!sx.run(p + n_slack)) throw SolverError("solve_lp: objective unbounded", {});

  Vector z = Vector::Zero(p + n_slack);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index bc = sx.basis[static_cast<std::size_t>(r)];
    if (bc < p + n_slack) z(bc) = sx.rhs(r);
  }

  LpSolution out;
  out.x = lp.lower + z.head(p);
  out.objective = lp.c.dot(out.x);
  return out;
}

// ---------------------------------------------------------------------------
// quadratic-penalty minimizer
// ---------------------------------------------------------------------------

namespace {

double max_violation(const PenalizedProblem& prob, const Vector& x) {
  double v = 0.0;
  for (const auto& g : prob.inequalities) v = std::max(v, g(x, nullptr));
  for (const auto& h : prob.equalities) v = std::max(v, std::abs(h(x, nullptr)));
  return v;
}

}  // namespace

PenalizedResult minimize_penalized(const PenalizedProblem& problem, const Vector& x0,
                                   const PenalizedOptions& opts) {
  const Eigen::Index dim = x0.size();

  auto penalized = [&](const Vector& x, double mu, Vector* grad) {
    if (grad) grad->setZero(dim);
    double val = problem.objective(x, grad);
    Vector gtmp;
    for (const auto& g : problem.inequalities) {
      if (grad) {
        gtmp.setZero(dim);
        const double gv = g(x, &gtmp);
        if (gv > 0.0) {
          val += mu * gv * gv;
          *grad += (2.0 * mu * gv) * gtmp;
        }
      } else {
        const double gv = g(x, nullptr);
        if (gv > 0.0) val += mu * gv * gv;
      }
    }
    for (const auto& h : problem.equalities) {
      if (grad) {
        gtmp.setZero(dim);
        const double hv = h(x, &gtmp);
        val += mu * hv * hv;
        *grad += (2.0 * mu * hv) * gtmp;
      } else {
        const double hv = h(x, nullptr);
        val += mu * hv * hv;
      }
    }
    return val;
  };

  const double f0 = problem.objective(x0, nullptr);
  Vector best_x = x0;
  double best_f = f0;
  bool best_found = max_violation(problem, x0) <= opts.feasibility_tol;

  auto consider = [&](const Vector& x) {
    const double f = problem.objective(x, nullptr);
    if (f <= best_f + 1e-15 && max_violation(problem, x) <= opts.feasibility_tol) {
      if (!best_found || f < best_f) {
        best_found = true;
        best_f = f;
        best_x = x;
      }
    }
  };

  Vector x = x0;
  int total_iters = 0;
  bool grad_converged = false;

  double mu = opts.penalty_init;
  for (int round = 0; round < opts.penalty_rounds; ++round, mu *= opts.penalty_growth) {
    Vector grad(dim), prev_grad(dim), prev_x(dim);
    double pv = penalized(x, mu, &grad);
    bool have_prev = false;
    grad_converged = false;

    for (int it = 0; it < opts.inner_iters; ++it, ++total_iters) {
      const double gnorm2 = grad.squaredNorm();
      if (gnorm2 <= opts.grad_tol * opts.grad_tol * std::max(1.0, pv * pv)) {
        grad_converged = true;
        break;
      }

      // Barzilai-Borwein seed for the backtracking search
      double step;
      if (have_prev) {
        const Vector s = x - prev_x;
        const Vector yv = grad - prev_grad;
        const double sy = s.dot(yv);
        step = sy > 1e-300 ? s.squaredNorm() / sy : 1.0;
        step = std::clamp(step, 1e-14, 1e12);
      } else {
        step = 1.0 / (1.0 + std::sqrt(gnorm2));
      }

      prev_x = x;
      prev_grad = grad;

      double t = step;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        Vector cand = x - t * grad;
        const double cv = penalized(cand, mu, nullptr);
        if (cv <= pv - 1e-4 * t * gnorm2) {
          x = std::move(cand);
          pv = cv;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        grad_converged = true;  // step collapsed: stationary for this round
        break;
      }
      have_prev = true;
      pv = penalized(x, mu, &grad);
      consider(x);
    }
  }

  consider(x);

  PenalizedResult res;
  if (best_found) {
    res.x = best_x;
    res.report.converged = grad_converged;
    res.report.final_objective = best_f;
    res.report.max_constraint_violation = max_violation(problem, best_x);
  } else {
    // No feasible improvement seen: surface the last iterate with its violation.
    res.x = x;
    res.report.converged = false;
    res.report.final_objective = problem.objective(x, nullptr);
    res.report.max_constraint_violation = max_violation(problem, x);
  }
  res.report.iterations = total_iters;
  return res;
}

}  // namespace sgbn

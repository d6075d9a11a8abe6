#include "sgbn/mm_sgbn.hpp"

#include <cmath>
#include <limits>

#include "discriminative_detail.hpp"

namespace sgbn {

using detail::Stacked;

double margin_term(const Vector& x, const SgbnParams& theta1, const SgbnParams& theta2,
                   const NoiseModel& sigma) {
  return log_likelihood(x, theta1, sigma) - log_likelihood(x, theta2, sigma);
}

namespace {

// Signed margins y_i * (L1_i - L2_i) for stacked rows, from residual matrices.
Vector signed_margins(const Stacked& s, const ClassPairModel& pair) {
  const int m = pair.m();
  const Matrix r1 = s.x - s.u * pair.theta1.theta;
  const Matrix r2 = s.x - s.u * pair.theta2.theta;
  double norm_const = 0.0;  // normalizers cancel only under shared sigma
  for (int q = 0; q < m; ++q)
    norm_const += std::log(pair.sigma2.sigma(q)) - std::log(pair.sigma1.sigma(q));
  Vector d(s.n());
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    double ll_diff = norm_const;
    for (int q = 0; q < m; ++q) {
      const double s1 = pair.sigma1.sigma(q), s2 = pair.sigma2.sigma(q);
      ll_diff += -r1(i, q) * r1(i, q) / (2.0 * s1 * s1) + r2(i, q) * r2(i, q) / (2.0 * s2 * s2);
    }
    d(i) = s.y_pm1[static_cast<std::size_t>(i)] * ll_diff;
  }
  return d;
}

MarginState margin_lp(const Vector& d, double lambda) {
  const Eigen::Index n = d.size();
  LinearProgram lp;
  lp.c.resize(n + 1);
  lp.c(0) = -1.0;
  lp.c.tail(n).setConstant(lambda);
  lp.lower = Vector::Zero(n + 1);
  lp.upper = Vector::Constant(n + 1, std::numeric_limits<double>::infinity());
  lp.a = Matrix::Zero(n, n + 1);
  lp.b = -d;
  for (Eigen::Index i = 0; i < n; ++i) {
    lp.a(i, 0) = -1.0;     // -r + xi_i >= -d_i
    lp.a(i, 1 + i) = 1.0;
  }
  const LpSolution sol = solve_lp(lp);
  MarginState st;
  st.r = sol.x(0);
  st.xi = sol.x.tail(n);
  return st;
}

double resolve_lambda(double lambda, Eigen::Index n) {
  return lambda > 0.0 ? lambda : 1.0 / static_cast<double>(n);
}

}  // namespace

MarginState init_margin(const ClassPairModel& pair, const Dataset& labeled, double lambda) {
  pair.validate();
  labeled.validate();
  if (!labeled.has_labels()) throw std::invalid_argument("init_margin needs labeled data");
  Vector d(labeled.rows());
  for (Eigen::Index i = 0; i < labeled.rows(); ++i) {
    const double y = labeled.labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    d(i) = y * (log_likelihood(labeled.values.row(i).transpose(), pair.theta1, pair.sigma1) -
                log_likelihood(labeled.values.row(i).transpose(), pair.theta2, pair.sigma2));
  }
  return margin_lp(d, resolve_lambda(lambda, labeled.rows()));
}

MmResult mm_learn(const Dataset& x1, const Dataset& x2, const ClassPairModel& init,
                  const MmConfig& cfg) {
  init.validate();
  x1.validate();
  x2.validate();
  const double h1 = fitting_error(x1, init.theta1);
  const double h2 = fitting_error(x2, init.theta2);
  if (cfg.t1 < h1 * (1.0 - 1e-12) || cfg.t2 < h2 * (1.0 - 1e-12))
    throw SolverError("infeasible budgets: T must cover the initial fitting errors", {});
  if (!verify_certificate(init.theta1, init.cert1) || !verify_certificate(init.theta2, init.cert2))
    throw std::invalid_argument("init models lack valid ordering certificates");

  const Stacked s = detail::stack(x1, x2);
  const Eigen::Index n = s.n();
  const double lambda = resolve_lambda(cfg.lambda, n);

  MmResult res;
  res.model = init;
  res.model.t1 = cfg.t1;
  res.model.t2 = cfg.t2;

  if (cfg.k_edges < 0) {
    res.selection.components = detail::all_existing_components(init.theta1, init.theta2);
  } else {
    std::vector<FisherVector> vs;
    vs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      vs.push_back(fisher_vector(s.x.row(i).transpose(), init.theta1, init.sigma1, init.theta2,
                                 init.sigma2));
    res.selection = select_edges(vs, s.labels, cfg.k_edges, init.theta1, init.theta2);
  }
  const auto& comps = res.selection.components;
  const auto k = static_cast<Eigen::Index>(comps.size());

  // state vector z = [theta_s, r, xi]
  const Eigen::Index dim = k + 1 + n;
  auto split_pair = [&](const Vector& z) {
    ClassPairModel pair = res.model;
    detail::scatter_components(pair, comps, z.head(k));
    return pair;
  };

  // Shared evaluation cache: margins and residuals at the current z.
  struct Cache {
    Vector z;
    Matrix r1, r2;  // stacked residuals per class model
    Vector d;       // signed margins
    bool valid = false;
  } cache;
  auto ensure = [&](const Vector& z) {
    if (cache.valid && cache.z.size() == z.size() && cache.z == z) return;
    const ClassPairModel pair = split_pair(z);
    cache.r1 = s.x - s.u * pair.theta1.theta;
    cache.r2 = s.x - s.u * pair.theta2.theta;
    cache.d = signed_margins(s, pair);
    cache.z = z;
    cache.valid = true;
  };

  Vector inv_s2_1 = init.sigma1.sigma.array().square().inverse();
  Vector inv_s2_2 = init.sigma2.sigma.array().square().inverse();

  MarginState st = margin_lp(signed_margins(s, res.model), lambda);
  auto mm_objective = [&](double r, const Vector& xi) { return lambda * xi.sum() - r; };
  double obj = mm_objective(st.r, st.xi);
  res.objective_trace.push_back(obj);

  ClassPairModel best_model = res.model;
  MarginState best_state = st;
  double best_obj = obj;

  int outer = 0;
  bool stalled = false;
  for (; outer < cfg.max_outer_iters && !stalled && k > 0; ++outer) {
    PenalizedProblem prob;
    prob.objective = [&](const Vector& z, Vector* grad) {
      if (grad) {
        grad->setZero(dim);
        (*grad)(k) = -1.0;
        grad->tail(n).setConstant(lambda);
      }
      return lambda * z.tail(n).sum() - z(k);
    };

    // margin constraints r - xi_i - d_i(theta) <= 0
    for (Eigen::Index i = 0; i < n; ++i) {
      prob.inequalities.push_back([&, i](const Vector& z, Vector* grad) {
        ensure(z);
        const double gi = z(k) - z(k + 1 + i) - cache.d(i);
        if (grad) {
          grad->setZero(dim);
          (*grad)(k) = 1.0;
          (*grad)(k + 1 + i) = -1.0;
          const double y = s.y_pm1[static_cast<std::size_t>(i)];
          for (Eigen::Index t = 0; t < k; ++t) {
            const auto& c = comps[static_cast<std::size_t>(t)];
            const double dmargin =
                c.cls == 1 ? cache.r1(i, c.q) * s.u(i, c.a) * inv_s2_1(c.q)
                           : -cache.r2(i, c.q) * s.u(i, c.a) * inv_s2_2(c.q);
            (*grad)(t) = -y * dmargin;
          }
        }
        return gi;
      });
    }
    // nonnegativity of r and xi
    prob.inequalities.push_back([&](const Vector& z, Vector* grad) {
      if (grad) {
        grad->setZero(dim);
        (*grad)(k) = -1.0;
      }
      return -z(k);
    });
    for (Eigen::Index i = 0; i < n; ++i) {
      prob.inequalities.push_back([&, i](const Vector& z, Vector* grad) {
        if (grad) {
          grad->setZero(dim);
          (*grad)(k + 1 + i) = -1.0;
        }
        return -z(k + 1 + i);
      });
    }
    // fitting budgets
    prob.inequalities.push_back([&](const Vector& z, Vector* grad) {
      ensure(z);
      const double h = cache.r1.topRows(s.n1).squaredNorm();
      if (grad) {
        grad->setZero(dim);
        for (Eigen::Index t = 0; t < k; ++t) {
          const auto& c = comps[static_cast<std::size_t>(t)];
          if (c.cls != 1) continue;
          (*grad)(t) = -2.0 * s.u.col(c.a).head(s.n1).dot(cache.r1.col(c.q).head(s.n1));
        }
      }
      return h - cfg.t1;
    });
    prob.inequalities.push_back([&](const Vector& z, Vector* grad) {
      ensure(z);
      const double h = cache.r2.bottomRows(s.n2).squaredNorm();
      if (grad) {
        grad->setZero(dim);
        for (Eigen::Index t = 0; t < k; ++t) {
          const auto& c = comps[static_cast<std::size_t>(t)];
          if (c.cls != 2) continue;
          (*grad)(t) = -2.0 * s.u.col(c.a).tail(s.n2).dot(cache.r2.col(c.q).tail(s.n2));
        }
      }
      return h - cfg.t2;
    });

    Vector z0(dim);
    z0.head(k) = detail::gather_components(res.model, comps);
    z0(k) = st.r;
    z0.tail(n) = st.xi;

    PenalizedOptions popts;
    popts.inner_iters = 200;
    const PenalizedResult step = minimize_penalized(prob, z0, popts);

    // commit the theta part, then restore exact feasibility
    detail::scatter_components(res.model, comps, step.x.head(k));
    detail::repair_and_certify(res.model, init, x1, x2, cfg.delta);

    // closed-form optimal slacks at the repaired models: the margin/slack
    // subproblem is the same LP again
    st = margin_lp(signed_margins(s, res.model), lambda);

    const double prev = obj;
    obj = mm_objective(st.r, st.xi);
    res.objective_trace.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best_model = res.model;
      best_state = st;
    }
    stalled = std::abs(prev - obj) <= cfg.tol * std::max(1.0, std::abs(prev));
  }

  res.model = best_model;
  res.margin = best_state;
  res.report.converged = best_obj <= res.objective_trace.front() + 1e-12;
  res.report.iterations = outer;
  res.report.final_objective = best_obj;
  res.report.max_constraint_violation =
      std::max(std::max(fitting_error(x1, res.model.theta1) - cfg.t1, 0.0),
               std::max(fitting_error(x2, res.model.theta2) - cfg.t2, 0.0));
  return res;
}

}  // namespace sgbn

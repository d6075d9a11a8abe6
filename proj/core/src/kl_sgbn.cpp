#include "sgbn/kl_sgbn.hpp"

#include <cmath>

#include "discriminative_detail.hpp"

namespace sgbn {

using detail::Stacked;

namespace {

void check_budgets(const ClassPairModel& init, const Dataset& x1, const Dataset& x2, double t1,
                   double t2) {
  const double h1 = fitting_error(x1, init.theta1);
  const double h2 = fitting_error(x2, init.theta2);
  if (t1 < h1 * (1.0 - 1e-12) || t2 < h2 * (1.0 - 1e-12))
    throw SolverError("infeasible budgets: T must cover the initial fitting errors", {});
}

// Radius-margin surrogate pieces at fixed multipliers. Works on the scaled
// residual representation: K_ij = <u_i, u_j> * sum_cq R~_c(i,q) R~_c(j,q).
struct KernelWorkspace {
  const Stacked& s;
  const ClassPairModel& init;
  const std::vector<EdgeComponent>& comps;
  Matrix ug;          // U U'
  Matrix bmat;        // UG .* (I - 11'/n), the scatter quadratic form
  Vector inv_s2_1, inv_s2_2;

  KernelWorkspace(const Stacked& stacked, const ClassPairModel& model,
                  const std::vector<EdgeComponent>& components)
      : s(stacked), init(model), comps(components) {
    ug = s.u * s.u.transpose();
    const auto n = static_cast<double>(s.n());
    bmat = -ug / n;
    bmat.diagonal() += ug.diagonal();
    inv_s2_1 = model.sigma1.sigma.array().square().inverse();
    inv_s2_2 = model.sigma2.sigma.array().square().inverse();
  }

  ClassPairModel at(const Vector& z) const {
    ClassPairModel pair = init;
    detail::scatter_components(pair, comps, z);
    return pair;
  }

  // scaled residuals [R1/sigma1^2, R2/sigma2^2], n x 2m
  Matrix scaled_residuals(const ClassPairModel& pair) const {
    const int m = pair.m();
    Matrix rt(s.n(), 2 * m);
    rt.leftCols(m) = s.x - s.u * pair.theta1.theta;
    rt.rightCols(m) = s.x - s.u * pair.theta2.theta;
    for (int q = 0; q < m; ++q) {
      rt.col(q) *= inv_s2_1(q);
      rt.col(m + q) *= inv_s2_2(q);
    }
    return rt;
  }

  Matrix plain_kernel(const Matrix& rt) const { return ug.cwiseProduct(rt * rt.transpose()); }
};

}  // namespace

JEvaluation evaluate_j(const ClassPairModel& pair, const Dataset& x1, const Dataset& x2,
                       const KlConfig& cfg) {
  pair.validate();
  cfg.svm.validate();
  const Stacked s = detail::stack(x1, x2);
  const auto vectors = detail::training_vectors(s, pair, cfg.svm);

  const Matrix k_plain = kernel_matrix(vectors, cfg.svm, /*augment=*/false);
  const Matrix k_aug = kernel_matrix(vectors, cfg.svm, /*augment=*/true);

  JEvaluation ev;
  ev.trace = scatter_trace(k_plain);
  ev.dual = solve_svm_dual(k_aug, s.y_pm1);
  ev.j0 = ev.dual.objective;
  ev.j = ev.j0 * ev.trace;
  return ev;
}

KlResult kl_learn(const Dataset& x1, const Dataset& x2, const ClassPairModel& init,
                  const KlConfig& cfg) {
  init.validate();
  x1.validate();
  x2.validate();
  cfg.svm.validate();
  if (cfg.k_edges < 0) throw std::invalid_argument("k_edges must be nonnegative");
  check_budgets(init, x1, x2, cfg.t1, cfg.t2);
  if (!verify_certificate(init.theta1, init.cert1) || !verify_certificate(init.theta2, init.cert2))
    throw std::invalid_argument("init models lack valid ordering certificates");

  KlResult res;
  res.model = init;
  res.model.t1 = cfg.t1;
  res.model.t2 = cfg.t2;

  const Stacked s = detail::stack(x1, x2);

  {
    const auto init_vectors = detail::training_vectors(s, init, cfg.svm);
    res.selection = select_edges(init_vectors, s.labels, cfg.k_edges, init.theta1, init.theta2);
  }

  JEvaluation ev = evaluate_j(res.model, x1, x2, cfg);
  res.j_trace.push_back(ev.j);

  if (cfg.k_edges == 0 || res.selection.components.empty()) {
    res.report.converged = true;
    res.report.final_objective = ev.j;
    return res;  // nothing to optimize
  }

  const KernelWorkspace ws(s, init, res.selection.components);

  ClassPairModel best = res.model;
  double best_j = ev.j;

  int outer = 0;
  bool stalled = false;
  for (; outer < cfg.max_outer_iters && !stalled; ++outer) {
    if (ev.trace <= 1e-12) break;  // zero scatter: J is already at its floor

    // Descend J(theta) = W(alpha*, theta) * tr(S_T)(theta) over the selected
    // components, alpha* held fixed, fitting errors within budget.
    Vector v(s.n());
    for (Eigen::Index i = 0; i < s.n(); ++i)
      v(i) = ev.dual.alpha(i) * s.y_pm1[static_cast<std::size_t>(i)];
    const double aug_quad = (ev.dual.alpha.array().square().sum()) / cfg.svm.c;
    const double alpha_sum = ev.dual.alpha.sum();

    double obj_scale = 1.0;  // settled below so the penalty sees an O(1) objective
    auto objective = [&](const Vector& z, Vector* grad) {
      const ClassPairModel pair = ws.at(z);
      const Matrix rt = ws.scaled_residuals(pair);
      const Matrix k = ws.plain_kernel(rt);
      const double w_val = alpha_sum - 0.5 * (v.dot(k * v) + aug_quad);
      const double t_val = scatter_trace(k);
      if (grad) {
        const int m = pair.m();
        grad->setZero(z.size());
        // per needed (class, node) column: UG (v .* rt_col) and B rt_col
        for (Eigen::Index t = 0; t < z.size(); ++t) {
          const auto& cpn = ws.comps[static_cast<std::size_t>(t)];
          const int col = (cpn.cls - 1) * m + cpn.q;
          const double inv_s2 =
              cpn.cls == 1 ? ws.inv_s2_1(cpn.q) : ws.inv_s2_2(cpn.q);
          const Vector vr = v.cwiseProduct(rt.col(col));
          const Vector w_piece = ws.ug * vr;
          const Vector b_piece = ws.bmat * rt.col(col);
          const double dquad = -2.0 * inv_s2 * v.cwiseProduct(ws.s.u.col(cpn.a)).dot(w_piece);
          const double dtrace = -2.0 * inv_s2 * ws.s.u.col(cpn.a).dot(b_piece);
          (*grad)(t) = (-0.5 * dquad * t_val + w_val * dtrace) / obj_scale;
        }
      }
      return w_val * t_val / obj_scale;
    };

    PenalizedProblem prob;
    prob.objective = objective;
    prob.inequalities.push_back([&](const Vector& z, Vector* grad) {
      const ClassPairModel pair = ws.at(z);
      const double h = fitting_error(x1, pair.theta1);
      if (grad) {
        grad->setZero(z.size());
        const Matrix r1 = residuals(x1, pair.theta1);
        for (Eigen::Index t = 0; t < z.size(); ++t) {
          const auto& cpn = ws.comps[static_cast<std::size_t>(t)];
          if (cpn.cls != 1) continue;
          (*grad)(t) = -2.0 * ws.s.u.col(cpn.a).head(s.n1).dot(r1.col(cpn.q));
        }
      }
      return h - cfg.t1;
    });
    prob.inequalities.push_back([&](const Vector& z, Vector* grad) {
      const ClassPairModel pair = ws.at(z);
      const double h = fitting_error(x2, pair.theta2);
      if (grad) {
        grad->setZero(z.size());
        const Matrix r2 = residuals(x2, pair.theta2);
        for (Eigen::Index t = 0; t < z.size(); ++t) {
          const auto& cpn = ws.comps[static_cast<std::size_t>(t)];
          if (cpn.cls != 2) continue;
          (*grad)(t) = -2.0 * ws.s.u.col(cpn.a).tail(s.n2).dot(r2.col(cpn.q));
        }
      }
      return h - cfg.t2;
    });

    PenalizedOptions popts;
    popts.inner_iters = 150;
    const Vector z0 = detail::gather_components(res.model, res.selection.components);
    obj_scale = std::max(1.0, std::abs(objective(z0, nullptr)));
    const PenalizedResult step = minimize_penalized(prob, z0, popts);

    detail::scatter_components(res.model, res.selection.components, step.x);
    detail::repair_and_certify(res.model, init, x1, x2, cfg.delta);

    const double prev_j = ev.j;
    ev = evaluate_j(res.model, x1, x2, cfg);
    res.j_trace.push_back(ev.j);
    if (ev.j < best_j) {
      best_j = ev.j;
      best = res.model;
    }
    stalled = std::abs(prev_j - ev.j) <= cfg.tol * std::max(1.0, std::abs(prev_j));
  }

  const bool improved = best_j < res.j_trace.front();
  res.model = improved ? best : [&] {
    ClassPairModel back = init;
    back.t1 = cfg.t1;
    back.t2 = cfg.t2;
    return back;
  }();
  res.report.converged = improved;
  res.report.iterations = outer;
  res.report.final_objective = improved ? best_j : res.j_trace.front();
  res.report.max_constraint_violation =
      std::max(std::max(fitting_error(x1, res.model.theta1) - cfg.t1, 0.0),
               std::max(fitting_error(x2, res.model.theta2) - cfg.t2, 0.0));
  return res;
}

}  // namespace sgbn

#include "sgbn/or_sgbn.hpp"

#include <cmath>
#include <sstream>

namespace sgbn {

void OrConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (lambda_dag_schedule.empty()) throw std::invalid_argument("empty lambda_dag schedule");
  double prev = 0.0;
  for (double v : lambda_dag_schedule) {
    if (!(v > prev)) throw std::invalid_argument("lambda_dag schedule must be strictly increasing and positive");
    prev = v;
  }
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
}

namespace {

// Per-column regression workspace: design [X without column j, 1] and the
// mapping from local coefficients back to theta rows.
struct ColumnProblem {
  Matrix design;            // n x m
  std::vector<int> parent;  // local k -> theta row (last entry is the bias row)
};

std::vector<ColumnProblem> column_problems(const Dataset& x) {
  const int m = static_cast<int>(x.cols());
  const Eigen::Index n = x.rows();
  std::vector<ColumnProblem> cols(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    auto& cp = cols[static_cast<std::size_t>(j)];
    cp.design.resize(n, m);
    cp.parent.reserve(static_cast<std::size_t>(m));
    int local = 0;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      cp.design.col(local) = x.values.col(i);
      cp.parent.push_back(i);
      ++local;
    }
    cp.design.col(local).setOnes();
    cp.parent.push_back(m);  // bias row
  }
  return cols;
}

Vector gather_column(const SgbnParams& theta, const ColumnProblem& cp, int j) {
  Vector v(static_cast<Eigen::Index>(cp.parent.size()));
  for (std::size_t k = 0; k < cp.parent.size(); ++k) v(static_cast<Eigen::Index>(k)) = theta.theta(cp.parent[k], j);
  return v;
}

void scatter_column(SgbnParams& theta, const ColumnProblem& cp, int j, const Vector& v) {
  for (std::size_t k = 0; k < cp.parent.size(); ++k) theta.theta(cp.parent[k], j) = v(static_cast<Eigen::Index>(k));
}

// Objective of the penalized program at a fixed acyclicity weight. The bias
// row carries no penalty.
double penalized_objective(const Dataset& x, const SgbnParams& theta,
                           const OrderingCertificate& cert, double lambda1, double lambda_dag) {
  double obj = fitting_error(x, theta);
  for (int j = 0; j < theta.m; ++j)
    for (int i = 0; i < theta.m; ++i) {
      if (i == j) continue;
      const double t = std::abs(theta.theta(i, j));
      if (t != 0.0) obj += (lambda1 + lambda_dag * cert.upsilon(i, j)) * t;
    }
  return obj;
}

void theta_update(const Dataset& x, const std::vector<ColumnProblem>& cols,
                  const OrderingCertificate& cert, double lambda1, double lambda_dag,
                  SgbnParams& theta) {
  const int m = theta.m;
  for (int j = 0; j < m; ++j) {
    const auto& cp = cols[static_cast<std::size_t>(j)];
    Vector w(static_cast<Eigen::Index>(cp.parent.size()));
    for (std::size_t k = 0; k < cp.parent.size(); ++k) {
      const int i = cp.parent[k];
      w(static_cast<Eigen::Index>(k)) =
          i < m ? lambda1 + lambda_dag * cert.upsilon(i, j) : 0.0;
    }
    const Vector warm = gather_column(theta, cp, j);
    const Vector sol = weighted_lasso(cp.design, x.values.col(j), w, warm);
    scatter_column(theta, cp, j, sol);
  }
}

}  // namespace

SgbnParams init_theta(const Dataset& x, double lambda1) {
  x.validate();
  if (!x.standardized) throw std::invalid_argument("init_theta expects standardized data");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be positive");

  const int m = static_cast<int>(x.cols());
  SgbnParams theta = SgbnParams::zeros(m);
  const auto cols = column_problems(x);
  for (int j = 0; j < m; ++j) {
    const auto& cp = cols[static_cast<std::size_t>(j)];
    Vector w = Vector::Constant(static_cast<Eigen::Index>(cp.parent.size()), lambda1);
    w(w.size() - 1) = 0.0;  // bias unpenalized
    const Vector sol = weighted_lasso(cp.design, x.values.col(j),
                                      w, Vector::Zero(static_cast<Eigen::Index>(cp.parent.size())));
    scatter_column(theta, cp, j, sol);
  }
  return theta;
}

OrFitResult fit_or_sgbn(const Dataset& x, const OrConfig& config) {
  config.validate();
  x.validate();
  if (!x.standardized) throw std::invalid_argument("fit expects standardized data");

  const int m = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  const double lambda1 = config.resolved_lambda1(x.rows());

  std::vector<double> schedule = config.lambda_dag_schedule;
  const double bound = lambda_dag_bound(m, n, lambda1, config.delta);
  if (config.scale_schedule_to_bound && schedule.back() <= bound) {
    const double scale = 1.01 * bound / schedule.back();
    for (double& v : schedule) v *= scale;
  }
  const double lambda_final = schedule.back();

  OrFitResult res;
  res.schedule_used = schedule;
  res.theta = init_theta(x, lambda1);
  OrderingSolution ord = solve_ordering(res.theta, config.delta);

  const auto cols = column_problems(x);

  double prev_obj = std::numeric_limits<double>::infinity();
  bool objective_converged = false;
  int outer = 0;
  for (; outer < config.max_outer_iters; ++outer) {
    for (double lambda_dag : schedule)
      theta_update(x, cols, ord.cert, lambda1, lambda_dag, res.theta);
    ord = solve_ordering(res.theta, config.delta);

    const double obj = penalized_objective(x, res.theta, ord.cert, lambda1, lambda_final);
    res.objective_trace.push_back(obj);

    const bool dag = is_dag(structure_of(res.theta, 0.0));
    if (std::isfinite(prev_obj) &&
        std::abs(prev_obj - obj) <= config.tol * std::max(1.0, std::abs(prev_obj))) {
      objective_converged = true;
      if (dag) {
        ++outer;
        break;
      }
    }
    prev_obj = obj;
  }

  if (!is_dag(structure_of(res.theta, 0.0))) {
    std::ostringstream msg;
    msg << "fit did not reach a DAG; raise the lambda_dag schedule above " << bound
        << " (largest value used: " << lambda_final << ")";
    SolveReport rep{false, outer, res.objective_trace.empty() ? 0.0 : res.objective_trace.back(),
                    ord.objective};
    throw SolverError(msg.str(), rep);
  }

  res.cert = ord.cert;
  res.report.converged = objective_converged;
  res.report.iterations = outer;
  res.report.final_objective = res.objective_trace.back();
  res.report.max_constraint_violation = ord.objective;
  return res;
}

}  // namespace sgbn

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

#include "sgbn/solvers.hpp"
#include "test_util.hpp"

using namespace sgbn;
using sgbn_test::Rng;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// weighted lasso
// ---------------------------------------------------------------------------

TEST_CASE("lasso: weights above the kill threshold zero every coefficient") {
  Rng rng(31);
  Matrix a(20, 4);
  Vector y(20);
  for (int i = 0; i < 20; ++i) {
    y(i) = rng.normal();
    for (int j = 0; j < 4; ++j) a(i, j) = rng.normal();
  }
  Vector w(4);
  for (int j = 0; j < 4; ++j) w(j) = 2.0 * std::abs(a.col(j).dot(y)) + 1.0;
  const Vector theta = weighted_lasso(a, y, w, Vector::Zero(4));
  CHECK(theta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lasso with zero weights reduces to least squares") {
  Rng rng(32);
  Matrix a(30, 3);
  Vector y(30);
  for (int i = 0; i < 30; ++i) {
    y(i) = rng.normal();
    for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
  }
  const Vector theta = weighted_lasso(a, y, Vector::Zero(3), Vector::Zero(3));
  const Vector ols = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  CHECK((theta - ols).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lasso single unit-norm column matches the soft-threshold closed form and a grid scan") {
  Rng rng(33);
  Vector a(25);
  for (int i = 0; i < 25; ++i) a(i) = rng.normal();
  a.normalize();
  Vector y(25);
  for (int i = 0; i < 25; ++i) y(i) = rng.normal();
  const double w = 0.8;

  Matrix design(25, 1);
  design.col(0) = a;
  Vector wv(1);
  wv << w;
  const double got = weighted_lasso(design, y, wv, Vector::Zero(1))(0);

  const double rho = a.dot(y);
  const double closed = rho > w / 2 ? rho - w / 2 : (rho < -w / 2 ? rho + w / 2 : 0.0);
  CHECK(got == doctest::Approx(closed).epsilon(1e-9));

  // grid-search oracle over the scalar objective
  double best_t = 0.0, best_obj = kInf;
  for (double t = -8.0; t <= 8.0; t += 1e-4) {
    const double obj = (y - a * t).squaredNorm() + w * std::abs(t);
    if (obj < best_obj) {
      best_obj = obj;
      best_t = t;
    }
  }
  CHECK(got == doctest::Approx(best_t).epsilon(1e-3));
}

TEST_CASE("lasso satisfies the subdifferential optimality conditions") {
  Rng rng(34);
  Matrix a(40, 6);
  Vector y(40);
  for (int i = 0; i < 40; ++i) {
    y(i) = rng.normal();
    for (int j = 0; j < 6; ++j) a(i, j) = rng.normal();
  }
  Vector w(6);
  for (int j = 0; j < 6; ++j) w(j) = rng.uniform(0.5, 8.0);
  const Vector theta = weighted_lasso(a, y, w, Vector::Zero(6));
  const Vector r = y - a * theta;
  for (int j = 0; j < 6; ++j) {
    const double grad = 2.0 * a.col(j).dot(r);
    if (theta(j) == 0.0) {
      CHECK(std::abs(grad) <= w(j) + 1e-6);
    } else {
      CHECK(grad == doctest::Approx(w(j) * (theta(j) > 0 ? 1.0 : -1.0)).epsilon(1e-6));
    }
  }
}

TEST_CASE("lasso objective is non-increasing across sweeps") {
  Rng rng(35);
  Matrix a(50, 8);
  Vector y(50);
  for (int i = 0; i < 50; ++i) {
    y(i) = rng.normal();
    for (int j = 0; j < 8; ++j) a(i, j) = rng.normal();
  }
  Vector w = Vector::Constant(8, 2.0);
  std::vector<double> trace;
  LassoOptions opts;
  opts.sweep_objectives = &trace;
  weighted_lasso(a, y, w, Vector::Zero(8), opts);
  REQUIRE(trace.size() >= 2);
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-10);
}

// ---------------------------------------------------------------------------
// SVM dual
// ---------------------------------------------------------------------------

TEST_CASE("svm dual: two points with the identity kernel") {
  Matrix k = Matrix::Identity(2, 2);
  const QpDualSolution sol = solve_svm_dual(k, {1, -1});
  CHECK(sol.alpha(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.alpha(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("svm dual: general two-point closed form 2/||phi1-phi2||^2") {
  Rng rng(36);
  for (int rep = 0; rep < 5; ++rep) {
    Vector p1(3), p2(3);
    for (int i = 0; i < 3; ++i) {
      p1(i) = rng.normal();
      p2(i) = rng.normal();
    }
    Matrix k(2, 2);
    k << p1.dot(p1), p1.dot(p2), p2.dot(p1), p2.dot(p2);
    k += 1e-6 * Matrix::Identity(2, 2);  // strictly separable
    const QpDualSolution sol = solve_svm_dual(k, {1, -1});
    const double expect = 2.0 / (k(0, 0) + k(1, 1) - 2.0 * k(0, 1));
    CHECK(sol.alpha(0) == doctest::Approx(expect).epsilon(1e-5));
    CHECK(sol.alpha(1) == doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("svm dual: one-class input pins alpha to zero") {
  Matrix k = Matrix::Identity(3, 3);
  const QpDualSolution sol = solve_svm_dual(k, {1, 1, 1});
  CHECK(sol.alpha.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.objective == 0.0);
  CHECK(sol.converged);
  CHECK_FALSE(sol.note.empty());
}

namespace {

// oracle: enumerate support sets, solve the KKT equalities, keep the best
// feasible candidate
double brute_force_dual(const Matrix& k, const std::vector<int>& y) {
  const int n = static_cast<int>(y.size());
  double best = -kInf;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> sv;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) sv.push_back(i);
    const int s = static_cast<int>(sv.size());
    Matrix sys = Matrix::Zero(s + 1, s + 1);
    Vector rhs = Vector::Zero(s + 1);
    for (int r = 0; r < s; ++r) {
      for (int c = 0; c < s; ++c) sys(r, c) = y[sv[r]] * y[sv[c]] * k(sv[r], sv[c]);
      sys(r, s) = y[sv[r]];
      rhs(r) = 1.0;
    }
    for (int c = 0; c < s; ++c) sys(s, c) = y[sv[c]];
    Eigen::FullPivLU<Matrix> lu(sys);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(rhs);
    bool ok = true;
    for (int r = 0; r < s; ++r) ok = ok && sol(r) >= -1e-9;
    if (!ok) continue;
    const double b = sol(s);
    Vector alpha = Vector::Zero(n);
    for (int r = 0; r < s; ++r) alpha(sv[r]) = sol(r);
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j = 0; j < n; ++j) f += alpha(j) * y[j] * k(i, j);
      if (y[i] * (f + b) < 1.0 - 1e-7) ok = false;
    }
    if (!ok) continue;
    double quad = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) quad += y[i] * y[j] * alpha(i) * alpha(j) * k(i, j);
    best = std::max(best, alpha.sum() - 0.5 * quad);
  }
  return best;
}

}  // namespace

TEST_CASE("svm dual matches an active-set enumeration oracle on 6 points") {
  Rng rng(37);
  for (int rep = 0; rep < 8; ++rep) {
    Matrix phi(6, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) phi(i, j) = rng.normal();
    Matrix k = phi * phi.transpose();
    k += 0.25 * Matrix::Identity(6, 6);  // squared-slack augmentation keeps it solvable
    std::vector<int> y;
    for (int i = 0; i < 6; ++i) y.push_back(i % 2 == 0 ? 1 : -1);
    const QpDualSolution sol = solve_svm_dual(k, y);
    const double oracle = brute_force_dual(k, y);
    REQUIRE(std::isfinite(oracle));
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("svm dual objective equals the primal value on separable data") {
  Matrix phi(4, 1);
  phi << 2.0, 3.0, -2.0, -3.0;
  Matrix k = phi * phi.transpose();
  const std::vector<int> y{1, 1, -1, -1};
  const QpDualSolution sol = solve_svm_dual(k, y);
  double w = 0.0;
  for (int i = 0; i < 4; ++i) w += sol.alpha(i) * y[i] * phi(i, 0);
  CHECK(sol.objective == doctest::Approx(0.5 * w * w).epsilon(1e-5));
  for (int i = 0; i < 4; ++i) CHECK(y[i] * (w * phi(i, 0) + sol.bias) >= 1.0 - 1e-5);
}

TEST_CASE("svm dual is deterministic") {
  Rng rng(38);
  Matrix phi(10, 2);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 2; ++j) phi(i, j) = rng.normal();
  Matrix k = phi * phi.transpose() + 0.5 * Matrix::Identity(10, 10);
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) y.push_back(i < 5 ? 1 : -1);
  const QpDualSolution a = solve_svm_dual(k, y);
  const QpDualSolution b = solve_svm_dual(k, y);
  CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.bias == b.bias);
  CHECK(a.objective == b.objective);
}

// ---------------------------------------------------------------------------
// LP
// ---------------------------------------------------------------------------

TEST_CASE("lp: min x subject to x >= 3") {
  LinearProgram lp;
  lp.c = Vector::Ones(1);
  lp.a = Matrix::Ones(1, 1);
  lp.b = Vector::Constant(1, 3.0);
  lp.lower = Vector::Zero(1);
  lp.upper = Vector::Constant(1, kInf);
  const LpSolution sol = solve_lp(lp);
  CHECK(sol.x(0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("lp: min -x over a box lands on the upper bound") {
  LinearProgram lp;
  lp.c = Vector::Constant(1, -1.0);
  lp.a = Matrix::Zero(0, 1);
  lp.b = Vector::Zero(0);
  lp.lower = Vector::Zero(1);
  lp.upper = Vector::Constant(1, 2.5);
  const LpSolution sol = solve_lp(lp);
  CHECK(sol.x(0) == doctest::Approx(2.5).epsilon(1e-9));
}

namespace {

// vertex-enumeration oracle: intersect every size-p subset of the constraint
// hyperplanes (rows and bounds), keep feasible intersection points
double lp_vertex_oracle(const LinearProgram& lp) {
  const int p = static_cast<int>(lp.c.size());
  struct Plane {
    Vector a;
    double b;
  };
  std::vector<Plane> planes;
  for (Eigen::Index r = 0; r < lp.a.rows(); ++r)
    planes.push_back({lp.a.row(r).transpose(), lp.b(r)});
  for (int j = 0; j < p; ++j) {
    Vector e = Vector::Zero(p);
    e(j) = 1.0;
    planes.push_back({e, lp.lower(j)});
    if (std::isfinite(lp.upper(j))) planes.push_back({e, lp.upper(j)});
  }
  const int np = static_cast<int>(planes.size());
  double best = kInf;
  std::vector<int> idx(static_cast<std::size_t>(p));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == p) {
      Matrix sys(p, p);
      Vector rhs(p);
      for (int r = 0; r < p; ++r) {
        sys.row(r) = planes[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].a.transpose();
        rhs(r) = planes[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].b;
      }
      Eigen::FullPivLU<Matrix> lu(sys);
      if (!lu.isInvertible()) return;
      const Vector x = lu.solve(rhs);
      for (Eigen::Index r = 0; r < lp.a.rows(); ++r)
        if (lp.a.row(r).dot(x) < lp.b(r) - 1e-8) return;
      for (int j = 0; j < p; ++j)
        if (x(j) < lp.lower(j) - 1e-8 || x(j) > lp.upper(j) + 1e-8) return;
      best = std::min(best, lp.c.dot(x));
      return;
    }
    for (int i = start; i < np; ++i) {
      idx[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("lp matches the vertex-enumeration oracle on random small programs") {
  Rng rng(39);
  int solved = 0;
  for (int rep = 0; rep < 25; ++rep) {
    const int p = rng.uniform_int(1, 3);
    LinearProgram lp;
    lp.c.resize(p);
    for (int j = 0; j < p; ++j) lp.c(j) = rng.uniform(-1.0, 1.0);
    const int rows = rng.uniform_int(0, 4);
    lp.a.resize(rows, p);
    lp.b.resize(rows);
    for (int r = 0; r < rows; ++r) {
      for (int j = 0; j < p; ++j) lp.a(r, j) = rng.uniform(-1.0, 1.0);
      lp.b(r) = rng.uniform(-1.0, 0.5);
    }
    lp.lower = Vector::Zero(p);
    lp.upper = Vector::Constant(p, rng.uniform(1.0, 4.0));  // finite box keeps the oracle total
    double oracle;
    LpSolution sol;
    try {
      sol = solve_lp(lp);
      oracle = lp_vertex_oracle(lp);
    } catch (const SolverError&) {
      continue;  // infeasible draws are skipped
    }
    ++solved;
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-8));
    for (Eigen::Index r = 0; r < lp.a.rows(); ++r)
      CHECK(lp.a.row(r).dot(sol.x) >= lp.b(r) - 1e-8);
  }
  CHECK(solved >= 15);
}

// ---------------------------------------------------------------------------
// penalized minimizer
// ---------------------------------------------------------------------------

TEST_CASE("penalized minimizer solves an unconstrained convex quadratic exactly") {
  Matrix a(2, 2);
  a << 4.0, 1.0, 1.0, 3.0;
  Vector target(2);
  target << 1.5, -2.0;
  PenalizedProblem prob;
  prob.objective = [&](const Vector& x, Vector* grad) {
    const Vector d = x - target;
    if (grad) *grad = 2.0 * a * d;
    return d.dot(a * d);
  };
  const auto res = minimize_penalized(prob, Vector::Zero(2));
  CHECK((res.x - target).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(res.report.max_constraint_violation == 0.0);
}

TEST_CASE("penalized minimizer with one equality matches the KKT closed form") {
  // min ||x - a||^2 s.t. c'x = d ; optimum x = a + c (d - c'a)/||c||^2
  Vector a(3);
  a << 1.0, 2.0, -1.0;
  Vector c(3);
  c << 1.0, 1.0, 2.0;
  const double d = 0.5;
  PenalizedProblem prob;
  prob.objective = [&](const Vector& x, Vector* grad) {
    if (grad) *grad = 2.0 * (x - a);
    return (x - a).squaredNorm();
  };
  prob.equalities.push_back([&](const Vector& x, Vector* grad) {
    if (grad) *grad = c;
    return c.dot(x) - d;
  });
  const auto res = minimize_penalized(prob, a);
  const Vector expect = a + c * (d - c.dot(a)) / c.squaredNorm();
  CHECK((res.x - expect).cwiseAbs().maxCoeff() < 2e-3);
  CHECK(std::abs(c.dot(res.x) - d) <= 1e-6);
}

TEST_CASE("penalized minimizer returns the start when it is already optimal") {
  Vector target(2);
  target << 0.25, -0.75;
  PenalizedProblem prob;
  prob.objective = [&](const Vector& x, Vector* grad) {
    if (grad) *grad = 2.0 * (x - target);
    return (x - target).squaredNorm();
  };
  const auto res = minimize_penalized(prob, target);
  CHECK(res.x == target);
}

TEST_CASE("penalized minimizer never returns a worse feasible point than its start") {
  Rng rng(40);
  for (int rep = 0; rep < 5; ++rep) {
    Vector shift(3);
    for (int i = 0; i < 3; ++i) shift(i) = rng.normal();
    PenalizedProblem prob;
    prob.objective = [shift](const Vector& x, Vector* grad) {
      // nonconvex territory: quartic bowl with a tilt
      double val = 0.0;
      if (grad) grad->setZero(3);
      for (int i = 0; i < 3; ++i) {
        const double z = x(i) - shift(i);
        val += 0.25 * z * z * z * z + 0.3 * z;
        if (grad) (*grad)(i) = z * z * z + 0.3;
      }
      return val;
    };
    prob.inequalities.push_back([](const Vector& x, Vector* grad) {
      if (grad) {
        grad->setZero(3);
        (*grad)(0) = 1.0;
      }
      return x(0) - 2.0;  // x0 <= 2
    });
    Vector x0(3);
    for (int i = 0; i < 3; ++i) x0(i) = rng.uniform(-1.0, 1.0);
    x0(0) = std::min(x0(0), 1.5);
    const double f0 = prob.objective(x0, nullptr);
    const auto res = minimize_penalized(prob, x0);
    CHECK(prob.objective(res.x, nullptr) <= f0 + 1e-12);
    CHECK(res.report.max_constraint_violation <= 1e-6);
  }
}

TEST_CASE("lasso non-convergence raises a solver error carrying a report") {
  Rng rng(41);
  Matrix a(10, 2);
  Vector y(10);
  for (int i = 0; i < 10; ++i) {
    y(i) = rng.normal();
    for (int j = 0; j < 2; ++j) a(i, j) = rng.normal();
  }
  LassoOptions opts;
  opts.max_sweeps = 0;  // force exhaustion
  try {
    weighted_lasso(a, y, Vector::Zero(2), Vector::Zero(2), opts);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK_FALSE(e.report.converged);
  }
}

// Copyright 2026 Priokin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dual active-set solver after Goldfarb and Idnani (1983). The method
// starts from the unconstrained minimizer, which is dual feasible, and
// adds violated constraints one at a time while keeping the iterate
// optimal for the current active set. The factorization bookkeeping
// (J = L^-T Q, upper triangular R) follows the well-known QuadProg++
// formulation.

#include "priokin/qp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "priokin/errors.hpp"

namespace priokin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative threshold deciding that a constraint normal is linearly
// dependent on the active set. Relative to the transformed normal so the
// test is insensitive to the scaling of H.
constexpr double kDependenceTol = 1e-10;

// Slack threshold for treating an inequality as satisfied, scaled by the
// constraint right-hand side.
constexpr double kFeasibilityTol = 1e-10;

// Coarser violation threshold applied only when no primal or dual step
// exists for the incoming constraint. Near a degenerate vertex rounding
// can leave a constraint microscopically outside kFeasibilityTol while
// the active set already spans the space and blocks every exchange;
// such a constraint is accepted as satisfied rather than reported as an
// infeasibility.
constexpr double kBlockedSlackTol = 1e-8;

// Consistency threshold for an equality constraint that is linearly
// dependent on constraints already active.
constexpr double kEqConsistencyTol = 1e-8;

// One linear constraint normal' x >= rhs (or == rhs for equalities).
struct Constraint {
  Eigen::VectorXd normal;
  double rhs = 0.0;
};

struct ActiveEntry {
  bool equality = false;
  int index = -1;  // position in the inequality list; -1 for equalities
};

// Applies the Givens-like reflection that zeroes the trailing entries of
// d into d(target), accumulating the transform into the columns of J.
// Returns false when the new diagonal entry of R would vanish, i.e. the
// constraint is linearly dependent on the active set.
bool add_constraint(Eigen::MatrixXd& J, Eigen::MatrixXd& R,
                    Eigen::VectorXd& d, int& iq, double& R_norm) {
  const int n = static_cast<int>(J.rows());
  for (int k = n - 1; k >= iq + 1; --k) {
    double cc = d(k - 1);
    double ss = d(k);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) {
      continue;
    }
    d(k) = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      d(k - 1) = -h;
    } else {
      d(k - 1) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int i = 0; i < n; ++i) {
      const double t1 = J(i, k - 1);
      const double t2 = J(i, k);
      J(i, k - 1) = t1 * cc + t2 * ss;
      J(i, k) = xny * (t1 + J(i, k - 1)) - t2;
    }
  }
  R.col(iq).head(iq) = d.head(iq);
  R(iq, iq) = d(iq);
  ++iq;
  if (std::abs(d(iq - 1)) <= std::numeric_limits<double>::epsilon() * R_norm) {
    --iq;
    return false;
  }
  R_norm = std::max(R_norm, std::abs(d(iq - 1)));
  return true;
}

// Removes the active constraint in slot `slot` and restores the
// triangularity of R.
void delete_constraint(Eigen::MatrixXd& J, Eigen::MatrixXd& R,
                       std::vector<ActiveEntry>& active,
                       std::vector<double>& u, int& iq, int slot) {
  const int n = static_cast<int>(J.rows());
  for (int i = slot; i < iq - 1; ++i) {
    active[static_cast<size_t>(i)] = active[static_cast<size_t>(i + 1)];
    u[static_cast<size_t>(i)] = u[static_cast<size_t>(i + 1)];
    R.col(i) = R.col(i + 1);
  }
  active.pop_back();
  u.pop_back();
  --iq;
  R.col(iq).setZero();
  for (int j = slot; j < iq; ++j) {
    double cc = R(j, j);
    double ss = R(j + 1, j);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) {
      continue;
    }
    cc /= h;
    ss /= h;
    R(j + 1, j) = 0.0;
    if (cc < 0.0) {
      R(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      R(j, j) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = j + 1; k < iq; ++k) {
      const double t1 = R(j, k);
      const double t2 = R(j + 1, k);
      R(j, k) = t1 * cc + t2 * ss;
      R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
    }
    for (int k = 0; k < n; ++k) {
      const double t1 = J(k, j);
      const double t2 = J(k, j + 1);
      J(k, j) = t1 * cc + t2 * ss;
      J(k, j + 1) = xny * (t1 + J(k, j)) - t2;
    }
  }
}

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgumentError(std::string(what) +
                               " contains non-finite entries");
  }
}

}  // namespace

QpProblem QpProblem::unconstrained(const Eigen::MatrixXd& H,
                                   const Eigen::VectorXd& f) {
  QpProblem p;
  p.H = H;
  p.f = f;
  const Eigen::Index n = H.rows();
  p.A_eq.resize(0, n);
  p.b_eq.resize(0);
  p.A_in.resize(0, n);
  p.b_in.resize(0);
  p.lb = Eigen::VectorXd::Constant(n, -kInf);
  p.ub = Eigen::VectorXd::Constant(n, kInf);
  return p;
}

void QpProblem::validate() const {
  const Eigen::Index n = H.rows();
  if (H.cols() != n) {
    throw DimensionError("H must be square");
  }
  if (n == 0) {
    throw DimensionError("H must be non-empty");
  }
  if (f.size() != n) {
    throw DimensionError("f has size " + std::to_string(f.size()) +
                         ", expected " + std::to_string(n));
  }
  check_finite(H, "H");
  check_finite(f, "f");
  const double h_scale = H.cwiseAbs().maxCoeff();
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + h_scale)) {
    throw InvalidArgumentError("H is not symmetric");
  }
  auto check_system = [n](const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const char* what) {
    if (A.rows() != b.size()) {
      throw DimensionError(std::string(what) +
                           " rows do not match right-hand side");
    }
    if (A.rows() > 0 && A.cols() != n) {
      throw DimensionError(std::string(what) + " has " +
                           std::to_string(A.cols()) + " columns, expected " +
                           std::to_string(n));
    }
    check_finite(A, what);
    if (!b.allFinite()) {
      throw InvalidArgumentError(std::string(what) +
                                 " right-hand side is non-finite");
    }
  };
  check_system(A_eq, b_eq, "A_eq");
  check_system(A_in, b_in, "A_in");
  if (lb.size() != n || ub.size() != n) {
    throw DimensionError("bounds must have one entry per variable");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lb(j)) || std::isnan(ub(j))) {
      throw InvalidArgumentError("bounds contain NaN");
    }
    if (lb(j) > ub(j)) {
      throw InvalidArgumentError("lb exceeds ub for variable " +
                                 std::to_string(j));
    }
  }
}

QpSolution solve_qp(const QpProblem& problem, const QpSettings& settings) {
  problem.validate();
  const int n = problem.num_vars();

  // Combined inequality list: A_in rows, then finite lower bounds, then
  // finite upper bounds. The order is part of the deterministic contract
  // because it breaks ties in the violated-constraint scan.
  std::vector<Constraint> ineqs;
  ineqs.reserve(static_cast<size_t>(problem.A_in.rows() + 2 * n));
  for (Eigen::Index i = 0; i < problem.A_in.rows(); ++i) {
    ineqs.push_back({problem.A_in.row(i).transpose(), problem.b_in(i)});
  }
  for (int j = 0; j < n; ++j) {
    if (problem.lb(j) > -kInf) {
      Eigen::VectorXd normal = Eigen::VectorXd::Zero(n);
      normal(j) = 1.0;
      ineqs.push_back({std::move(normal), problem.lb(j)});
    }
  }
  for (int j = 0; j < n; ++j) {
    if (problem.ub(j) < kInf) {
      Eigen::VectorXd normal = Eigen::VectorXd::Zero(n);
      normal(j) = -1.0;
      ineqs.push_back({std::move(normal), -problem.ub(j)});
    }
  }
  const int m = static_cast<int>(ineqs.size());

  Eigen::LLT<Eigen::MatrixXd> llt(problem.H);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXd H_reg = problem.H;
    H_reg.diagonal().array() += settings.regularization;
    llt.compute(H_reg);
    if (llt.info() != Eigen::Success) {
      throw InvalidArgumentError(
          "H is not positive semidefinite (Cholesky failed even with "
          "regularization)");
    }
  }

  QpSolution solution;
  solution.x = llt.solve(-problem.f);
  Eigen::MatrixXd J =
      llt.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  double R_norm = 1.0;
  int iq = 0;

  std::vector<ActiveEntry> active;
  std::vector<double> u;
  active.reserve(static_cast<size_t>(n) + 1);
  u.reserve(static_cast<size_t>(n) + 1);

  Eigen::VectorXd d(n), z(n), r(n), np(n);
  auto compute_steps = [&](const Eigen::VectorXd& normal) {
    d.noalias() = J.transpose() * normal;
    if (iq < n) {
      z.noalias() = J.rightCols(n - iq) * d.tail(n - iq);
    } else {
      z.setZero();
    }
    if (iq > 0) {
      r.head(iq) = R.topLeftCorner(iq, iq)
                       .triangularView<Eigen::Upper>()
                       .solve(d.head(iq));
    }
  };
  auto dependent = [&]() {
    const double tail = iq < n ? d.tail(n - iq).norm() : 0.0;
    return tail <= kDependenceTol * d.norm();
  };

  auto finish = [&](QpStatus status) {
    solution.status = status;
    solution.objective = 0.5 * solution.x.dot(problem.H * solution.x) +
                         problem.f.dot(solution.x);
    return solution;
  };

  // Equality constraints first; they are never dropped, so the ratio
  // test below skips them and their multipliers may take either sign.
  for (Eigen::Index e = 0; e < problem.A_eq.rows(); ++e) {
    np = problem.A_eq.row(e).transpose();
    const double rhs = problem.b_eq(e);
    compute_steps(np);
    const double resid = np.dot(solution.x) - rhs;
    if (dependent()) {
      // The normal lies in the span of the active set, so the residual
      // is determined by constraints already enforced: either this
      // equality is redundant or the system is inconsistent.
      if (std::abs(resid) > kEqConsistencyTol * (1.0 + std::abs(rhs))) {
        return finish(QpStatus::kPrimalInfeasible);
      }
      continue;
    }
    const double denom = d.tail(n - iq).squaredNorm();
    const double t2 = -resid / denom;
    solution.x += t2 * z;
    for (int k = 0; k < iq; ++k) {
      u[static_cast<size_t>(k)] -= t2 * r(k);
    }
    ++solution.iterations;
    if (!add_constraint(J, R, d, iq, R_norm)) {
      const double resid2 = np.dot(solution.x) - rhs;
      if (std::abs(resid2) > kEqConsistencyTol * (1.0 + std::abs(rhs))) {
        return finish(QpStatus::kPrimalInfeasible);
      }
      continue;
    }
    active.push_back({true, -1});
    u.push_back(t2);
  }

  std::vector<char> in_active(static_cast<size_t>(m), 0);
  // Constraints accepted through the blocked-slack tolerance at the
  // current iterate; cleared whenever the iterate moves.
  std::vector<char> accepted(static_cast<size_t>(m), 0);
  while (true) {
    // Most violated inactive inequality; ties resolve to the lowest
    // index, which keeps the solve path deterministic.
    int ip = -1;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      if (in_active[static_cast<size_t>(i)] ||
          accepted[static_cast<size_t>(i)]) {
        continue;
      }
      const Constraint& c = ineqs[static_cast<size_t>(i)];
      const double slack = c.normal.dot(solution.x) - c.rhs;
      const double tol = kFeasibilityTol * (1.0 + std::abs(c.rhs));
      if (slack < -tol && slack < worst) {
        worst = slack;
        ip = i;
      }
    }
    if (ip < 0) {
      return finish(QpStatus::kOptimal);
    }

    np = ineqs[static_cast<size_t>(ip)].normal;
    const double rhs = ineqs[static_cast<size_t>(ip)].rhs;
    double slack = worst;
    double u_incoming = 0.0;

    while (true) {
      if (solution.iterations >= settings.max_iterations) {
        return finish(QpStatus::kMaxIterations);
      }
      ++solution.iterations;
      compute_steps(np);

      // Dual step length: largest multiplier decrease before an active
      // inequality would leave the dual feasible region.
      double t1 = kInf;
      int drop_slot = -1;
      for (int k = 0; k < iq; ++k) {
        if (active[static_cast<size_t>(k)].equality) {
          continue;
        }
        if (r(k) > 0.0) {
          const double tau = u[static_cast<size_t>(k)] / r(k);
          if (tau < t1) {
            t1 = tau;
            drop_slot = k;
          }
        }
      }
      // Primal step length to satisfy the incoming constraint.
      double t2 = kInf;
      if (!dependent()) {
        t2 = -slack / d.tail(n - iq).squaredNorm();
      }
      const double t = std::min(t1, t2);
      if (t >= kInf) {
        if (-slack <= kBlockedSlackTol * (1.0 + std::abs(rhs))) {
          accepted[static_cast<size_t>(ip)] = 1;
          break;
        }
        return finish(QpStatus::kPrimalInfeasible);
      }

      if (t2 >= kInf) {
        // Pure dual step: adjust multipliers and drop the blocking
        // constraint, the iterate itself cannot move.
        for (int k = 0; k < iq; ++k) {
          u[static_cast<size_t>(k)] -= t * r(k);
        }
        u_incoming += t;
        in_active[static_cast<size_t>(
            active[static_cast<size_t>(drop_slot)].index)] = 0;
        delete_constraint(J, R, active, u, iq, drop_slot);
        continue;
      }

      solution.x += t * z;
      if (t > 0.0) {
        std::fill(accepted.begin(), accepted.end(), 0);
      }
      for (int k = 0; k < iq; ++k) {
        u[static_cast<size_t>(k)] -= t * r(k);
      }
      u_incoming += t;
      slack = np.dot(solution.x) - rhs;

      if (t2 <= t1) {
        // Full step: the incoming constraint is now tight.
        if (add_constraint(J, R, d, iq, R_norm)) {
          active.push_back({false, ip});
          u.push_back(u_incoming);
          in_active[static_cast<size_t>(ip)] = 1;
        }
        break;
      }
      // Partial step: drop the blocking constraint and keep working on
      // the incoming one.
      in_active[static_cast<size_t>(
          active[static_cast<size_t>(drop_slot)].index)] = 0;
      delete_constraint(J, R, active, u, iq, drop_slot);
    }
  }
}

}  // namespace priokin

#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace bellfrac {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOptions {
  double tol = 1e-9;                       ///< feasibility / optimality tolerance
  std::int64_t max_iterations = 1'000'000; ///< pivot budget before SolverError
  int refactor_interval = 64;              ///< basis-inverse refresh cadence
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  Eigen::VectorXd primal;  ///< x, empty unless Optimal
  Eigen::VectorXd dual;    ///< y with A^T y <= c at the optimum
  std::int64_t iterations = 0;
  double max_residual = 0.0;  ///< max |A x - b| at the reported solution
  double duality_gap = 0.0;   ///< |c.x - b.y|
};

/// Minimizes c.x subject to A x = b, x >= 0 with a primal simplex using
/// Bland's entering rule (deterministic, cycle-free). Rows found dependent
/// during phase 1 are dropped. Throws SolverError when the iteration budget
/// is exhausted; infeasible and unbounded problems are reported via status.
LpSolution lp_solve(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_eq,
                    const Eigen::VectorXd& b_eq, const LpOptions& opts = {});

}  // namespace bellfrac

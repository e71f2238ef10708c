#include "bellfrac/linprog.hpp"

#include <vector>

#include "simplex_core.hpp"

namespace bellfrac {

LpSolution lp_solve(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_eq,
                    const Eigen::VectorXd& b_eq, const LpOptions& opts) {
  const Eigen::Index m = a_eq.rows();
  const Eigen::Index n = a_eq.cols();
  if (c.size() != n || b_eq.size() != m)
    throw ShapeError("lp_solve: inconsistent problem dimensions");
  if (!a_eq.allFinite() || !b_eq.allFinite() || !c.allFinite())
    throw ShapeError("lp_solve: entries must be finite");

  // Orient rows so the right-hand side is nonnegative, remembering flips to
  // map dual values back to the caller's row order.
  Eigen::MatrixXd a = a_eq;
  Eigen::VectorXd b = b_eq;
  std::vector<int> row_sign(m, 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
      row_sign[i] = -1;
    }
  }

  LpSolution out;

  // Phase 1 on [A | I] with artificial columns as the starting basis.
  Eigen::MatrixXd augmented(m, n + m);
  augmented << a, Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();

  detail::DenseColumns aug_cols(augmented);
  detail::RevisedSimplex<detail::DenseColumns> phase1(aug_cols, b, opts);
  phase1.set_identity_basis(n);
  if (phase1.run(phase1_cost, out.iterations) != LpStatus::Optimal)
    throw InternalError("phase 1 cannot be unbounded");
  if (phase1.objective(phase1_cost) > opts.tol) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // Swap any zero-level artificial out for an original column; rows where no
  // original column has a nonzero entry under the current basis inverse are
  // dependent and get dropped.
  std::vector<bool> keep_row(m, true);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (phase1.basis()[i] < n) continue;
    bool replaced = false;
    for (Eigen::Index j = 0; j < n && !replaced; ++j) {
      if (phase1.is_basic(j)) continue;
      phase1.load_direction(j);
      if (std::abs(phase1.direction()[i]) > opts.tol) {
        phase1.pivot(j, i);
        replaced = true;
      }
    }
    if (!replaced) keep_row[i] = false;
  }

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < m; ++i)
    if (keep_row[i]) kept.push_back(i);

  Eigen::MatrixXd a2(Eigen::Index(kept.size()), n);
  Eigen::VectorXd b2(Eigen::Index(kept.size()));
  std::vector<Eigen::Index> basis2;
  basis2.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    a2.row(Eigen::Index(k)) = a.row(kept[k]);
    b2[Eigen::Index(k)] = b[kept[k]];
    basis2.push_back(phase1.basis()[kept[k]]);
  }

  detail::DenseColumns cols2(a2);
  detail::RevisedSimplex<detail::DenseColumns> phase2(cols2, b2, opts);
  phase2.set_basis(std::move(basis2));

  const LpStatus st = phase2.run(c, out.iterations);
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  phase2.refactorize();
  out.status = LpStatus::Optimal;
  out.primal = phase2.primal();
  out.objective = c.dot(out.primal);

  const Eigen::VectorXd y2 = phase2.dual(c);
  out.dual = Eigen::VectorXd::Zero(m);
  for (std::size_t k = 0; k < kept.size(); ++k)
    out.dual[kept[k]] = row_sign[kept[k]] * y2[Eigen::Index(k)];

  out.max_residual = m ? (a_eq * out.primal - b_eq).cwiseAbs().maxCoeff() : 0.0;
  out.duality_gap = std::abs(out.objective - out.dual.dot(b_eq));
  return out;
}

}  // namespace bellfrac

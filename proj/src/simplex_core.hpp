#pragma once

// Revised primal simplex over an abstract column source. The basis inverse is
// kept dense and refreshed on a fixed schedule. Pricing is Dantzig's rule
// (most negative reduced cost, lowest index on ties); after a sustained run
// of degenerate pivots it falls back to Bland's rule until the objective
// moves again, which breaks stalls and cycles. All choices are index-ordered,
// so runs are deterministic for identical input.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellfrac/errors.hpp"
#include "bellfrac/linprog.hpp"

namespace bellfrac::detail {

template <class Source>
concept ColumnSource = requires(const Source& s, Eigen::Index j,
                                const Eigen::VectorXd& y, Eigen::VectorXd& out,
                                const Eigen::VectorXd& c) {
  { s.rows() } -> std::convertible_to<Eigen::Index>;
  { s.cols() } -> std::convertible_to<Eigen::Index>;
  { s.col_into(j, out) };
  { s.col_dot(j, y) } -> std::convertible_to<double>;
  { s.reduced_costs(c, y, out) };  // out = c - A^T y over all columns
};

enum class StepStatus { Optimal, Unbounded, Budget };

template <ColumnSource Source>
class RevisedSimplex {
public:
  RevisedSimplex(const Source& a, Eigen::VectorXd b, LpOptions opts)
      : a_(a),
        b_(std::move(b)),
        opts_(opts),
        m_(a.rows()),
        n_(a.cols()),
        position_(n_, -1),
        binv_(m_, m_),
        xb_(m_),
        col_(m_),
        dir_(m_) {}

  /// Installs a starting basis (column indices, one per row) and factorizes.
  void set_basis(std::vector<Eigen::Index> basis) {
    install(std::move(basis));
    refactorize();
  }

  /// Starting basis of columns first..first+m-1 known to form the identity
  /// (slack or artificial blocks); skips the factorization.
  void set_identity_basis(Eigen::Index first) {
    std::vector<Eigen::Index> basis(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis[i] = first + i;
    install(std::move(basis));
    binv_.setIdentity();
    xb_ = b_;
    pivots_since_refactor_ = 0;
  }

  /// Minimizes c.x from the current basis. When `candidates` is non-empty,
  /// only those columns may enter (used to walk an optimal face). A
  /// non-negative `budget` caps the pivots of this call; exhausting it stops
  /// early with StepStatus::Budget and a consistent (feasible) basis.
  StepStatus run(const Eigen::VectorXd& c, std::int64_t& iterations,
                 std::span<const Eigen::Index> candidates = {},
                 std::int64_t budget = -1) {
    const std::int64_t bland_after = 100 + 2 * m_;
    std::int64_t degenerate_streak = 0;
    std::int64_t spent = 0;

    while (true) {
      if (iterations >= opts_.max_iterations)
        throw SolverError("simplex exceeded " +
                          std::to_string(opts_.max_iterations) + " pivots");
      if (budget >= 0 && spent >= budget) return StepStatus::Budget;
      if (pivots_since_refactor_ >= opts_.refactor_interval) refactorize();

      compute_dual(c, y_);
      const bool bland = degenerate_streak >= bland_after;

      Eigen::Index entering = -1;
      double best = -opts_.tol;
      if (candidates.empty()) {
        a_.reduced_costs(c, y_, d_);
        for (Eigen::Index j = 0; j < n_; ++j) {
          if (position_[j] >= 0) continue;
          if (d_[j] < best) {
            entering = j;
            if (bland) break;
            best = d_[j];
          }
        }
      } else {
        for (const Eigen::Index j : candidates) {
          if (position_[j] >= 0) continue;
          const double dj = c[j] - a_.col_dot(j, y_);
          if (dj < best) {
            entering = j;
            if (bland) break;
            best = dj;
          }
        }
      }
      if (entering < 0) return StepStatus::Optimal;

      load_direction(entering);

      // Ratio test; ties resolved by the smallest basic variable index.
      Eigen::Index leaving = -1;
      double limit = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (dir_[i] <= opts_.tol) continue;
        const double ratio = std::max(xb_[i], 0.0) / dir_[i];
        if (leaving < 0 || ratio < limit - 1e-12 ||
            (ratio <= limit + 1e-12 && basic_[i] < basic_[leaving])) {
          limit = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) return StepStatus::Unbounded;

      const double step = std::max(xb_[leaving], 0.0) / dir_[leaving];
      degenerate_streak = step > 1e-12 ? 0 : degenerate_streak + 1;

      pivot(entering, leaving);
      ++iterations;
      ++spent;
      ++pivots_since_refactor_;
    }
  }

  /// Reduced costs of every column at the current basis.
  void reduced_costs_of(const Eigen::VectorXd& c, Eigen::VectorXd& out) {
    compute_dual(c, y_);
    a_.reduced_costs(c, y_, out);
  }

  /// dir = B^-1 a_j for the given column; kept until the next pivot.
  void load_direction(Eigen::Index j) {
    a_.col_into(j, col_);
    dir_.noalias() = binv_ * col_;
  }

  const Eigen::VectorXd& direction() const { return dir_; }

  /// Swaps `entering` into the basis at `leaving_row` using the loaded
  /// direction, updating xb and the basis inverse in place.
  void pivot(Eigen::Index entering, Eigen::Index leaving_row) {
    const double step = xb_[leaving_row] / dir_[leaving_row];
    xb_ -= step * dir_;
    xb_[leaving_row] = step;

    const double inv = 1.0 / dir_[leaving_row];
    Eigen::VectorXd scale = dir_;
    scale[leaving_row] = 0.0;
    binv_.row(leaving_row) *= inv;
    binv_.noalias() -= scale * binv_.row(leaving_row);

    position_[basic_[leaving_row]] = -1;
    basic_[leaving_row] = entering;
    position_[entering] = leaving_row;
  }

  void refactorize() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    Eigen::VectorXd col(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      a_.col_into(basic_[i], col);
      basis_matrix.col(i) = col;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    xb_ = lu.solve(b_);
    if (!binv_.allFinite() || !xb_.allFinite())
      throw InternalError("singular basis during refactorization");
    pivots_since_refactor_ = 0;
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) x[basic_[i]] = std::max(xb_[i], 0.0);
    return x;
  }

  Eigen::VectorXd dual(const Eigen::VectorXd& c) const {
    Eigen::VectorXd y;
    compute_dual(c, y);
    return y;
  }

  double objective(const Eigen::VectorXd& c) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) v += c[basic_[i]] * xb_[i];
    return v;
  }

  const std::vector<Eigen::Index>& basis() const { return basic_; }
  bool is_basic(Eigen::Index j) const { return position_[j] >= 0; }
  const Eigen::VectorXd& basic_values() const { return xb_; }
  Eigen::Index rows() const { return m_; }

private:
  void install(std::vector<Eigen::Index> basis) {
    basic_ = std::move(basis);
    if (Eigen::Index(basic_.size()) != m_)
      throw InternalError("basis size does not match row count");
    std::fill(position_.begin(), position_.end(), Eigen::Index(-1));
    for (Eigen::Index i = 0; i < m_; ++i) position_[basic_[i]] = i;
  }

  void compute_dual(const Eigen::VectorXd& c, Eigen::VectorXd& y) const {
    cb_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb_[i] = c[basic_[i]];
    y.noalias() = binv_.transpose() * cb_;
  }

  const Source& a_;
  Eigen::VectorXd b_;
  LpOptions opts_;
  Eigen::Index m_, n_;
  std::vector<Eigen::Index> basic_;
  std::vector<Eigen::Index> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd col_;
  Eigen::VectorXd dir_;
  Eigen::VectorXd y_;
  Eigen::VectorXd d_;
  mutable Eigen::VectorXd cb_;
  int pivots_since_refactor_ = 0;
};

/// Column view of a dense matrix.
class DenseColumns {
public:
  explicit DenseColumns(const Eigen::MatrixXd& a) : a_(&a) {}
  Eigen::Index rows() const { return a_->rows(); }
  Eigen::Index cols() const { return a_->cols(); }
  void col_into(Eigen::Index j, Eigen::VectorXd& out) const { out = a_->col(j); }
  double col_dot(Eigen::Index j, const Eigen::VectorXd& y) const {
    return a_->col(j).dot(y);
  }
  void reduced_costs(const Eigen::VectorXd& c, const Eigen::VectorXd& y,
                     Eigen::VectorXd& out) const {
    out = c;
    out.noalias() -= a_->transpose() * y;
  }

private:
  const Eigen::MatrixXd* a_;
};

}  // namespace bellfrac::detail

#include "bellfrac/fraction.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bellfrac/quantum.hpp"
#include "bellfrac/validation.hpp"
#include "simplex_core.hpp"

namespace bellfrac {

namespace {

// Threshold below which a component of the split is treated as absent.
constexpr double kVanish = 1e-9;

/// Columns of the fraction program: one 0/1 column per strategy pair
/// (entries at the cells the pair deterministically produces), followed by
/// an identity block for the residual cells.
class StrategyColumns {
public:
  explicit StrategyColumns(const Cardinalities& d) : d_(d) {
    nf_ = function_space_size(d.nA, d.nX);
    ng_ = function_space_size(d.nB, d.nY);
    if (nf_ > kMaxHiddenStates / ng_)
      throw CapacityError("strategy pair count " + std::to_string(nf_) + "*" +
                          std::to_string(ng_) + " exceeds " +
                          std::to_string(kMaxHiddenStates));
    pairs_ = nf_ * ng_;
    cells_ = d.cells();

    fdig_.resize(std::size_t(nf_) * d.nX);
    for (Eigen::Index f = 0; f < nf_; ++f)
      for (int x = 0; x < d.nX; ++x)
        fdig_[std::size_t(f) * d.nX + x] =
            std::uint8_t(function_value(f, d.nA, d.nX, x));
    gdig_.resize(std::size_t(ng_) * d.nY);
    for (Eigen::Index g = 0; g < ng_; ++g)
      for (int y = 0; y < d.nY; ++y)
        gdig_[std::size_t(g) * d.nY + y] =
            std::uint8_t(function_value(g, d.nB, d.nY, y));
    base_.resize(std::size_t(d.nX) * d.nY);
    for (int x = 0; x < d.nX; ++x)
      for (int y = 0; y < d.nY; ++y)
        base_[std::size_t(x) * d.nY + y] =
            (Eigen::Index(x) * d.nY + y) * d.outcome_pairs();
  }

  Eigen::Index rows() const { return cells_; }
  Eigen::Index cols() const { return pairs_ + cells_; }
  Eigen::Index pair_count() const { return pairs_; }
  Eigen::Index alice_strategies() const { return nf_; }
  Eigen::Index bob_strategies() const { return ng_; }

  Eigen::Index cell_of(Eigen::Index pair, int x, int y) const {
    const std::uint8_t* fd = &fdig_[std::size_t(pair / ng_) * d_.nX];
    const std::uint8_t* gd = &gdig_[std::size_t(pair % ng_) * d_.nY];
    return base_[std::size_t(x) * d_.nY + y] +
           Eigen::Index(fd[x]) * d_.nB + gd[y];
  }

  void col_into(Eigen::Index j, Eigen::VectorXd& out) const {
    out.setZero(cells_);
    if (j >= pairs_) {
      out[j - pairs_] = 1.0;
      return;
    }
    for (int x = 0; x < d_.nX; ++x)
      for (int y = 0; y < d_.nY; ++y) out[cell_of(j, x, y)] = 1.0;
  }

  double col_dot(Eigen::Index j, const Eigen::VectorXd& y) const {
    if (j >= pairs_) return y[j - pairs_];
    const std::uint8_t* fd = &fdig_[std::size_t(j / ng_) * d_.nX];
    const std::uint8_t* gd = &gdig_[std::size_t(j % ng_) * d_.nY];
    double s = 0.0;
    const Eigen::Index* base = base_.data();
    for (int x = 0; x < d_.nX; ++x) {
      const Eigen::Index off = Eigen::Index(fd[x]) * d_.nB;
      for (int yy = 0; yy < d_.nY; ++yy)
        s += y[base[std::size_t(x) * d_.nY + yy] + off + gd[yy]];
    }
    return s;
  }

  /// out = c - A^T y for every column. For pair columns the x-sums are
  /// shared across all of Bob's strategies, which keeps this pass at
  /// O(pairs * nY) instead of O(pairs * nX * nY).
  void reduced_costs(const Eigen::VectorXd& c, const Eigen::VectorXd& y,
                     Eigen::VectorXd& out) const {
    out.resize(pairs_ + cells_);
    out.tail(cells_) = c.tail(cells_) - y;

    // partial[yy * nB + b] = sum_x y[cell(f(x), b, x, yy)] for the current f
    Eigen::ArrayXd partial(Eigen::Index(d_.nY) * d_.nB);
    for (Eigen::Index f = 0; f < nf_; ++f) {
      const std::uint8_t* fd = &fdig_[std::size_t(f) * d_.nX];
      partial.setZero();
      for (int x = 0; x < d_.nX; ++x) {
        const Eigen::Index off = Eigen::Index(fd[x]) * d_.nB;
        for (int yy = 0; yy < d_.nY; ++yy) {
          const Eigen::Index cell0 = base_[std::size_t(x) * d_.nY + yy] + off;
          for (int b = 0; b < d_.nB; ++b)
            partial[Eigen::Index(yy) * d_.nB + b] += y[cell0 + b];
        }
      }
      double* drow = out.data() + f * ng_;
      const double* crow = c.data() + f * ng_;
      for (Eigen::Index g = 0; g < ng_; ++g) {
        const std::uint8_t* gd = &gdig_[std::size_t(g) * d_.nY];
        double s = 0.0;
        for (int yy = 0; yy < d_.nY; ++yy)
          s += partial[Eigen::Index(yy) * d_.nB + gd[yy]];
        drow[g] = crow[g] - s;
      }
    }
  }

private:
  Cardinalities d_;
  Eigen::Index nf_ = 0, ng_ = 0, pairs_ = 0, cells_ = 0;
  std::vector<std::uint8_t> fdig_, gdig_;
  std::vector<Eigen::Index> base_;
};

std::optional<double> chsh_certificate_of(const Behaviour& b) {
  const auto& d = b.dims();
  if (d.nA != 2 || d.nB != 2 || d.nX != 2 || d.nY != 2) return std::nullopt;
  double e[2][2];
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) e[x][y] = correlator(b, x, y);
  double best = -8.0;
  for (int mask = 0; mask < 16; ++mask) {
    int minus = 0;
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int sign = (mask >> k) & 1 ? -1 : 1;
      if (sign < 0) ++minus;
      s += sign * e[k >> 1][k & 1];
    }
    if (minus % 2 == 1) best = std::max(best, s);
  }
  return (best - 2.0) / 2.0;
}

}  // namespace

FractionResult causal_fraction(const Behaviour& behaviour, double tol) {
  const auto& d = behaviour.dims();

  const double dev = alice_settings_deviation(behaviour);
  if (dev > tol)
    throw IndependenceViolation(
        "behaviour's Alice marginal depends on Bob's setting (deviation " +
        std::to_string(dev) + ")");
  for (int x = 0; x < d.nX; ++x)
    for (int y = 0; y < d.nY; ++y)
      if (std::abs(behaviour.xy_sum(x, y) - 1.0) > tol)
        throw ValidationError("behaviour block (" + std::to_string(x) + "," +
                              std::to_string(y) + ") is not normalized");
  if (behaviour.data().minCoeff() < -tol)
    throw ValidationError("behaviour has negative entries");

  StrategyColumns columns(d);
  const Eigen::Index pairs = columns.pair_count();
  const Eigen::Index cells = columns.rows();

  const Eigen::VectorXd b = behaviour.data().max(0.0).matrix();

  Eigen::VectorXd weight_cost = Eigen::VectorXd::Zero(pairs + cells);
  weight_cost.head(pairs).setConstant(-1.0);

  LpOptions opts;
  detail::RevisedSimplex<StrategyColumns> simplex(columns, b, opts);
  simplex.set_identity_basis(pairs);

  FractionResult result;
  result.dims = d;

  if (simplex.run(weight_cost, result.iterations) != LpStatus::Optimal)
    throw InternalError("fraction program cannot be unbounded or infeasible");
  const double q_raw = 1.0 + simplex.objective(weight_cost);
  if (q_raw < -1e-6 || q_raw > 1.0 + 1e-6)
    throw InternalError("fraction outside [0,1]: " + std::to_string(q_raw));
  result.q = std::clamp(q_raw, 0.0, 1.0);

  // Canonical representative of the optimal face: prefer weight on
  // later strategy pairs, which keeps the weight vector lexicographically
  // small. Entering columns are confined to the primal optimum's face.
  {
    Eigen::VectorXd tiebreak = Eigen::VectorXd::Zero(pairs + cells);
    for (Eigen::Index j = 0; j < pairs; ++j)
      tiebreak[j] = double(pairs - j) / double(pairs);
    if (simplex.run(tiebreak, result.iterations, &weight_cost) !=
        LpStatus::Optimal)
      throw InternalError("tie-break pass cannot be unbounded");
  }

  simplex.refactorize();
  const Eigen::VectorXd x = simplex.primal();

  Eigen::VectorXd reconstruction = x.tail(cells);
  for (Eigen::Index j = 0; j < pairs; ++j) {
    const double w = x[j];
    if (w <= 0.0) continue;
    result.local_weights.push_back(
        {LocalStrategyPair{j / columns.bob_strategies(),
                           j % columns.bob_strategies()},
         w});
    for (int xx = 0; xx < d.nX; ++xx)
      for (int yy = 0; yy < d.nY; ++yy) reconstruction[columns.cell_of(j, xx, yy)] += w;
  }
  result.max_residual = (reconstruction - b).cwiseAbs().maxCoeff();
  if (result.max_residual > 1e-6)
    throw InternalError("fraction split reconstruction error " +
                        std::to_string(result.max_residual));

  result.residual = x.tail(cells).array();
  result.residual = (result.residual.abs() <= 1e-14).select(0.0, result.residual);
  result.chsh_certificate = chsh_certificate_of(behaviour);
  return result;
}

FrugalDecomposition frugal_decomposition(const Statistics& stats,
                                         StructureTag target, double tol) {
  const auto vr = validate(stats, std::max(tol, kTolExact));
  if (!vr.ok())
    throw ValidationError("statistics fail normalization (max residual " +
                          std::to_string(vr.max_residual) + ")");
  const auto indep = check_independences(stats);
  if (!indep.passes(tol))
    throw IndependenceViolation(
        "statistics violate the required independences (alice deviation " +
        std::to_string(indep.alice_deviation) + ", settings deviation " +
        std::to_string(indep.settings_deviation) + ")");

  FrugalDecomposition out;
  out.fraction = causal_fraction(stats.behaviour, tol);
  out.q = out.fraction.q;
  const auto& d = stats.dims();

  if (out.q < 1.0 - kVanish) {
    const auto& weights = out.fraction.local_weights;
    const Eigen::Index k = Eigen::Index(weights.size());
    if (k == 0) throw InternalError("no local weights despite q < 1");
    double mass = 0.0;
    for (const auto& [pair, w] : weights) mass += w;

    Eigen::ArrayXd local_cells = Eigen::ArrayXd::Zero(d.cells());
    Eigen::MatrixXd pa = Eigen::MatrixXd::Zero(Eigen::Index(d.nX) * k, d.nA);
    Eigen::MatrixXd pb = Eigen::MatrixXd::Zero(Eigen::Index(d.nY) * k, d.nB);
    Eigen::MatrixXd plambda(1, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& [pair, w] = weights[std::size_t(i)];
      plambda(0, i) = w / mass;
      for (int x = 0; x < d.nX; ++x) {
        const int a = function_value(pair.f, d.nA, d.nX, x);
        pa(Eigen::Index(x) * k + i, a) = 1.0;
        for (int y = 0; y < d.nY; ++y) {
          const int bb = function_value(pair.g, d.nB, d.nY, y);
          if (x == 0) pb(Eigen::Index(y) * k + i, bb) = 1.0;
          local_cells[Behaviour::index_of(d, a, bb, x, y)] += w / mass;
        }
      }
    }

    Eigen::VectorXd px = stats.settings.marginal_x();
    Eigen::VectorXd py = stats.settings.marginal_y();
    px /= px.sum();
    py /= py.sum();

    out.local_part = Statistics(Behaviour(d, std::move(local_cells)),
                                stats.settings);
    out.local_model = CausalModel(StructureTag::Baseline, d,
                                  HiddenSpace::opaque(k), std::move(pa),
                                  std::move(pb), std::move(plambda),
                                  px.transpose(), py.transpose());
  }

  if (out.q > kVanish) {
    Eigen::ArrayXd residual_cells = out.fraction.residual;
    for (int x = 0; x < d.nX; ++x) {
      for (int y = 0; y < d.nY; ++y) {
        const Eigen::Index start =
            (Eigen::Index(x) * d.nY + y) * d.outcome_pairs();
        const double block = residual_cells.segment(start, d.outcome_pairs()).sum();
        if (block <= 0.0)
          throw InternalError("empty residual block despite q > 0");
        residual_cells.segment(start, d.outcome_pairs()) /= block;
      }
    }
    out.residual_part =
        Statistics(Behaviour(d, std::move(residual_cells)), stats.settings);
    // The split keeps the residual's Alice marginal setting-independent only
    // up to the solver tolerance, amplified by 1/q; check at a matching
    // tolerance when building the residual model.
    const double residual_tol = std::max(tol, 1e-6);
    out.residual_model =
        construct_structure(target, *out.residual_part, residual_tol);
  }

  return out;
}

}  // namespace bellfrac

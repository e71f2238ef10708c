#pragma once

#include <Eigen/Dense>

#include <utility>

#include "bellfrac/errors.hpp"

namespace bellfrac {

/// Normalization tolerance for values constructed in memory.
inline constexpr double kTolExact = 1e-12;
/// Normalization tolerance for values that passed through a file.
inline constexpr double kTolFile = 1e-9;
/// Largest admitted cardinality per axis.
inline constexpr int kMaxAxisCardinality = 64;

/// Sizes of the outcome sets (Alice, Bob) and setting sets (Alice, Bob).
struct Cardinalities {
  int nA = 0;
  int nB = 0;
  int nX = 0;
  int nY = 0;

  Cardinalities() = default;

  Cardinalities(int a, int b, int x, int y) : nA(a), nB(b), nX(x), nY(y) {
    for (int v : {a, b, x, y}) {
      if (v < 1) throw ShapeError("cardinalities must be positive");
      if (v > kMaxAxisCardinality)
        throw CapacityError("axis cardinality exceeds cap of " +
                            std::to_string(kMaxAxisCardinality));
    }
  }

  Eigen::Index outcome_pairs() const { return Eigen::Index(nA) * nB; }
  Eigen::Index setting_pairs() const { return Eigen::Index(nX) * nY; }
  Eigen::Index cells() const { return outcome_pairs() * setting_pairs(); }

  bool operator==(const Cardinalities&) const = default;
};

/// Conditional outcome distributions p(a,b | x,y), stored as a flat array in
/// canonical cell order ((x*nY + y)*nA + a)*nB + b, i.e. the block of outcome
/// pairs for a fixed setting pair is contiguous.
class Behaviour {
public:
  Behaviour(Cardinalities dims, Eigen::ArrayXd cells)
      : dims_(dims), p_(std::move(cells)) {
    if (p_.size() != dims_.cells())
      throw ShapeError("behaviour has " + std::to_string(p_.size()) +
                       " cells, expected " + std::to_string(dims_.cells()));
    if (!p_.isFinite().all()) throw ShapeError("behaviour entries must be finite");
  }

  template <class F>
  static Behaviour from_function(Cardinalities dims, F&& f) {
    Eigen::ArrayXd cells(dims.cells());
    for (int x = 0; x < dims.nX; ++x)
      for (int y = 0; y < dims.nY; ++y)
        for (int a = 0; a < dims.nA; ++a)
          for (int b = 0; b < dims.nB; ++b)
            cells[index_of(dims, a, b, x, y)] = f(a, b, x, y);
    return Behaviour(dims, std::move(cells));
  }

  static Behaviour uniform(Cardinalities dims) {
    return Behaviour(dims, Eigen::ArrayXd::Constant(dims.cells(),
                                                    1.0 / double(dims.outcome_pairs())));
  }

  const Cardinalities& dims() const { return dims_; }
  const Eigen::ArrayXd& data() const { return p_; }

  static Eigen::Index index_of(const Cardinalities& d, int a, int b, int x, int y) {
    return ((Eigen::Index(x) * d.nY + y) * d.nA + a) * d.nB + b;
  }

  Eigen::Index cell_index(int a, int b, int x, int y) const {
    return index_of(dims_, a, b, x, y);
  }

  double operator()(int a, int b, int x, int y) const {
    return p_[cell_index(a, b, x, y)];
  }

  /// Contiguous view of the outcome block for one setting pair.
  auto xy_block(int x, int y) const {
    return p_.segment((Eigen::Index(x) * dims_.nY + y) * dims_.outcome_pairs(),
                      dims_.outcome_pairs());
  }

  /// Sum of all outcome probabilities for a setting pair (1 when normalized).
  double xy_sum(int x, int y) const { return xy_block(x, y).sum(); }

  /// Alice's conditional marginal p(a | x,y) = sum_b p(a,b,x,y).
  double alice_conditional(int a, int x, int y) const {
    return p_.segment(cell_index(a, 0, x, y), dims_.nB).sum();
  }

  /// Bob's conditional marginal p(b | x,y) = sum_a p(a,b,x,y).
  double bob_conditional(int b, int x, int y) const {
    double s = 0.0;
    for (int a = 0; a < dims_.nA; ++a) s += (*this)(a, b, x, y);
    return s;
  }

private:
  Cardinalities dims_;
  Eigen::ArrayXd p_;
};

/// Joint distribution over setting pairs.
class SettingsDistribution {
public:
  explicit SettingsDistribution(Eigen::MatrixXd pxy) : p_(std::move(pxy)) {
    if (p_.rows() < 1 || p_.cols() < 1)
      throw ShapeError("settings distribution must be non-empty");
    if (p_.rows() > kMaxAxisCardinality || p_.cols() > kMaxAxisCardinality)
      throw CapacityError("settings axis exceeds cardinality cap");
    if (!p_.array().isFinite().all())
      throw ShapeError("settings entries must be finite");
  }

  static SettingsDistribution uniform(int nx, int ny) {
    return SettingsDistribution(
        Eigen::MatrixXd::Constant(nx, ny, 1.0 / (double(nx) * ny)));
  }

  static SettingsDistribution product(const Eigen::VectorXd& px,
                                      const Eigen::VectorXd& py) {
    return SettingsDistribution(px * py.transpose());
  }

  int nx() const { return int(p_.rows()); }
  int ny() const { return int(p_.cols()); }
  double operator()(int x, int y) const { return p_(x, y); }
  const Eigen::MatrixXd& joint() const { return p_; }

  Eigen::VectorXd marginal_x() const { return p_.rowwise().sum(); }
  Eigen::VectorXd marginal_y() const { return p_.colwise().sum().transpose(); }

private:
  Eigen::MatrixXd p_;
};

/// A behaviour together with the distribution of settings it was (or would
/// be) collected under.
struct Statistics {
  Behaviour behaviour;
  SettingsDistribution settings;

  Statistics(Behaviour b, SettingsDistribution s)
      : behaviour(std::move(b)), settings(std::move(s)) {
    if (settings.nx() != behaviour.dims().nX || settings.ny() != behaviour.dims().nY)
      throw ShapeError("settings distribution shape does not match behaviour");
  }

  static Statistics with_uniform_settings(Behaviour b) {
    const auto d = b.dims();
    return Statistics(std::move(b), SettingsDistribution::uniform(d.nX, d.nY));
  }

  const Cardinalities& dims() const { return behaviour.dims(); }
};

/// Largest absolute cell difference between two behaviours of equal shape.
inline double max_abs_difference(const Behaviour& lhs, const Behaviour& rhs) {
  if (!(lhs.dims() == rhs.dims()))
    throw ShapeError("behaviours have different shapes");
  return (lhs.data() - rhs.data()).abs().maxCoeff();
}

}  // namespace bellfrac

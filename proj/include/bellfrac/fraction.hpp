#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bellfrac/causal_model.hpp"
#include "bellfrac/types.hpp"

namespace bellfrac {

/// Deterministic response pair: f maps Alice's settings to her outcomes,
/// g likewise for Bob. Both use the canonical digit encoding of
/// causal_model.hpp; the pair index is f * (number of g's) + g.
struct LocalStrategyPair {
  Eigen::Index f = 0;
  Eigen::Index g = 0;
};

enum class FractionStatus { Solved, Infeasible, CapacityExceeded };

/// Optimal split of a behaviour into a local mixture of deterministic
/// strategy pairs plus a sub-normalized residual whose Alice marginal is
/// independent of Bob's setting. q is the residual's weight per setting pair.
struct FractionResult {
  double q = 0.0;
  FractionStatus status = FractionStatus::Solved;
  Cardinalities dims;
  /// Strictly positive weights in ascending pair order; they sum to 1 - q.
  std::vector<std::pair<LocalStrategyPair, double>> local_weights;
  /// Residual tensor in behaviour cell order; each (x,y) block sums to q.
  Eigen::ArrayXd residual;
  /// Bell-inequality lower bound (S - 2)/2 maximized over the eight CHSH
  /// sign patterns; present only for 2x2x2x2 behaviours.
  std::optional<double> chsh_certificate;
  std::int64_t iterations = 0;
  double max_residual = 0.0;  ///< worst reconstruction error of the split
};

/// Minimal weight that must be carried by a residual component satisfying
/// the one-way independence constraint, over all convex splits of `b` into
/// local strategies plus residual. The same value serves the non-local,
/// retrocausal and non-free structures. Requires the behaviour's Alice
/// marginal to be independent of Bob's setting within `tol`.
FractionResult causal_fraction(const Behaviour& b, double tol = kTolFile);

/// The fraction split materialized as statistics and models: a baseline
/// model for the local component and a model of the requested structure for
/// the residual. Components absent when their weight vanishes. Both reuse
/// the input's settings distribution.
struct FrugalDecomposition {
  double q = 0.0;
  FractionResult fraction;
  std::optional<Statistics> local_part;
  std::optional<Statistics> residual_part;
  std::optional<CausalModel> local_model;
  std::optional<CausalModel> residual_model;
};

FrugalDecomposition frugal_decomposition(const Statistics& stats,
                                         StructureTag target,
                                         double tol = kTolFile);

}  // namespace bellfrac

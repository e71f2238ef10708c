#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bellfrac/causal_model.hpp"
#include "bellfrac/fraction.hpp"
#include "bellfrac/types.hpp"

namespace bellfrac {

/// Outcome of a frugal simulation run: the extra-arrow model is consulted
/// with probability q per trial, the baseline model otherwise.
struct SimulationReport {
  Cardinalities dims;
  StructureTag target = StructureTag::NonLocal;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  double q = 0.0;  ///< planned arrow rate from the decomposition
  std::vector<std::int64_t> counts;  ///< joint counts in behaviour cell order
  double empirical_arrow_frequency = 0.0;
  double chi_square = 0.0;
  double p_value = 1.0;
  double max_cell_residual = 0.0;  ///< worst |empirical - target| behaviour cell
};

/// Runs `n` trials against the frugal decomposition of `stats`. The single
/// seed is split into fixed sub-streams (mixture coin, baseline draws,
/// residual draws) so reports are reproducible bit for bit.
SimulationReport run_frugal(const Statistics& stats, StructureTag target,
                            std::int64_t n, std::uint64_t seed,
                            double tol = kTolFile);

/// Empirical statistics from recorded trials. Setting pairs that never
/// occurred get a uniform behaviour block and are listed as unobserved.
struct EstimatedStatistics {
  Statistics statistics;
  std::vector<std::pair<int, int>> unobserved_settings;
};

EstimatedStatistics estimate_statistics(Cardinalities dims,
                                        std::span<const Trial> trials);

/// Same estimate computed from pre-tallied joint counts.
EstimatedStatistics estimate_from_counts(Cardinalities dims,
                                         std::span<const std::int64_t> counts);

/// Pearson statistic and its upper-tail p-value for observed counts against
/// expected cell probabilities (cells with zero expectation must stay empty;
/// otherwise the p-value is 0).
struct ChiSquare {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

ChiSquare chi_square_test(std::span<const std::int64_t> counts,
                          const Eigen::ArrayXd& cell_probabilities);

}  // namespace bellfrac

#include "bellfrac/simulate.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <cmath>
#include <limits>
#include <string>

#include "bellfrac/random.hpp"
#include "bellfrac/validation.hpp"

namespace bellfrac {

namespace {

// Sub-stream offsets for the single simulation seed.
enum : std::uint64_t { kCoinStream = 0, kBaselineStream = 1, kResidualStream = 2 };

EstimatedStatistics estimate_impl(const Cardinalities& dims,
                                  std::span<const std::int64_t> counts,
                                  std::int64_t total) {
  EstimatedStatistics out{
      Statistics(Behaviour::uniform(dims),
                 SettingsDistribution::uniform(dims.nX, dims.nY)),
      {}};

  Eigen::ArrayXd cells(dims.cells());
  Eigen::MatrixXd pxy(dims.nX, dims.nY);
  for (int x = 0; x < dims.nX; ++x) {
    for (int y = 0; y < dims.nY; ++y) {
      const Eigen::Index start =
          (Eigen::Index(x) * dims.nY + y) * dims.outcome_pairs();
      std::int64_t block = 0;
      for (Eigen::Index i = 0; i < dims.outcome_pairs(); ++i)
        block += counts[std::size_t(start + i)];
      pxy(x, y) = double(block) / double(total);
      if (block == 0) {
        out.unobserved_settings.emplace_back(x, y);
        cells.segment(start, dims.outcome_pairs())
            .setConstant(1.0 / double(dims.outcome_pairs()));
      } else {
        for (Eigen::Index i = 0; i < dims.outcome_pairs(); ++i)
          cells[start + i] =
              double(counts[std::size_t(start + i)]) / double(block);
      }
    }
  }

  out.statistics = Statistics(Behaviour(dims, std::move(cells)),
                              SettingsDistribution(std::move(pxy)));
  return out;
}

}  // namespace

ChiSquare chi_square_test(std::span<const std::int64_t> counts,
                          const Eigen::ArrayXd& cell_probabilities) {
  if (Eigen::Index(counts.size()) != cell_probabilities.size())
    throw ShapeError("chi-square: counts and probabilities differ in size");
  std::int64_t total = 0;
  for (const auto c : counts) total += c;

  ChiSquare out;
  Eigen::Index used = 0;
  bool impossible = false;
  for (Eigen::Index i = 0; i < cell_probabilities.size(); ++i) {
    const double expected = cell_probabilities[i] * double(total);
    const double observed = double(counts[std::size_t(i)]);
    if (expected > 0.0) {
      const double diff = observed - expected;
      out.statistic += diff * diff / expected;
      ++used;
    } else if (observed > 0.0) {
      impossible = true;
    }
  }
  out.degrees_of_freedom = double(used > 0 ? used - 1 : 0);
  if (impossible) {
    out.p_value = 0.0;
    out.statistic = std::numeric_limits<double>::infinity();
  } else if (out.degrees_of_freedom > 0.0) {
    Eigen::ArrayXd a(1), x(1);
    a[0] = out.degrees_of_freedom / 2.0;
    x[0] = out.statistic / 2.0;
    out.p_value = Eigen::igammac(a, x)(0);
  }
  return out;
}

SimulationReport run_frugal(const Statistics& stats, StructureTag target,
                            std::int64_t n, std::uint64_t seed, double tol) {
  if (n < 1) throw ShapeError("trial count must be at least 1");

  const FrugalDecomposition decomposition =
      frugal_decomposition(stats, target, tol);
  const auto& d = stats.dims();

  SimulationReport report;
  report.dims = d;
  report.target = target;
  report.n = n;
  report.seed = seed;
  report.q = decomposition.q;
  report.counts.assign(std::size_t(d.cells()), 0);

  auto coin = substream(seed, kCoinStream);
  auto baseline_rng = substream(seed, kBaselineStream);
  auto residual_rng = substream(seed, kResidualStream);

  std::int64_t arrow_uses = 0;
  for (std::int64_t t = 0; t < n; ++t) {
    const double u = uniform01(coin);
    // Components that vanished from the decomposition can never be drawn.
    const bool arrow = decomposition.residual_model.has_value() &&
                       (u < decomposition.q || !decomposition.local_model);
    const Trial trial =
        arrow ? sample_trial(*decomposition.residual_model, residual_rng)
              : sample_trial(*decomposition.local_model, baseline_rng);
    ++report.counts[std::size_t(
        Behaviour::index_of(d, trial.a, trial.b, trial.x, trial.y))];
    arrow_uses += arrow;
  }
  report.empirical_arrow_frequency = double(arrow_uses) / double(n);

  const auto estimated = estimate_from_counts(d, report.counts);
  double worst = 0.0;
  for (int x = 0; x < d.nX; ++x) {
    for (int y = 0; y < d.nY; ++y) {
      bool observed = true;
      for (const auto& [ux, uy] : estimated.unobserved_settings)
        if (ux == x && uy == y) observed = false;
      if (!observed) continue;
      for (int a = 0; a < d.nA; ++a)
        for (int b = 0; b < d.nB; ++b)
          worst = std::max(worst,
                           std::abs(estimated.statistics.behaviour(a, b, x, y) -
                                    stats.behaviour(a, b, x, y)));
    }
  }
  report.max_cell_residual = worst;

  Eigen::ArrayXd joint(d.cells());
  for (int x = 0; x < d.nX; ++x)
    for (int y = 0; y < d.nY; ++y)
      for (int a = 0; a < d.nA; ++a)
        for (int b = 0; b < d.nB; ++b)
          joint[Behaviour::index_of(d, a, b, x, y)] =
              stats.behaviour(a, b, x, y) * stats.settings(x, y);
  const ChiSquare chi = chi_square_test(report.counts, joint);
  report.chi_square = chi.statistic;
  report.p_value = chi.p_value;
  return report;
}

EstimatedStatistics estimate_statistics(Cardinalities dims,
                                        std::span<const Trial> trials) {
  if (trials.empty()) throw ShapeError("cannot estimate from zero trials");
  std::vector<std::int64_t> counts(std::size_t(dims.cells()), 0);
  for (const auto& t : trials) {
    if (t.a < 0 || t.a >= dims.nA || t.b < 0 || t.b >= dims.nB || t.x < 0 ||
        t.x >= dims.nX || t.y < 0 || t.y >= dims.nY)
      throw ShapeError("trial index out of range");
    ++counts[std::size_t(Behaviour::index_of(dims, t.a, t.b, t.x, t.y))];
  }
  return estimate_impl(dims, counts, std::int64_t(trials.size()));
}

EstimatedStatistics estimate_from_counts(Cardinalities dims,
                                         std::span<const std::int64_t> counts) {
  if (Eigen::Index(counts.size()) != dims.cells())
    throw ShapeError("counts tensor size does not match dimensions");
  std::int64_t total = 0;
  for (const auto c : counts) {
    if (c < 0) throw ShapeError("negative count");
    total += c;
  }
  if (total == 0) throw ShapeError("cannot estimate from zero trials");
  return estimate_impl(dims, counts, total);
}

}  // namespace bellfrac

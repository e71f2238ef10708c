#include "bellfrac/validation.hpp"

#include <cmath>
#include <string>

namespace bellfrac {

ValidationReport validate(const Statistics& stats, double tol) {
  ValidationReport report;
  const auto& d = stats.dims();
  const auto& b = stats.behaviour;

  auto note = [&report](ValidationIssue issue) {
    report.max_residual = std::max(report.max_residual, std::abs(issue.residual));
    report.issues.push_back(issue);
  };

  for (int x = 0; x < d.nX; ++x) {
    for (int y = 0; y < d.nY; ++y) {
      const double r = b.xy_sum(x, y) - 1.0;
      if (std::abs(r) > tol)
        note({ValidationIssue::Kind::BehaviourRowSum, -1, -1, x, y, r});
      for (int a = 0; a < d.nA; ++a) {
        for (int bb = 0; bb < d.nB; ++bb) {
          const double v = b(a, bb, x, y);
          if (v < -tol)
            note({ValidationIssue::Kind::NegativeEntry, a, bb, x, y, v});
          else if (v > 1.0 + tol)
            note({ValidationIssue::Kind::EntryAboveOne, a, bb, x, y, v - 1.0});
        }
      }
    }
  }

  const double rs = stats.settings.joint().sum() - 1.0;
  if (std::abs(rs) > tol)
    note({ValidationIssue::Kind::SettingsSum, -1, -1, -1, -1, rs});
  for (int x = 0; x < d.nX; ++x)
    for (int y = 0; y < d.nY; ++y)
      if (stats.settings(x, y) < -tol)
        note({ValidationIssue::Kind::NegativeEntry, -1, -1, x, y,
              stats.settings(x, y)});

  return report;
}

double alice_settings_deviation(const Behaviour& b) {
  const auto& d = b.dims();
  double worst = 0.0;
  for (int x = 0; x < d.nX; ++x)
    for (int a = 0; a < d.nA; ++a)
      for (int y0 = 0; y0 < d.nY; ++y0)
        for (int y1 = y0 + 1; y1 < d.nY; ++y1)
          worst = std::max(worst, std::abs(b.alice_conditional(a, x, y0) -
                                           b.alice_conditional(a, x, y1)));
  return worst;
}

IndependenceReport check_independences(const Statistics& stats) {
  IndependenceReport rep;
  const auto& d = stats.dims();
  const auto& b = stats.behaviour;

  for (int x = 0; x < d.nX; ++x) {
    for (int a = 0; a < d.nA; ++a) {
      for (int y0 = 0; y0 < d.nY; ++y0) {
        for (int y1 = y0 + 1; y1 < d.nY; ++y1) {
          const double dev = std::abs(b.alice_conditional(a, x, y0) -
                                      b.alice_conditional(a, x, y1));
          if (dev > rep.alice_deviation) {
            rep.alice_deviation = dev;
            rep.alice_a = a;
            rep.alice_x = x;
            rep.alice_y0 = y0;
            rep.alice_y1 = y1;
          }
        }
      }
    }
  }

  const Eigen::VectorXd px = stats.settings.marginal_x();
  const Eigen::VectorXd py = stats.settings.marginal_y();
  for (int x = 0; x < d.nX; ++x) {
    for (int y = 0; y < d.nY; ++y) {
      const double dev = std::abs(stats.settings(x, y) - px[x] * py[y]);
      if (dev > rep.settings_deviation) {
        rep.settings_deviation = dev;
        rep.settings_x = x;
        rep.settings_y = y;
      }
    }
  }

  for (int y = 0; y < d.nY; ++y) {
    for (int bb = 0; bb < d.nB; ++bb) {
      for (int x0 = 0; x0 < d.nX; ++x0) {
        for (int x1 = x0 + 1; x1 < d.nX; ++x1) {
          const double dev = std::abs(b.bob_conditional(bb, x0, y) -
                                      b.bob_conditional(bb, x1, y));
          if (dev > rep.bob_deviation) {
            rep.bob_deviation = dev;
            rep.bob_b = bb;
            rep.bob_y = y;
            rep.bob_x0 = x0;
            rep.bob_x1 = x1;
          }
        }
      }
    }
  }

  return rep;
}

Eigen::MatrixXd alice_marginal(const Behaviour& b, double tol) {
  const double dev = alice_settings_deviation(b);
  if (dev > tol)
    throw IndependenceViolation(
        "Alice marginal depends on Bob's setting (deviation " +
        std::to_string(dev) + " > " + std::to_string(tol) + ")");
  const auto& d = b.dims();
  Eigen::MatrixXd pax(d.nX, d.nA);
  for (int x = 0; x < d.nX; ++x)
    for (int a = 0; a < d.nA; ++a)
      pax(x, a) = b.alice_conditional(a, x, 0);
  return pax;
}

}  // namespace bellfrac

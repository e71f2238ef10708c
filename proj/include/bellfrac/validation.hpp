#pragma once

#include <vector>

#include "bellfrac/types.hpp"

namespace bellfrac {

struct ValidationIssue {
  enum class Kind {
    BehaviourRowSum,  ///< outcome block for (x,y) does not sum to 1
    SettingsSum,      ///< settings distribution does not sum to 1
    NegativeEntry,
    EntryAboveOne,
  };
  Kind kind;
  int a = -1, b = -1, x = -1, y = -1;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  double max_residual = 0.0;
  bool ok() const { return issues.empty(); }
};

/// Checks normalization and range of every distribution in `stats`.
/// Violations are listed with their indices and residuals.
ValidationReport validate(const Statistics& stats, double tol = kTolExact);

/// Deviations from the independence structure needed by the single-arrow
/// models: Alice's conditional marginal must not depend on Bob's setting, and
/// the settings distribution must factorize. The Bob-side mirror deviation is
/// reported for information only and does not affect passes().
struct IndependenceReport {
  double alice_deviation = 0.0;  ///< max |p(a|x,y) - p(a|x,y')|
  int alice_a = -1, alice_x = -1, alice_y0 = -1, alice_y1 = -1;

  double settings_deviation = 0.0;  ///< max |P(x,y) - P(x)P(y)|
  int settings_x = -1, settings_y = -1;

  double bob_deviation = 0.0;  ///< max |p(b|x,y) - p(b|x',y)|, informational
  int bob_b = -1, bob_y = -1, bob_x0 = -1, bob_x1 = -1;

  bool passes(double tol) const {
    return alice_deviation <= tol && settings_deviation <= tol;
  }
};

/// Computes the report above. The Alice-side condition is evaluated on the
/// behaviour for every setting pair, regardless of the settings weights.
IndependenceReport check_independences(const Statistics& stats);

/// Alice-side deviation of a bare behaviour (no settings involved).
double alice_settings_deviation(const Behaviour& b);

/// Alice's setting-conditional outcome table p(a|x), rows indexed by x.
/// Requires the behaviour's Alice marginal to be independent of Bob's setting
/// within `tol`; throws IndependenceViolation otherwise.
Eigen::MatrixXd alice_marginal(const Behaviour& b, double tol = kTolExact);

}  // namespace bellfrac

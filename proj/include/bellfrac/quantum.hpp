#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bellfrac/types.hpp"

namespace bellfrac {

/// Two-qubit state with per-setting projective (POVM) measurements.
/// alice[x][a] and bob[y][b] are 2x2 operators; each setting's operators must
/// be positive semidefinite and sum to the identity.
struct QuantumScenario {
  Eigen::Matrix4cd rho;
  std::vector<std::vector<Eigen::Matrix2cd>> alice;
  std::vector<std::vector<Eigen::Matrix2cd>> bob;
};

/// Throws ValidationError if the state or measurements violate their
/// positivity / normalization constraints.
void check_scenario(const QuantumScenario& sc);

/// Projector onto the +/- eigenspace of the Bloch direction (theta, phi);
/// outcome 0 picks the + eigenvector.
Eigen::Matrix2cd bloch_projector(double theta, double phi, int outcome);

/// Outcome probabilities p(a,b|x,y) = Tr[rho (A_a|x (x) B_b|y)].
Behaviour born_behaviour(const QuantumScenario& sc);

/// Correlator E(x,y) = sum_ab (-1)^(a+b) p(a,b,x,y) for two-outcome cells.
double correlator(const Behaviour& b, int x, int y);

/// CHSH combination E(0,0) + E(0,1) + E(1,0) - E(1,1). Requires all four
/// cardinalities equal to 2.
double chsh_value(const Behaviour& b);

/// Singlet state with measurement angles in the Z-X plane chosen so that
/// chsh_value of the resulting behaviour is +2*sqrt(2).
QuantumScenario singlet_chsh_scenario();

/// Extremal no-signalling behaviour: p(a,b,x,y) = 1/2 if a xor b == x and y,
/// else 0.
Behaviour pr_box();

/// Visibility-v mixture of the singlet CHSH behaviour with uniform noise.
Behaviour werner(double v);

/// Built-in named statistics for the command-line tool:
/// "singlet-chsh-optimal", "prbox", "werner:<v>". Settings default to uniform.
Statistics builtin_statistics(std::string_view name,
                              std::optional<SettingsDistribution> settings = {});

}  // namespace bellfrac

#include "bellfrac/quantum.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace bellfrac {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = 1e-10;

void check_povm(const std::vector<Eigen::Matrix2cd>& ops, const char* party,
                int setting) {
  const std::string where =
      std::string(party) + " setting " + std::to_string(setting);
  if (ops.empty()) throw ShapeError("no measurement operators for " + where);
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& op : ops) {
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
      throw ValidationError("non-Hermitian measurement operator for " + where);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(op);
    if (es.eigenvalues().minCoeff() < -kHermTol)
      throw ValidationError("measurement operator not PSD for " + where);
    sum += op;
  }
  if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kHermTol)
    throw ValidationError("measurement operators do not sum to identity for " +
                          where);
}

}  // namespace

void check_scenario(const QuantumScenario& sc) {
  if ((sc.rho - sc.rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw ValidationError("state is not Hermitian");
  if (std::abs(sc.rho.trace().real() - 1.0) > kHermTol ||
      std::abs(sc.rho.trace().imag()) > kHermTol)
    throw ValidationError("state trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(sc.rho);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw ValidationError("state is not positive semidefinite");
  if (sc.alice.empty() || sc.bob.empty())
    throw ShapeError("scenario needs at least one setting per party");
  for (std::size_t x = 0; x < sc.alice.size(); ++x)
    check_povm(sc.alice[x], "Alice", int(x));
  for (std::size_t y = 0; y < sc.bob.size(); ++y)
    check_povm(sc.bob[y], "Bob", int(y));
}

Eigen::Matrix2cd bloch_projector(double theta, double phi, int outcome) {
  using namespace std::complex_literals;
  const double s = outcome == 0 ? 1.0 : -1.0;
  const Eigen::Vector3d n(std::sin(theta) * std::cos(phi),
                          std::sin(theta) * std::sin(phi), std::cos(theta));
  Eigen::Matrix2cd p;
  p << 1.0 + s * n.z(), s * (n.x() - 1i * n.y()),
       s * (n.x() + 1i * n.y()), 1.0 - s * n.z();
  return 0.5 * p;
}

Behaviour born_behaviour(const QuantumScenario& sc) {
  check_scenario(sc);
  const int nx = int(sc.alice.size());
  const int ny = int(sc.bob.size());
  const int na = int(sc.alice[0].size());
  const int nb = int(sc.bob[0].size());
  for (const auto& ops : sc.alice)
    if (int(ops.size()) != na)
      throw ShapeError("uneven outcome counts across Alice settings");
  for (const auto& ops : sc.bob)
    if (int(ops.size()) != nb)
      throw ShapeError("uneven outcome counts across Bob settings");

  const Cardinalities dims(na, nb, nx, ny);
  return Behaviour::from_function(dims, [&](int a, int b, int x, int y) {
    const Eigen::Matrix4cd joint =
        Eigen::kroneckerProduct(sc.alice[x][a], sc.bob[y][b]);
    return (sc.rho * joint).trace().real();
  });
}

double correlator(const Behaviour& b, int x, int y) {
  const auto& d = b.dims();
  if (d.nA != 2 || d.nB != 2)
    throw DimensionError("correlator requires two outcomes per party");
  return b(0, 0, x, y) - b(0, 1, x, y) - b(1, 0, x, y) + b(1, 1, x, y);
}

double chsh_value(const Behaviour& b) {
  const auto& d = b.dims();
  if (d.nA != 2 || d.nB != 2 || d.nX != 2 || d.nY != 2)
    throw DimensionError("CHSH requires two outcomes and two settings per party");
  return correlator(b, 0, 0) + correlator(b, 0, 1) + correlator(b, 1, 0) -
         correlator(b, 1, 1);
}

QuantumScenario singlet_chsh_scenario() {
  QuantumScenario sc;
  Eigen::Vector4cd psi;
  psi << 0.0, 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2, 0.0;
  sc.rho = psi * psi.adjoint();

  const double pi = std::numbers::pi;
  // For the singlet, E(x,y) = -cos(theta_x - theta_y) for Z-X plane angles.
  // These four angles put every CHSH term at 1/sqrt(2) with the right sign.
  const double alice_angles[2] = {0.0, pi / 2};
  const double bob_angles[2] = {5 * pi / 4, 3 * pi / 4};
  for (double t : alice_angles)
    sc.alice.push_back({bloch_projector(t, 0.0, 0), bloch_projector(t, 0.0, 1)});
  for (double t : bob_angles)
    sc.bob.push_back({bloch_projector(t, 0.0, 0), bloch_projector(t, 0.0, 1)});
  return sc;
}

Behaviour pr_box() {
  return Behaviour::from_function(Cardinalities(2, 2, 2, 2),
                                  [](int a, int b, int x, int y) {
                                    return (a ^ b) == (x & y) ? 0.5 : 0.0;
                                  });
}

Behaviour werner(double v) {
  if (v < 0.0 || v > 1.0)
    throw ValidationError("werner visibility must lie in [0,1]");
  const Behaviour singlet = born_behaviour(singlet_chsh_scenario());
  return Behaviour(singlet.dims(), v * singlet.data() + (1.0 - v) * 0.25);
}

Statistics builtin_statistics(std::string_view name,
                              std::optional<SettingsDistribution> settings) {
  std::optional<Behaviour> b;
  if (name == "singlet-chsh-optimal") {
    b = born_behaviour(singlet_chsh_scenario());
  } else if (name == "prbox") {
    b = pr_box();
  } else if (name.starts_with("werner:")) {
    const std::string_view arg = name.substr(7);
    double v = -1.0;
    const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size())
      throw ParseError("cannot parse werner visibility '" + std::string(arg) + "'");
    b = werner(v);
  } else {
    throw ParseError("unknown scenario '" + std::string(name) + "'");
  }
  if (settings) return Statistics(std::move(*b), std::move(*settings));
  return Statistics::with_uniform_settings(std::move(*b));
}

}  // namespace bellfrac

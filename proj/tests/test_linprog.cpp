#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bellfrac/linprog.hpp"
#include "bellfrac/quantum.hpp"
#include "support/reference_lp.hpp"

using namespace bellfrac;

TEST_CASE("min x subject to x = 1") {
  Eigen::VectorXd c(1), b(1);
  c << 1.0;
  b << 1.0;
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  const auto sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[0] == doctest::Approx(1.0));
  CHECK(sol.max_residual <= 1e-9);
  CHECK(sol.duality_gap <= 1e-9);
}

TEST_CASE("min x+y subject to x+y = 1 has value 1 at a vertex") {
  Eigen::VectorXd c(2), b(1);
  c << 1.0, 1.0;
  b << 1.0;
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  const auto sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal.sum() == doctest::Approx(1.0));
  CHECK(sol.primal.minCoeff() >= -1e-12);
}

TEST_CASE("negative right-hand sides are handled by row orientation") {
  // -x - y = -1 is x + y = 1
  Eigen::VectorXd c(2), b(1);
  c << 2.0, 3.0;
  b << -1.0;
  Eigen::MatrixXd a(1, 2);
  a << -1.0, -1.0;
  const auto sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0));
  CHECK(sol.primal[0] == doctest::Approx(1.0));
  CHECK(sol.duality_gap <= 1e-9);
}

TEST_CASE("infeasible system is reported") {
  // x + y = -1 with x, y >= 0
  Eigen::VectorXd c(2), b(1);
  c << 1.0, 1.0;
  b << -1.0;
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  CHECK(lp_solve(c, a, b).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded objective is reported") {
  // min -x subject to x - s = 0: x can grow with s
  Eigen::VectorXd c(2), b(1);
  c << -1.0, 0.0;
  b << 0.0;
  Eigen::MatrixXd a(1, 2);
  a << 1.0, -1.0;
  CHECK(lp_solve(c, a, b).status == LpStatus::Unbounded);
}

TEST_CASE("duplicated rows are dropped as dependent") {
  Eigen::VectorXd c(2), b(2);
  c << 1.0, 2.0;
  b << 1.0, 1.0;
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  const auto sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.max_residual <= 1e-9);
}

TEST_CASE("degenerate problems terminate (Bland)") {
  // Several tied basic feasible solutions at zero.
  Eigen::VectorXd c(4), b(2);
  c << -1.0, -1.0, 0.0, 0.0;
  b << 0.0, 0.0;
  Eigen::MatrixXd a(2, 4);
  a << 1.0, -1.0, 1.0, 0.0,
      -1.0, 1.0, 0.0, 1.0;
  const auto sol = lp_solve(c, a, b);
  CHECK(sol.status == LpStatus::Unbounded);  // x0 = x1 -> objective -2t
}

TEST_CASE("dimension mismatches are rejected") {
  Eigen::VectorXd c(2), b(1);
  c << 1.0, 1.0;
  b << 1.0;
  Eigen::MatrixXd a(1, 3);
  a.setOnes();
  CHECK_THROWS_AS(lp_solve(c, a, b), ShapeError);
}

TEST_CASE("the PR-box fraction program in explicit equality form") {
  const Behaviour box = pr_box();
  const auto& d = box.dims();
  const auto strategy = reflp::strategy_matrix(d);
  const Eigen::Index pairs = Eigen::Index(strategy[0].size());
  const Eigen::Index cells = d.cells();

  Eigen::MatrixXd a(cells, pairs + cells);
  a.setZero();
  for (Eigen::Index i = 0; i < cells; ++i) {
    for (Eigen::Index j = 0; j < pairs; ++j)
      a(i, j) = strategy[std::size_t(i)][std::size_t(j)];
    a(i, pairs + i) = 1.0;
  }
  Eigen::VectorXd b = box.data().matrix();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(pairs + cells);
  c.head(pairs).setConstant(-1.0);

  const auto sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  const double q = 1.0 + sol.objective;
  CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.duality_gap <= 1e-9);
  CHECK(sol.max_residual <= 1e-9);
}

TEST_CASE("identical inputs give bit-identical solutions") {
  Eigen::MatrixXd a(2, 4);
  a << 1.0, 2.0, 1.0, 0.0,
       3.0, 1.0, 0.0, 1.0;
  Eigen::VectorXd b(2), c(4);
  b << 4.0, 6.0;
  c << -5.0, -4.0, 0.0, 0.0;
  const auto s1 = lp_solve(c, a, b);
  const auto s2 = lp_solve(c, a, b);
  REQUIRE(s1.status == LpStatus::Optimal);
  CHECK(s1.objective == s2.objective);
  CHECK((s1.primal - s2.primal).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.dual - s2.dual).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("agreement with the reference solver on random inequality problems") {
  // max c.x over Ax <= b via slacks in the equality form.
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 2 + int(rng() % 4);
    const int n = 2 + int(rng() % 4);
    reflp::Simplex::Mat ar;
    ar.assign(std::size_t(m), reflp::Simplex::Vec(std::size_t(n), 0.0));
    Eigen::MatrixXd a(m, n + m);
    a.setZero();
    Eigen::VectorXd b(m);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n + m);
    reflp::Simplex::Vec br(std::size_t(m), 0.0);
    reflp::Simplex::Vec cr(std::size_t(n), 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = double(rng() % 7);
        ar[std::size_t(i)][std::size_t(j)] = v;
        a(i, j) = v;
      }
      a(i, n + i) = 1.0;
      b[i] = 1.0 + double(rng() % 5);
      br[std::size_t(i)] = b[i];
    }
    for (int j = 0; j < n; ++j) {
      cr[std::size_t(j)] = double(rng() % 5);
      c[j] = -cr[std::size_t(j)];
    }

    reflp::Simplex::Vec xr;
    const double ref = reflp::Simplex(ar, br, cr).solve(xr);
    const auto sol = lp_solve(c, a, b);
    if (std::isinf(ref)) {
      CHECK(sol.status == LpStatus::Unbounded);
    } else {
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(-sol.objective == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

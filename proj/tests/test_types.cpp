#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellfrac/types.hpp"

using namespace bellfrac;

TEST_CASE("cardinalities reject non-positive and oversized axes") {
  CHECK_THROWS_AS(Cardinalities(0, 2, 2, 2), ShapeError);
  CHECK_THROWS_AS(Cardinalities(2, -1, 2, 2), ShapeError);
  CHECK_THROWS_AS(Cardinalities(65, 2, 2, 2), CapacityError);
  const Cardinalities d(64, 2, 3, 4);
  CHECK(d.cells() == 64 * 2 * 3 * 4);
  CHECK(d.outcome_pairs() == 128);
}

TEST_CASE("behaviour cell order is (x,y) blocks of (a,b)") {
  const Cardinalities d(2, 3, 2, 2);
  const Behaviour b = Behaviour::from_function(d, [](int a, int bb, int x, int y) {
    return double(a * 1000 + bb * 100 + x * 10 + y);
  });
  CHECK(b(1, 2, 0, 1) == doctest::Approx(1201.0));
  CHECK(b.data()[Behaviour::index_of(d, 1, 2, 0, 1)] == doctest::Approx(1201.0));
  // block for (x=1,y=0) is contiguous and holds all (a,b)
  const auto block = b.xy_block(1, 0);
  CHECK(block.size() == 6);
  CHECK(block[0] == doctest::Approx(10.0));   // a=0,b=0
  CHECK(block[5] == doctest::Approx(1210.0)); // a=1,b=2
}

TEST_CASE("behaviour rejects wrong cell counts and non-finite entries") {
  const Cardinalities d(2, 2, 2, 2);
  CHECK_THROWS_AS(Behaviour(d, Eigen::ArrayXd::Zero(15)), ShapeError);
  Eigen::ArrayXd cells = Eigen::ArrayXd::Zero(16);
  cells[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Behaviour(d, cells), ShapeError);
}

TEST_CASE("behaviour marginals") {
  const Cardinalities d(2, 2, 2, 2);
  const Behaviour u = Behaviour::uniform(d);
  CHECK(u.xy_sum(0, 0) == doctest::Approx(1.0));
  CHECK(u.alice_conditional(0, 1, 1) == doctest::Approx(0.5));
  CHECK(u.bob_conditional(1, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("settings distribution marginals and product form") {
  Eigen::VectorXd px(2), py(2);
  px << 0.3, 0.7;
  py << 0.6, 0.4;
  const auto s = SettingsDistribution::product(px, py);
  CHECK(s(0, 0) == doctest::Approx(0.18));
  CHECK(s(1, 1) == doctest::Approx(0.28));
  CHECK(s.marginal_x()[0] == doctest::Approx(0.3));
  CHECK(s.marginal_y()[1] == doctest::Approx(0.4));
  CHECK(s.joint().sum() == doctest::Approx(1.0));
}

TEST_CASE("statistics require matching setting shapes") {
  const Behaviour b = Behaviour::uniform(Cardinalities(2, 2, 2, 2));
  CHECK_THROWS_AS(Statistics(b, SettingsDistribution::uniform(3, 2)), ShapeError);
  const Statistics ok = Statistics::with_uniform_settings(b);
  CHECK(ok.settings(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("max_abs_difference requires equal shapes") {
  const Behaviour a = Behaviour::uniform(Cardinalities(2, 2, 2, 2));
  const Behaviour c = Behaviour::uniform(Cardinalities(2, 2, 2, 3));
  CHECK_THROWS_AS(max_abs_difference(a, c), ShapeError);
  CHECK(max_abs_difference(a, a) == doctest::Approx(0.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellfrac/json_io.hpp"
#include "bellfrac/quantum.hpp"
#include "support/generators.hpp"

using namespace bellfrac;
using nlohmann::json;

TEST_CASE("behaviour nesting is [x][y][a][b]") {
  const json j = {
      {"nA", 2}, {"nB", 2}, {"nX", 2}, {"nY", 2},
      {"behaviour",
       json::parse(R"([
         [ [[0.00, 0.01],[0.10, 0.11]], [[1.00, 1.01],[1.10, 1.11]] ],
         [ [[2.00, 2.01],[2.10, 2.11]], [[3.00, 3.01],[3.10, 3.11]] ]
       ])")}};
  const Statistics stats = statistics_from_json(j);
  // value pattern: (x*nY + y) + 0.1*a + 0.01*b
  CHECK(stats.behaviour(0, 0, 0, 0) == doctest::Approx(0.00));
  CHECK(stats.behaviour(1, 0, 0, 1) == doctest::Approx(1.10));
  CHECK(stats.behaviour(0, 1, 1, 0) == doctest::Approx(2.01));
  CHECK(stats.behaviour(1, 1, 1, 1) == doctest::Approx(3.11));
  // missing settings default to uniform
  CHECK(stats.settings(1, 0) == doctest::Approx(0.25));
}

TEST_CASE("statistics survive a round trip") {
  std::mt19937_64 rng(3);
  const auto stats =
      testgen::random_oneway_statistics(Cardinalities(3, 2, 2, 4), rng);
  const Statistics back = statistics_from_json(to_json(stats));
  CHECK(max_abs_difference(back.behaviour, stats.behaviour) == 0.0);
  CHECK((back.settings.joint() - stats.settings.joint()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("parse and shape failures are distinguished") {
  CHECK_THROWS_AS(parse_json("{ not json"), ParseError);
  CHECK_THROWS_AS(statistics_from_json(json::array()), ParseError);
  CHECK_THROWS_AS(statistics_from_json(json{{"nA", 2}}), ParseError);

  json j = to_json(Statistics::with_uniform_settings(pr_box()));
  j["behaviour"][0].erase(1);  // drop one y-slice
  CHECK_THROWS_AS(statistics_from_json(j), ShapeError);

  json j2 = to_json(Statistics::with_uniform_settings(pr_box()));
  j2["nA"] = 0;
  CHECK_THROWS_AS(statistics_from_json(j2), ShapeError);

  json j3 = to_json(Statistics::with_uniform_settings(pr_box()));
  j3["behaviour"][0][0][0][0] = "oops";
  CHECK_THROWS_AS(statistics_from_json(j3), ParseError);
}

TEST_CASE("models of every structure survive a round trip") {
  std::mt19937_64 rng(5);
  const auto stats = testgen::random_oneway_statistics(Cardinalities(2, 3, 2, 2), rng);
  for (const auto tag : {StructureTag::NonLocal, StructureTag::Retrocausal,
                         StructureTag::NonFree}) {
    const CausalModel m = construct_structure(tag, stats);
    const CausalModel back = model_from_json(to_json(m));
    CHECK(back.tag() == m.tag());
    CHECK(back.hidden() == m.hidden());
    CHECK((back.outcome_a() - m.outcome_a()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.outcome_b() - m.outcome_b()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.hidden_weights() - m.hidden_weights()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.setting_x() - m.setting_x()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.setting_y() - m.setting_y()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_difference(eval_statistics(back).behaviour,
                             eval_statistics(m).behaviour) == 0.0);
  }
}

TEST_CASE("model JSON validates table shapes against the tag") {
  const auto stats = Statistics::with_uniform_settings(pr_box());
  json j = to_json(construct_nonlocal(stats));
  j["tag"] = "r";  // tables no longer match the structure
  CHECK_THROWS_AS(model_from_json(j), ShapeError);

  json j2 = to_json(construct_nonlocal(stats));
  j2["p_lambda"][0] = 0.9;  // breaks normalization
  CHECK_THROWS_AS(model_from_json(j2), ValidationError);
}

TEST_CASE("fraction results serialize their weights by digit string") {
  const auto b = Behaviour::from_function(Cardinalities(2, 2, 2, 2),
                                          [](int a, int bb, int x, int y) {
                                            return (a == x && bb == y) ? 1.0 : 0.0;
                                          });
  const json j = to_json(causal_fraction(b));
  CHECK(j["q"].get<double>() == doctest::Approx(0.0));
  CHECK(j["status"] == "solved");
  REQUIRE(j["weights"].size() == 1);
  CHECK(j["weights"].contains("0.1|0.1"));
  CHECK(j["weights"]["0.1|0.1"].get<double>() == doctest::Approx(1.0));
  CHECK(j.contains("dual_certificate"));
  CHECK(j["residual"].size() == 2);
}

TEST_CASE("simulation reports carry counts in [x][y][a][b] order") {
  SimulationReport rep;
  rep.dims = Cardinalities(2, 2, 2, 2);
  rep.target = StructureTag::Retrocausal;
  rep.n = 1;
  rep.seed = 7;
  rep.counts.assign(16, 0);
  rep.counts[std::size_t(Behaviour::index_of(rep.dims, 1, 0, 0, 1))] = 1;
  const json j = to_json(rep);
  CHECK(j["target"] == "r");
  CHECK(j["counts"][0][1][1][0] == 1);
  CHECK(j["counts"][0][0][0][0] == 0);
}

TEST_CASE("validation and independence reports serialize") {
  const auto stats = Statistics::with_uniform_settings(pr_box());
  const json jv = to_json(validate(stats));
  CHECK(jv["ok"] == true);
  const json ji = to_json(check_independences(stats));
  CHECK(ji["alice_deviation"].get<double>() == doctest::Approx(0.0));
}

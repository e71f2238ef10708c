#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bellfrac/json_io.hpp"
#include "bellfrac/quantum.hpp"

using namespace bellfrac;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("bellfrac-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

RunResult run_cli(const std::string& args, const std::string& stdin_text = "") {
  static int counter = 0;
  const fs::path in = scratch_dir() / ("in" + std::to_string(counter));
  const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
  const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;
  spit(in, stdin_text);
  const std::string cmd = std::string(BELLFRAC_CLI) + " " + args + " < " +
                          in.string() + " > " + out.string() + " 2> " +
                          err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("gen then validate succeeds for every built-in scenario") {
  for (const std::string name :
       {"prbox", "singlet-chsh-optimal", "werner:0.3", "werner:1"}) {
    const fs::path file = scratch_dir() / ("gen-" + name.substr(0, 6) + ".json");
    const auto gen = run_cli("gen " + name + " -o " + file.string());
    REQUIRE(gen.exit_code == 0);
    const auto val = run_cli("validate " + file.string());
    CHECK(val.exit_code == 0);
    CHECK(val.out.find("VALID") != std::string::npos);
  }
}

TEST_CASE("piped PR-box fraction prints q = 1") {
  const auto gen = run_cli("gen prbox -o -");
  REQUIRE(gen.exit_code == 0);
  const auto frac = run_cli("fraction -", gen.out);
  REQUIRE(frac.exit_code == 0);
  CHECK(frac.out.substr(0, 6) == "q = 1\n");
}

TEST_CASE("piped singlet CHSH prints the Tsirelson value") {
  const auto gen = run_cli("gen singlet-chsh-optimal -o -");
  REQUIRE(gen.exit_code == 0);
  const auto chsh = run_cli("chsh -", gen.out);
  REQUIRE(chsh.exit_code == 0);
  CHECK(chsh.out == "2.82842712\n");
}

TEST_CASE("construct then eval reproduces each scenario at every structure") {
  for (const std::string name : {"prbox", "singlet-chsh-optimal", "werner:0.7"}) {
    const fs::path stats_file = scratch_dir() / "roundtrip-stats.json";
    REQUIRE(run_cli("gen " + name + " -o " + stats_file.string()).exit_code == 0);
    const Statistics original =
        statistics_from_json(parse_json(slurp(stats_file)));

    for (const std::string structure : {"nl", "r", "nf"}) {
      const fs::path model_file = scratch_dir() / "roundtrip-model.json";
      const auto c = run_cli("construct " + structure + " " +
                             stats_file.string() + " -o " + model_file.string());
      REQUIRE(c.exit_code == 0);
      const auto e = run_cli("eval " + model_file.string() + " -o -");
      REQUIRE(e.exit_code == 0);
      const Statistics back = statistics_from_json(parse_json(e.out));
      CHECK(max_abs_difference(back.behaviour, original.behaviour) <= 1e-9);
      CHECK((back.settings.joint() - original.settings.joint())
                .cwiseAbs()
                .maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("generated settings marginals reach the output") {
  const auto gen = run_cli("gen prbox --px 0.3,0.7 --py 0.6,0.4 -o -");
  REQUIRE(gen.exit_code == 0);
  const Statistics stats = statistics_from_json(parse_json(gen.out));
  CHECK(stats.settings(0, 0) == doctest::Approx(0.18));
  CHECK(stats.settings(1, 1) == doctest::Approx(0.28));
}

TEST_CASE("malformed JSON exits 1 with a parse code") {
  const auto r = run_cli("validate -", "{ this is not json");
  CHECK(r.exit_code == 1);
  const auto err = nlohmann::json::parse(r.err);
  CHECK(err["code"] == "parse");
}

TEST_CASE("signalling statistics fail validation with exit 2") {
  // Alice's marginal follows Bob's setting.
  const auto bad = Behaviour::from_function(
      Cardinalities(2, 2, 2, 2),
      [](int a, int, int, int y) { return a == y ? 0.5 : 0.0; });
  const std::string text =
      to_json(Statistics::with_uniform_settings(bad)).dump();
  const auto r = run_cli("validate -", text);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("INVALID") != std::string::npos);
}

TEST_CASE("fraction of signalling statistics exits 2 with independence code") {
  const auto bad = Behaviour::from_function(
      Cardinalities(2, 2, 2, 2),
      [](int a, int, int, int y) { return a == y ? 0.5 : 0.0; });
  const std::string text =
      to_json(Statistics::with_uniform_settings(bad)).dump();
  const auto r = run_cli("fraction -", text);
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.err)["code"] == "independence");
}

TEST_CASE("chsh demands two settings and outcomes per party") {
  const std::string text =
      to_json(Statistics::with_uniform_settings(
                  Behaviour::uniform(Cardinalities(2, 2, 3, 2))))
          .dump();
  const auto r = run_cli("chsh -", text);
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.err)["code"] == "dimension");
}

TEST_CASE("unknown subcommands and missing options exit 1 with usage code") {
  const auto r = run_cli("frobnicate");
  CHECK(r.exit_code == 1);
  CHECK(nlohmann::json::parse(r.err)["code"] == "usage");
  const auto r2 = run_cli("simulate - --target nl");
  CHECK(r2.exit_code == 1);
}

TEST_CASE("fraction --certify prints the dual certificate") {
  const auto gen = run_cli("gen singlet-chsh-optimal -o -");
  const auto frac = run_cli("fraction - --certify", gen.out);
  REQUIRE(frac.exit_code == 0);
  CHECK(frac.out.find("q = 0.414213562\n") != std::string::npos);
  CHECK(frac.out.find("dual_certificate = 0.414213562") != std::string::npos);
}

TEST_CASE("every command is byte-deterministic across runs") {
  const fs::path stats_file = scratch_dir() / "det-stats.json";
  REQUIRE(run_cli("gen werner:0.9 -o " + stats_file.string()).exit_code == 0);
  const std::string stats_text = slurp(stats_file);

  const std::vector<std::string> commands = {
      "gen werner:0.9 -o -",
      "gen singlet-chsh-optimal --px 0.3,0.7 -o -",
      "validate " + stats_file.string(),
      "construct r " + stats_file.string() + " -o -",
      "fraction " + stats_file.string() + " --certify -o -",
      "simulate " + stats_file.string() + " --target nf -n 20000 --seed 7 -o -",
      "chsh " + stats_file.string(),
  };
  for (const auto& cmd : commands) {
    const auto r1 = run_cli(cmd, stats_text);
    const auto r2 = run_cli(cmd, stats_text);
    CHECK(r1.exit_code == r2.exit_code);
    CHECK(r1.out == r2.out);
    CHECK(r1.err == r2.err);
  }
}

TEST_CASE("simulate writes a well-formed report") {
  const auto gen = run_cli("gen prbox -o -");
  const auto sim =
      run_cli("simulate - --target nl -n 5000 --seed 3 -o -", gen.out);
  REQUIRE(sim.exit_code == 0);
  const auto j = nlohmann::json::parse(sim.out);
  CHECK(j["n"] == 5000);
  CHECK(j["seed"] == 3);
  CHECK(j["empirical_q"] == 1.0);
  CHECK(j["target"] == "nl");
  CHECK(j["p_value"].get<double>() > 0.001);
}

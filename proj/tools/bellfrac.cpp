// Command-line front end: validates statistics files, generates built-in
// scenarios, builds/evaluates single-arrow causal models, computes the causal
// fraction, and runs frugal simulations. File arguments accept "-" for
// stdin/stdout.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bellfrac/fraction.hpp"
#include "bellfrac/json_io.hpp"
#include "bellfrac/quantum.hpp"
#include "bellfrac/simulate.hpp"
#include "bellfrac/validation.hpp"

namespace {

using namespace bellfrac;

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    ss << f.rdbuf();
  }
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Statistics load_statistics(const std::string& path) {
  return statistics_from_json(parse_json(read_input(path)));
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Eigen::VectorXd parse_marginal(const std::string& csv, const char* what) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError(std::string("bad value '") + item + "' in " + what);
    }
  }
  if (values.empty()) throw ParseError(std::string(what) + " is empty");
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(),
                                                  Eigen::Index(values.size()));
  if (v.minCoeff() < 0.0)
    throw ValidationError(std::string(what) + " has negative entries");
  const double sum = v.sum();
  if (sum <= 0.0) throw ValidationError(std::string(what) + " sums to zero");
  return v / sum;
}

int cmd_validate(const std::string& input) {
  const Statistics stats = load_statistics(input);
  const ValidationReport vr = validate(stats, kTolFile);
  const IndependenceReport ir = check_independences(stats);

  if (vr.ok()) {
    std::cout << "normalization: OK (max residual " << fmt9(vr.max_residual)
              << ")\n";
  } else {
    std::cout << "normalization: FAIL (" << vr.issues.size()
              << " issues, max residual " << fmt9(vr.max_residual) << ")\n";
    for (const auto& issue : vr.issues) {
      const char* kind = "";
      switch (issue.kind) {
        case ValidationIssue::Kind::BehaviourRowSum: kind = "behaviour block sum"; break;
        case ValidationIssue::Kind::SettingsSum: kind = "settings sum"; break;
        case ValidationIssue::Kind::NegativeEntry: kind = "negative entry"; break;
        case ValidationIssue::Kind::EntryAboveOne: kind = "entry above one"; break;
      }
      std::cout << "  " << kind;
      if (issue.x >= 0) std::cout << " at x=" << issue.x << " y=" << issue.y;
      if (issue.a >= 0) std::cout << " a=" << issue.a << " b=" << issue.b;
      std::cout << ", residual " << fmt9(issue.residual) << "\n";
    }
  }

  const bool alice_ok = ir.alice_deviation <= kTolFile;
  const bool settings_ok = ir.settings_deviation <= kTolFile;
  std::cout << "alice marginal independent of Bob's setting: "
            << (alice_ok ? "OK" : "FAIL") << " (deviation "
            << fmt9(ir.alice_deviation) << ")\n";
  if (!alice_ok)
    std::cout << "  witness: a=" << ir.alice_a << " x=" << ir.alice_x
              << " y=" << ir.alice_y0 << " vs y=" << ir.alice_y1 << "\n";
  std::cout << "settings factorization: " << (settings_ok ? "OK" : "FAIL")
            << " (deviation " << fmt9(ir.settings_deviation) << ")\n";
  if (!settings_ok)
    std::cout << "  witness: x=" << ir.settings_x << " y=" << ir.settings_y
              << "\n";
  std::cout << "bob marginal independent of Alice's setting (informational): "
            << "deviation " << fmt9(ir.bob_deviation) << "\n";

  const bool pass = vr.ok() && alice_ok && settings_ok;
  std::cout << (pass ? "VALID" : "INVALID") << "\n";
  return pass ? 0 : 2;
}

int cmd_gen(const std::string& scenario, const std::string& px_csv,
            const std::string& py_csv, const std::string& output) {
  std::optional<SettingsDistribution> settings;
  if (!px_csv.empty() || !py_csv.empty()) {
    Eigen::VectorXd px = px_csv.empty()
                             ? Eigen::VectorXd::Constant(2, 0.5)
                             : parse_marginal(px_csv, "--px");
    Eigen::VectorXd py = py_csv.empty()
                             ? Eigen::VectorXd::Constant(2, 0.5)
                             : parse_marginal(py_csv, "--py");
    settings = SettingsDistribution::product(px, py);
  }
  const Statistics stats = builtin_statistics(scenario, std::move(settings));
  write_output(output, dump(to_json(stats)));
  return 0;
}

int cmd_construct(const std::string& structure, const std::string& input,
                  const std::string& output) {
  const Statistics stats = load_statistics(input);
  const StructureTag tag = structure_from_string(structure);
  const CausalModel model = construct_structure(tag, stats, kTolFile);

  const Statistics check = eval_statistics(model);
  const double err = std::max(
      max_abs_difference(check.behaviour, stats.behaviour),
      (check.settings.joint() - stats.settings.joint()).cwiseAbs().maxCoeff());
  if (err > kTolFile)
    throw InternalError("constructed model reproduces input only to " +
                        fmt9(err));

  write_output(output, dump(to_json(model)));
  return 0;
}

int cmd_eval(const std::string& input, const std::string& output) {
  const CausalModel model = model_from_json(parse_json(read_input(input)));
  write_output(output, dump(to_json(eval_statistics(model))));
  return 0;
}

int cmd_fraction(const std::string& input, bool certify,
                 const std::string& output) {
  const Statistics stats = load_statistics(input);
  const FractionResult fr = causal_fraction(stats.behaviour, kTolFile);

  std::cout << "q = " << fmt9(fr.q) << "\n";
  for (const auto& [pair, w] : fr.local_weights) {
    std::cout << "w[" << function_digits(pair.f, fr.dims.nA, fr.dims.nX) << "|"
              << function_digits(pair.g, fr.dims.nB, fr.dims.nY)
              << "] = " << fmt9(w) << "\n";
  }
  if (certify && fr.chsh_certificate)
    std::cout << "dual_certificate = " << fmt9(*fr.chsh_certificate) << "\n";

  if (!output.empty()) write_output(output, dump(to_json(fr)));
  return 0;
}

int cmd_simulate(const std::string& input, const std::string& target,
                 std::int64_t n, std::uint64_t seed, const std::string& output) {
  const Statistics stats = load_statistics(input);
  const SimulationReport report =
      run_frugal(stats, structure_from_string(target), n, seed, kTolFile);
  write_output(output, dump(to_json(report)));
  return 0;
}

int cmd_chsh(const std::string& input) {
  const Statistics stats = load_statistics(input);
  std::cout << fmt9(chsh_value(stats.behaviour)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-experiment statistics, single-arrow causal models, and "
               "causal fractions"};
  app.require_subcommand(1);

  std::string input, output, scenario, structure, px_csv, py_csv;
  bool certify = false;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  auto* validate_cmd = app.add_subcommand(
      "validate", "Check normalization and independence of a statistics file");
  validate_cmd->add_option("input", input, "statistics JSON ('-' for stdin)")
      ->required();

  auto* gen_cmd = app.add_subcommand(
      "gen", "Emit a built-in scenario (singlet-chsh-optimal, prbox, werner:v)");
  gen_cmd->add_option("scenario", scenario, "scenario name")->required();
  gen_cmd->add_option("--px", px_csv, "Alice settings marginal, e.g. 0.3,0.7");
  gen_cmd->add_option("--py", py_csv, "Bob settings marginal, e.g. 0.6,0.4");
  gen_cmd->add_option("-o,--output", output, "output file ('-' for stdout)");

  auto* construct_cmd = app.add_subcommand(
      "construct", "Build a model of the given structure reproducing the input");
  construct_cmd->add_option("structure", structure, "one of nl, r, nf")
      ->required();
  construct_cmd->add_option("input", input, "statistics JSON")->required();
  construct_cmd->add_option("-o,--output", output, "model JSON output");

  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate a model's statistics");
  eval_cmd->add_option("input", input, "model JSON")->required();
  eval_cmd->add_option("-o,--output", output, "statistics JSON output");

  auto* fraction_cmd = app.add_subcommand(
      "fraction", "Minimal extra-arrow rate needed to reproduce a behaviour");
  fraction_cmd->add_option("input", input, "statistics JSON")->required();
  fraction_cmd->add_flag("--certify", certify,
                         "also print the Bell-inequality dual certificate");
  fraction_cmd->add_option("-o,--output", output, "full result JSON output");

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo run of the frugal protocol");
  simulate_cmd->add_option("input", input, "statistics JSON")->required();
  simulate_cmd->add_option("--target", structure, "one of nl, r, nf")
      ->required();
  simulate_cmd->add_option("-n,--trials", trials, "number of trials")
      ->required();
  simulate_cmd->add_option("--seed", seed, "random seed")->required();
  simulate_cmd->add_option("-o,--output", output, "report JSON output");

  auto* chsh_cmd = app.add_subcommand("chsh", "Print the CHSH value");
  chsh_cmd->add_option("input", input, "statistics JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json err{{"code", "usage"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(input);
    if (app.got_subcommand(gen_cmd)) return cmd_gen(scenario, px_csv, py_csv, output);
    if (app.got_subcommand(construct_cmd)) return cmd_construct(structure, input, output);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(input, output);
    if (app.got_subcommand(fraction_cmd)) return cmd_fraction(input, certify, output);
    if (app.got_subcommand(simulate_cmd)) return cmd_simulate(input, structure, trials, seed, output);
    if (app.got_subcommand(chsh_cmd)) return cmd_chsh(input);
    throw InternalError("no subcommand dispatched");
  } catch (const Error& e) {
    nlohmann::json err{{"code", e.code()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return e.exit_status();
  } catch (const std::exception& e) {
    nlohmann::json err{{"code", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 4;
  }
}

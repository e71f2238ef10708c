#include "bellfrac/json_io.hpp"

#include <string>
#include <vector>

namespace bellfrac {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ParseError("missing field '" + std::string(key) + "'");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    throw ParseError("field '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

const json& array(const json& v, std::size_t size, const char* what) {
  if (!v.is_array())
    throw ParseError(std::string(what) + " must be an array");
  if (v.size() != size)
    throw ShapeError(std::string(what) + " has " + std::to_string(v.size()) +
                     " entries, expected " + std::to_string(size));
  return v;
}

json behaviour_to_json(const Behaviour& b) {
  const auto& d = b.dims();
  json jx = json::array();
  for (int x = 0; x < d.nX; ++x) {
    json jy = json::array();
    for (int y = 0; y < d.nY; ++y) {
      json ja = json::array();
      for (int a = 0; a < d.nA; ++a) {
        json jb = json::array();
        for (int bb = 0; bb < d.nB; ++bb) jb.push_back(b(a, bb, x, y));
        ja.push_back(std::move(jb));
      }
      jy.push_back(std::move(ja));
    }
    jx.push_back(std::move(jy));
  }
  return jx;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows,
                                 Eigen::Index cols, const char* what) {
  const json& jr = array(j, std::size_t(rows), what);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = array(jr[std::size_t(r)], std::size_t(cols), what);
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = number(row[std::size_t(c)], what);
  }
  return m;
}

json vector_to_json(const Eigen::RowVectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::RowVectorXd vector_from_json(const json& j, Eigen::Index size,
                                    const char* what) {
  const json& ja = array(j, std::size_t(size), what);
  Eigen::RowVectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v[i] = number(ja[std::size_t(i)], what);
  return v;
}

std::string hidden_kind_name(HiddenSpace::Kind kind) {
  switch (kind) {
    case HiddenSpace::Kind::FunctionSpace: return "function-space";
    case HiddenSpace::Kind::FunctionTimesSettings: return "function-settings";
    case HiddenSpace::Kind::OutcomeTimesSettings: return "outcome-settings";
    case HiddenSpace::Kind::Opaque: return "opaque";
  }
  throw InternalError("unhandled hidden-space kind");
}

HiddenSpace::Kind hidden_kind_from_name(const std::string& s) {
  if (s == "function-space") return HiddenSpace::Kind::FunctionSpace;
  if (s == "function-settings") return HiddenSpace::Kind::FunctionTimesSettings;
  if (s == "outcome-settings") return HiddenSpace::Kind::OutcomeTimesSettings;
  if (s == "opaque") return HiddenSpace::Kind::Opaque;
  throw ParseError("unknown hidden-space kind '" + s + "'");
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

json to_json(const Statistics& stats) {
  const auto& d = stats.dims();
  json j;
  j["nA"] = d.nA;
  j["nB"] = d.nB;
  j["nX"] = d.nX;
  j["nY"] = d.nY;
  j["behaviour"] = behaviour_to_json(stats.behaviour);
  json settings = json::array();
  for (int x = 0; x < d.nX; ++x) {
    json row = json::array();
    for (int y = 0; y < d.nY; ++y) row.push_back(stats.settings(x, y));
    settings.push_back(std::move(row));
  }
  j["settings"] = std::move(settings);
  return j;
}

Statistics statistics_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("statistics must be a JSON object");
  const Cardinalities d(int_field(j, "nA"), int_field(j, "nB"),
                        int_field(j, "nX"), int_field(j, "nY"));

  Eigen::ArrayXd cells(d.cells());
  const json& jx = array(field(j, "behaviour"), std::size_t(d.nX), "behaviour");
  for (int x = 0; x < d.nX; ++x) {
    const json& jy = array(jx[std::size_t(x)], std::size_t(d.nY), "behaviour[x]");
    for (int y = 0; y < d.nY; ++y) {
      const json& ja = array(jy[std::size_t(y)], std::size_t(d.nA), "behaviour[x][y]");
      for (int a = 0; a < d.nA; ++a) {
        const json& jb =
            array(ja[std::size_t(a)], std::size_t(d.nB), "behaviour[x][y][a]");
        for (int bb = 0; bb < d.nB; ++bb)
          cells[Behaviour::index_of(d, a, bb, x, y)] =
              number(jb[std::size_t(bb)], "behaviour cell");
      }
    }
  }
  Behaviour behaviour(d, std::move(cells));

  if (const auto it = j.find("settings"); it != j.end() && !it->is_null()) {
    Eigen::MatrixXd pxy =
        matrix_from_json(*it, d.nX, d.nY, "settings");
    return Statistics(std::move(behaviour),
                      SettingsDistribution(std::move(pxy)));
  }
  return Statistics::with_uniform_settings(std::move(behaviour));
}

json to_json(const CausalModel& m) {
  const auto& d = m.dims();
  const Eigen::Index L = m.hidden().size;
  json j;
  j["tag"] = to_string(m.tag());
  j["dims"] = {{"nA", d.nA}, {"nB", d.nB}, {"nX", d.nX}, {"nY", d.nY}};
  j["hidden"] = {{"kind", hidden_kind_name(m.hidden().kind)},
                 {"size", L}};

  json pa = json::array();
  for (int x = 0; x < d.nX; ++x)
    pa.push_back(matrix_to_json(m.outcome_a().middleRows(Eigen::Index(x) * L, L)));
  j["p_a"] = std::move(pa);

  if (m.tag() == StructureTag::NonLocal) {
    json px_arr = json::array();
    for (int x = 0; x < d.nX; ++x) {
      json py_arr = json::array();
      for (int y = 0; y < d.nY; ++y)
        py_arr.push_back(matrix_to_json(
            m.outcome_b().middleRows((Eigen::Index(x) * d.nY + y) * L, L)));
      px_arr.push_back(std::move(py_arr));
    }
    j["p_b"] = std::move(px_arr);
  } else {
    json py_arr = json::array();
    for (int y = 0; y < d.nY; ++y)
      py_arr.push_back(
          matrix_to_json(m.outcome_b().middleRows(Eigen::Index(y) * L, L)));
    j["p_b"] = std::move(py_arr);
  }

  if (m.tag() == StructureTag::Retrocausal)
    j["p_lambda"] = matrix_to_json(m.hidden_weights());
  else
    j["p_lambda"] = vector_to_json(m.hidden_weights().row(0));

  if (m.tag() == StructureTag::NonFree)
    j["p_x"] = matrix_to_json(m.setting_x());
  else
    j["p_x"] = vector_to_json(m.setting_x().row(0));

  j["p_y"] = vector_to_json(m.setting_y());
  return j;
}

CausalModel model_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  const StructureTag tag =
      structure_from_string(field(j, "tag").get<std::string>());
  const json& jd = field(j, "dims");
  const Cardinalities d(int_field(jd, "nA"), int_field(jd, "nB"),
                        int_field(jd, "nX"), int_field(jd, "nY"));
  const json& jh = field(j, "hidden");
  HiddenSpace hidden{hidden_kind_from_name(field(jh, "kind").get<std::string>()),
                     Eigen::Index(int_field(jh, "size"))};
  if (hidden.size < 1 || hidden.size > kMaxHiddenStates)
    throw CapacityError("hidden space size out of range");
  const Eigen::Index L = hidden.size;

  Eigen::MatrixXd pa(Eigen::Index(d.nX) * L, d.nA);
  {
    const json& arr = array(field(j, "p_a"), std::size_t(d.nX), "p_a");
    for (int x = 0; x < d.nX; ++x)
      pa.middleRows(Eigen::Index(x) * L, L) =
          matrix_from_json(arr[std::size_t(x)], L, d.nA, "p_a[x]");
  }

  Eigen::MatrixXd pb;
  if (tag == StructureTag::NonLocal) {
    pb.resize(Eigen::Index(d.nX) * d.nY * L, d.nB);
    const json& arr = array(field(j, "p_b"), std::size_t(d.nX), "p_b");
    for (int x = 0; x < d.nX; ++x) {
      const json& ay = array(arr[std::size_t(x)], std::size_t(d.nY), "p_b[x]");
      for (int y = 0; y < d.nY; ++y)
        pb.middleRows((Eigen::Index(x) * d.nY + y) * L, L) =
            matrix_from_json(ay[std::size_t(y)], L, d.nB, "p_b[x][y]");
    }
  } else {
    pb.resize(Eigen::Index(d.nY) * L, d.nB);
    const json& arr = array(field(j, "p_b"), std::size_t(d.nY), "p_b");
    for (int y = 0; y < d.nY; ++y)
      pb.middleRows(Eigen::Index(y) * L, L) =
          matrix_from_json(arr[std::size_t(y)], L, d.nB, "p_b[y]");
  }

  Eigen::MatrixXd plambda;
  if (tag == StructureTag::Retrocausal)
    plambda = matrix_from_json(field(j, "p_lambda"), d.nX, L, "p_lambda");
  else
    plambda = vector_from_json(field(j, "p_lambda"), L, "p_lambda");

  Eigen::MatrixXd px;
  if (tag == StructureTag::NonFree)
    px = matrix_from_json(field(j, "p_x"), L, d.nX, "p_x");
  else
    px = vector_from_json(field(j, "p_x"), d.nX, "p_x");

  Eigen::RowVectorXd py = vector_from_json(field(j, "p_y"), d.nY, "p_y");

  return CausalModel(tag, d, hidden, std::move(pa), std::move(pb),
                     std::move(plambda), std::move(px), std::move(py));
}

json to_json(const FractionResult& fr) {
  json j;
  j["q"] = fr.q;
  switch (fr.status) {
    case FractionStatus::Solved: j["status"] = "solved"; break;
    case FractionStatus::Infeasible: j["status"] = "infeasible"; break;
    case FractionStatus::CapacityExceeded: j["status"] = "capacity-exceeded"; break;
  }
  j["dims"] = {{"nA", fr.dims.nA}, {"nB", fr.dims.nB},
               {"nX", fr.dims.nX}, {"nY", fr.dims.nY}};

  json weights = json::object();
  for (const auto& [pair, w] : fr.local_weights) {
    const std::string key =
        function_digits(pair.f, fr.dims.nA, fr.dims.nX) + "|" +
        function_digits(pair.g, fr.dims.nB, fr.dims.nY);
    weights[key] = w;
  }
  j["weights"] = std::move(weights);

  json jx = json::array();
  for (int x = 0; x < fr.dims.nX; ++x) {
    json jy = json::array();
    for (int y = 0; y < fr.dims.nY; ++y) {
      json ja = json::array();
      for (int a = 0; a < fr.dims.nA; ++a) {
        json jb = json::array();
        for (int bb = 0; bb < fr.dims.nB; ++bb)
          jb.push_back(fr.residual[Behaviour::index_of(fr.dims, a, bb, x, y)]);
        ja.push_back(std::move(jb));
      }
      jy.push_back(std::move(ja));
    }
    jx.push_back(std::move(jy));
  }
  j["residual"] = std::move(jx);

  if (fr.chsh_certificate) j["dual_certificate"] = *fr.chsh_certificate;
  j["iterations"] = fr.iterations;
  j["max_residual"] = fr.max_residual;
  return j;
}

json to_json(const SimulationReport& report) {
  json j;
  j["dims"] = {{"nA", report.dims.nA}, {"nB", report.dims.nB},
               {"nX", report.dims.nX}, {"nY", report.dims.nY}};
  j["target"] = to_string(report.target);
  j["n"] = report.n;
  j["seed"] = report.seed;
  j["q"] = report.q;
  j["empirical_q"] = report.empirical_arrow_frequency;
  j["chi_square"] = report.chi_square;
  j["p_value"] = report.p_value;
  j["max_cell_residual"] = report.max_cell_residual;

  json jx = json::array();
  for (int x = 0; x < report.dims.nX; ++x) {
    json jy = json::array();
    for (int y = 0; y < report.dims.nY; ++y) {
      json ja = json::array();
      for (int a = 0; a < report.dims.nA; ++a) {
        json jb = json::array();
        for (int bb = 0; bb < report.dims.nB; ++bb)
          jb.push_back(report.counts[std::size_t(
              Behaviour::index_of(report.dims, a, bb, x, y))]);
        ja.push_back(std::move(jb));
      }
      jy.push_back(std::move(ja));
    }
    jx.push_back(std::move(jy));
  }
  j["counts"] = std::move(jx);
  return j;
}

json to_json(const ValidationReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    json ji;
    switch (issue.kind) {
      case ValidationIssue::Kind::BehaviourRowSum: ji["kind"] = "behaviour-row-sum"; break;
      case ValidationIssue::Kind::SettingsSum: ji["kind"] = "settings-sum"; break;
      case ValidationIssue::Kind::NegativeEntry: ji["kind"] = "negative-entry"; break;
      case ValidationIssue::Kind::EntryAboveOne: ji["kind"] = "entry-above-one"; break;
    }
    if (issue.a >= 0) ji["a"] = issue.a;
    if (issue.b >= 0) ji["b"] = issue.b;
    if (issue.x >= 0) ji["x"] = issue.x;
    if (issue.y >= 0) ji["y"] = issue.y;
    ji["residual"] = issue.residual;
    issues.push_back(std::move(ji));
  }
  return {{"ok", report.ok()}, {"max_residual", report.max_residual},
          {"issues", std::move(issues)}};
}

json to_json(const IndependenceReport& report) {
  json j;
  j["alice_deviation"] = report.alice_deviation;
  if (report.alice_a >= 0)
    j["alice_witness"] = {{"a", report.alice_a}, {"x", report.alice_x},
                          {"y0", report.alice_y0}, {"y1", report.alice_y1}};
  j["settings_deviation"] = report.settings_deviation;
  if (report.settings_x >= 0)
    j["settings_witness"] = {{"x", report.settings_x}, {"y", report.settings_y}};
  j["bob_deviation"] = report.bob_deviation;
  if (report.bob_b >= 0)
    j["bob_witness"] = {{"b", report.bob_b}, {"y", report.bob_y},
                        {"x0", report.bob_x0}, {"x1", report.bob_x1}};
  return j;
}

}  // namespace bellfrac

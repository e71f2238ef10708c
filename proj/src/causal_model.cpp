#include "bellfrac/causal_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bellfrac/random.hpp"
#include "bellfrac/validation.hpp"

namespace bellfrac {

namespace {

// Row masses below this are treated as unreachable; the conditional row is
// replaced by the uniform distribution, which carries zero weight anyway.
constexpr double kZeroMass = 1e-14;

Eigen::RowVectorXd stochastic_row(Eigen::RowVectorXd raw) {
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw[i] = std::max(raw[i], 0.0);
  const double mass = raw.sum();
  if (mass <= kZeroMass)
    return Eigen::RowVectorXd::Constant(raw.size(), 1.0 / double(raw.size()));
  return raw / mass;
}

void require_stochastic(const Eigen::MatrixXd& table, const char* name) {
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    if (table.row(r).minCoeff() < -kTolExact)
      throw ValidationError(std::string(name) + " has a negative entry in row " +
                            std::to_string(r));
    if (std::abs(table.row(r).sum() - 1.0) > kTolExact)
      throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                            " does not sum to 1");
  }
}

Eigen::Index checked_power(int base, int length) {
  Eigen::Index n = 1;
  for (int i = 0; i < length; ++i) {
    n *= base;
    if (n > kMaxHiddenStates)
      throw CapacityError("function space " + std::to_string(base) + "^" +
                          std::to_string(length) + " exceeds " +
                          std::to_string(kMaxHiddenStates) + " states");
  }
  return n;
}

}  // namespace

std::string to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::Baseline: return "baseline";
    case StructureTag::NonLocal: return "nl";
    case StructureTag::Retrocausal: return "r";
    case StructureTag::NonFree: return "nf";
  }
  throw InternalError("unhandled structure tag");
}

StructureTag structure_from_string(std::string_view s) {
  if (s == "baseline") return StructureTag::Baseline;
  if (s == "nl") return StructureTag::NonLocal;
  if (s == "r") return StructureTag::Retrocausal;
  if (s == "nf") return StructureTag::NonFree;
  throw ParseError("unknown structure '" + std::string(s) + "'");
}

Eigen::Index function_space_size(int base, int length) {
  return checked_power(base, length);
}

int function_value(Eigen::Index f, int base, int length, int arg) {
  Eigen::Index divisor = 1;
  for (int i = 0; i < length - 1 - arg; ++i) divisor *= base;
  return int((f / divisor) % base);
}

std::string function_digits(Eigen::Index f, int base, int length) {
  std::string out;
  for (int arg = 0; arg < length; ++arg) {
    if (arg) out += '.';
    out += std::to_string(function_value(f, base, length, arg));
  }
  return out;
}

Eigen::Index function_from_digits(const std::string& digits, int base, int length) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = digits.find('.', pos);
    parts.push_back(digits.substr(pos, dot == std::string::npos
                                           ? std::string::npos
                                           : dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (int(parts.size()) != length)
    throw ParseError("expected " + std::to_string(length) + " digits in '" +
                     digits + "'");
  Eigen::Index f = 0;
  for (const auto& part : parts) {
    int v = -1;
    try {
      v = std::stoi(part);
    } catch (const std::exception&) {
      throw ParseError("bad digit '" + part + "' in '" + digits + "'");
    }
    if (v < 0 || v >= base)
      throw ParseError("digit out of range in '" + digits + "'");
    f = f * base + v;
  }
  return f;
}

HiddenSpace HiddenSpace::function_space(const Cardinalities& d) {
  return {Kind::FunctionSpace, checked_power(d.nA, d.nX)};
}

HiddenSpace HiddenSpace::function_times_settings(const Cardinalities& d) {
  const Eigen::Index n = checked_power(d.nA, d.nX) * d.nX;
  if (n > kMaxHiddenStates)
    throw CapacityError("hidden space exceeds " + std::to_string(kMaxHiddenStates));
  return {Kind::FunctionTimesSettings, n};
}

HiddenSpace HiddenSpace::outcome_times_settings(const Cardinalities& d) {
  return {Kind::OutcomeTimesSettings, Eigen::Index(d.nA) * d.nX};
}

HiddenSpace HiddenSpace::opaque(Eigen::Index n) {
  if (n < 1) throw ShapeError("hidden space must be non-empty");
  if (n > kMaxHiddenStates)
    throw CapacityError("hidden space exceeds " + std::to_string(kMaxHiddenStates));
  return {Kind::Opaque, n};
}

CausalModel::CausalModel(StructureTag tag, Cardinalities dims, HiddenSpace hidden,
                         Eigen::MatrixXd outcome_a, Eigen::MatrixXd outcome_b,
                         Eigen::MatrixXd hidden_weights, Eigen::MatrixXd setting_x,
                         Eigen::RowVectorXd setting_y)
    : tag_(tag),
      dims_(dims),
      hidden_(hidden),
      pa_(std::move(outcome_a)),
      pb_(std::move(outcome_b)),
      plambda_(std::move(hidden_weights)),
      px_(std::move(setting_x)),
      py_(std::move(setting_y)) {
  const Eigen::Index L = hidden_.size;
  const bool nl = tag_ == StructureTag::NonLocal;
  const bool r = tag_ == StructureTag::Retrocausal;
  const bool nf = tag_ == StructureTag::NonFree;

  auto expect = [](bool cond, const char* what) {
    if (!cond) throw ShapeError(std::string("causal model table shape: ") + what);
  };
  expect(pa_.rows() == Eigen::Index(dims_.nX) * L && pa_.cols() == dims_.nA,
         "outcome_a must be (nX*L) x nA");
  expect(pb_.rows() == (nl ? Eigen::Index(dims_.nX) * dims_.nY * L
                           : Eigen::Index(dims_.nY) * L) &&
             pb_.cols() == dims_.nB,
         nl ? "outcome_b must be (nX*nY*L) x nB" : "outcome_b must be (nY*L) x nB");
  expect(plambda_.rows() == (r ? dims_.nX : 1) && plambda_.cols() == L,
         r ? "hidden weights must be nX x L" : "hidden weights must be 1 x L");
  expect(px_.rows() == (nf ? L : 1) && px_.cols() == dims_.nX,
         nf ? "setting_x must be L x nX" : "setting_x must be 1 x nX");
  expect(py_.size() == dims_.nY, "setting_y must have nY entries");

  require_stochastic(pa_, "outcome_a");
  require_stochastic(pb_, "outcome_b");
  require_stochastic(plambda_, "hidden weights");
  require_stochastic(px_, "setting_x");
  require_stochastic(py_, "setting_y");
}

Statistics eval_statistics(const CausalModel& m) {
  const auto& d = m.dims();
  const Eigen::Index L = m.hidden().size;
  Eigen::ArrayXd cells(d.cells());
  Eigen::MatrixXd pxy(d.nX, d.nY);

  // Marginal of Alice's setting; conditioning weights for the behaviour.
  Eigen::VectorXd px_marginal(d.nX);
  Eigen::MatrixXd lambda_given_x(d.nX, L);
  switch (m.tag()) {
    case StructureTag::Baseline:
    case StructureTag::NonLocal:
      px_marginal = m.setting_x().row(0).transpose();
      lambda_given_x = m.hidden_weights().row(0).replicate(d.nX, 1);
      break;
    case StructureTag::Retrocausal:
      px_marginal = m.setting_x().row(0).transpose();
      lambda_given_x = m.hidden_weights();
      break;
    case StructureTag::NonFree: {
      const Eigen::RowVectorXd weights = m.hidden_weights().row(0);
      px_marginal = (weights * m.setting_x()).transpose();
      for (int x = 0; x < d.nX; ++x) {
        if (px_marginal[x] <= 0.0)
          throw DegenerateSetting("setting x=" + std::to_string(x) +
                                  " has zero probability under the model");
        lambda_given_x.row(x) =
            weights.cwiseProduct(m.setting_x().col(x).transpose()) /
            px_marginal[x];
      }
      break;
    }
  }

  for (int x = 0; x < d.nX; ++x) {
    for (int y = 0; y < d.nY; ++y) {
      for (int a = 0; a < d.nA; ++a) {
        const auto ua = m.outcome_a().block(Eigen::Index(x) * L, a, L, 1).array();
        for (int b = 0; b < d.nB; ++b) {
          const auto ub = m.outcome_b().block(m.b_row(x, y, 0), b, L, 1).array();
          cells[Behaviour::index_of(d, a, b, x, y)] =
              (ua * ub * lambda_given_x.row(x).transpose().array()).sum();
        }
      }
      pxy(x, y) = px_marginal[x] * m.setting_y()[y];
    }
  }

  return Statistics(Behaviour(d, std::move(cells)),
                    SettingsDistribution(std::move(pxy)));
}

Eigen::VectorXd decompose_deterministic(const Eigen::MatrixXd& pax) {
  const int nx = int(pax.rows());
  const int na = int(pax.cols());
  for (int x = 0; x < nx; ++x) {
    if (pax.row(x).minCoeff() < -kTolFile ||
        std::abs(pax.row(x).sum() - 1.0) > kTolFile)
      throw ValidationError("row " + std::to_string(x) +
                            " of p(a|x) is not a distribution");
  }
  const Eigen::Index n = function_space_size(na, nx);
  Eigen::VectorXd weights(n);
  for (Eigen::Index f = 0; f < n; ++f) {
    double w = 1.0;
    for (int x = 0; x < nx; ++x) w *= pax(x, function_value(f, na, nx, x));
    weights[f] = w;
  }
  return weights;
}

namespace {

struct ConstructionContext {
  Cardinalities dims;
  Eigen::MatrixXd pax;       // normalized p(a|x), rows x
  Eigen::VectorXd px, py;    // normalized settings marginals
};

ConstructionContext prepare_construction(const Statistics& stats, double tol) {
  const auto report = validate(stats, std::max(tol, kTolExact));
  if (!report.ok())
    throw ValidationError("statistics fail normalization (max residual " +
                          std::to_string(report.max_residual) + ")");
  const auto indep = check_independences(stats);
  if (!indep.passes(tol))
    throw IndependenceViolation(
        "statistics violate the required independences (alice deviation " +
        std::to_string(indep.alice_deviation) + ", settings deviation " +
        std::to_string(indep.settings_deviation) + ")");

  ConstructionContext ctx;
  ctx.dims = stats.dims();
  ctx.pax = alice_marginal(stats.behaviour, tol);
  for (Eigen::Index x = 0; x < ctx.pax.rows(); ++x)
    ctx.pax.row(x) = stochastic_row(ctx.pax.row(x));
  ctx.px = stochastic_row(stats.settings.marginal_x().transpose()).transpose();
  ctx.py = stochastic_row(stats.settings.marginal_y().transpose()).transpose();
  return ctx;
}

}  // namespace

CausalModel construct_nonlocal(const Statistics& stats, double tol) {
  const auto ctx = prepare_construction(stats, tol);
  const auto& d = ctx.dims;
  const HiddenSpace hidden = HiddenSpace::function_space(d);
  const Eigen::Index L = hidden.size;
  const auto& p = stats.behaviour;

  Eigen::MatrixXd pa = Eigen::MatrixXd::Zero(Eigen::Index(d.nX) * L, d.nA);
  Eigen::MatrixXd pb(Eigen::Index(d.nX) * d.nY * L, d.nB);
  Eigen::MatrixXd plambda(1, L);

  for (Eigen::Index f = 0; f < L; ++f) {
    double w = 1.0;
    for (int x = 0; x < d.nX; ++x) {
      const int fx = function_value(f, d.nA, d.nX, x);
      pa(Eigen::Index(x) * L + f, fx) = 1.0;
      w *= ctx.pax(x, fx);
      for (int y = 0; y < d.nY; ++y) {
        Eigen::RowVectorXd row(d.nB);
        for (int b = 0; b < d.nB; ++b) row[b] = p(fx, b, x, y);
        pb.row((Eigen::Index(x) * d.nY + y) * L + f) = stochastic_row(row);
      }
    }
    plambda(0, f) = w;
  }
  plambda.row(0) = stochastic_row(plambda.row(0));

  return CausalModel(StructureTag::NonLocal, d, hidden, std::move(pa),
                     std::move(pb), std::move(plambda), ctx.px.transpose(),
                     ctx.py.transpose());
}

CausalModel construct_retrocausal(const Statistics& stats, double tol) {
  const auto ctx = prepare_construction(stats, tol);
  const auto& d = ctx.dims;
  const HiddenSpace hidden = HiddenSpace::function_times_settings(d);
  const Eigen::Index L = hidden.size;
  const Eigen::Index nf = L / d.nX;
  const auto& p = stats.behaviour;

  Eigen::MatrixXd pa = Eigen::MatrixXd::Zero(Eigen::Index(d.nX) * L, d.nA);
  Eigen::MatrixXd pb(Eigen::Index(d.nY) * L, d.nB);
  Eigen::MatrixXd plambda = Eigen::MatrixXd::Zero(d.nX, L);

  Eigen::VectorXd pf(nf);
  for (Eigen::Index f = 0; f < nf; ++f) {
    double w = 1.0;
    for (int x = 0; x < d.nX; ++x) w *= ctx.pax(x, function_value(f, d.nA, d.nX, x));
    pf[f] = w;
  }
  pf = stochastic_row(pf.transpose()).transpose();

  for (Eigen::Index f = 0; f < nf; ++f) {
    for (int xt = 0; xt < d.nX; ++xt) {
      const Eigen::Index lambda = f * d.nX + xt;
      const int fxt = function_value(f, d.nA, d.nX, xt);
      for (int x = 0; x < d.nX; ++x)
        pa(Eigen::Index(x) * L + lambda, function_value(f, d.nA, d.nX, x)) = 1.0;
      for (int y = 0; y < d.nY; ++y) {
        Eigen::RowVectorXd row(d.nB);
        for (int b = 0; b < d.nB; ++b) row[b] = p(fxt, b, xt, y);
        pb.row(Eigen::Index(y) * L + lambda) = stochastic_row(row);
      }
      plambda(xt, lambda) = pf[f];
    }
  }

  return CausalModel(StructureTag::Retrocausal, d, hidden, std::move(pa),
                     std::move(pb), std::move(plambda), ctx.px.transpose(),
                     ctx.py.transpose());
}

CausalModel construct_nonfree(const Statistics& stats, double tol) {
  const auto ctx = prepare_construction(stats, tol);
  const auto& d = ctx.dims;
  for (int x = 0; x < d.nX; ++x)
    if (ctx.px[x] <= 0.0)
      throw DegenerateSetting("setting x=" + std::to_string(x) +
                              " has zero probability; the non-free model "
                              "cannot produce it");

  const HiddenSpace hidden = HiddenSpace::outcome_times_settings(d);
  const Eigen::Index L = hidden.size;
  const auto& p = stats.behaviour;

  Eigen::MatrixXd pa = Eigen::MatrixXd::Zero(Eigen::Index(d.nX) * L, d.nA);
  Eigen::MatrixXd pb(Eigen::Index(d.nY) * L, d.nB);
  Eigen::MatrixXd plambda(1, L);
  Eigen::MatrixXd px_given_lambda = Eigen::MatrixXd::Zero(L, d.nX);

  for (int at = 0; at < d.nA; ++at) {
    for (int xt = 0; xt < d.nX; ++xt) {
      const Eigen::Index lambda = Eigen::Index(at) * d.nX + xt;
      for (int x = 0; x < d.nX; ++x) pa(Eigen::Index(x) * L + lambda, at) = 1.0;
      for (int y = 0; y < d.nY; ++y) {
        Eigen::RowVectorXd row(d.nB);
        for (int b = 0; b < d.nB; ++b) row[b] = p(at, b, xt, y);
        pb.row(Eigen::Index(y) * L + lambda) = stochastic_row(row);
      }
      plambda(0, lambda) = ctx.pax(xt, at) * ctx.px[xt];
      px_given_lambda(lambda, xt) = 1.0;
    }
  }
  plambda.row(0) = stochastic_row(plambda.row(0));

  return CausalModel(StructureTag::NonFree, d, hidden, std::move(pa),
                     std::move(pb), std::move(plambda),
                     std::move(px_given_lambda), ctx.py.transpose());
}

CausalModel construct_structure(StructureTag tag, const Statistics& stats,
                                double tol) {
  switch (tag) {
    case StructureTag::NonLocal: return construct_nonlocal(stats, tol);
    case StructureTag::Retrocausal: return construct_retrocausal(stats, tol);
    case StructureTag::NonFree: return construct_nonfree(stats, tol);
    case StructureTag::Baseline:
      throw DimensionError("baseline cannot reproduce arbitrary statistics; "
                           "construct one of nl, r, nf");
  }
  throw InternalError("unhandled structure tag");
}

Trial sample_trial(const CausalModel& m, std::mt19937_64& rng) {
  const Eigen::Index L = m.hidden().size;
  Trial t;

  switch (m.tag()) {
    case StructureTag::Baseline:
    case StructureTag::NonLocal:
      t.lambda = sample_categorical(m.hidden_weights().row(0), rng);
      t.x = sample_categorical(m.setting_x().row(0), rng);
      t.y = sample_categorical(m.setting_y(), rng);
      break;
    case StructureTag::Retrocausal:
      t.x = sample_categorical(m.setting_x().row(0), rng);
      t.y = sample_categorical(m.setting_y(), rng);
      t.lambda = sample_categorical(m.hidden_weights().row(t.x), rng);
      break;
    case StructureTag::NonFree:
      t.lambda = sample_categorical(m.hidden_weights().row(0), rng);
      t.x = sample_categorical(m.setting_x().row(t.lambda), rng);
      t.y = sample_categorical(m.setting_y(), rng);
      break;
  }

  t.a = sample_categorical(m.outcome_a().row(Eigen::Index(t.x) * L + t.lambda), rng);
  t.b = sample_categorical(m.outcome_b().row(m.b_row(t.x, t.y, t.lambda)), rng);
  return t;
}

}  // namespace bellfrac

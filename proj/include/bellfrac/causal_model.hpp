#pragma once

#include <random>
#include <string>

#include "bellfrac/types.hpp"

namespace bellfrac {

/// Ceiling on hidden-variable space sizes (and on strategy-pair counts in the
/// fraction solver).
inline constexpr Eigen::Index kMaxHiddenStates = Eigen::Index(1) << 20;

/// The four causal structures. Baseline has no extra arrow; the other three
/// add exactly one: a setting acting on the remote outcome (NonLocal), a
/// setting acting on the hidden variable (Retrocausal), or the hidden
/// variable acting on a setting (NonFree).
enum class StructureTag { Baseline, NonLocal, Retrocausal, NonFree };

std::string to_string(StructureTag tag);
StructureTag structure_from_string(std::string_view s);

/// Number of functions from a `length`-element set to a `base`-element set;
/// throws CapacityError beyond kMaxHiddenStates.
Eigen::Index function_space_size(int base, int length);

/// Value f(arg) under the canonical encoding: a function is the digit string
/// f(0) f(1) ... f(length-1) read as a base-`base` numeral, f(0) most
/// significant. Enumeration order is therefore lexicographic in
/// (f(0), ..., f(length-1)).
int function_value(Eigen::Index f, int base, int length, int arg);

/// Dot-separated decimal digits "f(0).f(1)...", used in serialized keys.
std::string function_digits(Eigen::Index f, int base, int length);
Eigen::Index function_from_digits(const std::string& digits, int base, int length);

/// Hidden-variable index space. Canonical enumeration:
///  - FunctionSpace: functions X -> A ordered lexicographically (see above).
///  - FunctionTimesSettings: pairs (f, xt) with f major, index f*nX + xt.
///  - OutcomeTimesSettings: pairs (at, xt) with at major, index at*nX + xt.
///  - Opaque: caller-defined meaning.
struct HiddenSpace {
  enum class Kind { FunctionSpace, FunctionTimesSettings, OutcomeTimesSettings, Opaque };
  Kind kind = Kind::Opaque;
  Eigen::Index size = 0;

  static HiddenSpace function_space(const Cardinalities& d);
  static HiddenSpace function_times_settings(const Cardinalities& d);
  static HiddenSpace outcome_times_settings(const Cardinalities& d);
  static HiddenSpace opaque(Eigen::Index n);

  bool operator==(const HiddenSpace&) const = default;
};

/// A causal structure plus its full parameter tables over an explicit hidden
/// space of size L. Stochastic tables are row-stochastic matrices whose row
/// index flattens the conditioning variables:
///   outcome_a:  (x*L + lambda)            x nA
///   outcome_b:  (y*L + lambda)            x nB      (Baseline, R, NF)
///               ((x*nY + y)*L + lambda)   x nB      (NL only)
///   hidden:     1 x L                               (Baseline, NL, NF)
///               nX x L, row x                       (R only)
///   setting_x:  1 x nX                              (Baseline, NL, R)
///               L x nX, row lambda                  (NF only)
///   setting_y:  1 x nY
class CausalModel {
public:
  CausalModel(StructureTag tag, Cardinalities dims, HiddenSpace hidden,
              Eigen::MatrixXd outcome_a, Eigen::MatrixXd outcome_b,
              Eigen::MatrixXd hidden_weights, Eigen::MatrixXd setting_x,
              Eigen::RowVectorXd setting_y);

  StructureTag tag() const { return tag_; }
  const Cardinalities& dims() const { return dims_; }
  const HiddenSpace& hidden() const { return hidden_; }

  const Eigen::MatrixXd& outcome_a() const { return pa_; }
  const Eigen::MatrixXd& outcome_b() const { return pb_; }
  const Eigen::MatrixXd& hidden_weights() const { return plambda_; }
  const Eigen::MatrixXd& setting_x() const { return px_; }
  const Eigen::RowVectorXd& setting_y() const { return py_; }

  Eigen::Index a_row(int x, Eigen::Index lambda) const {
    return Eigen::Index(x) * hidden_.size + lambda;
  }
  Eigen::Index b_row(int x, int y, Eigen::Index lambda) const {
    const Eigen::Index yl = Eigen::Index(y) * hidden_.size + lambda;
    return tag_ == StructureTag::NonLocal
               ? Eigen::Index(x) * dims_.nY * hidden_.size + yl
               : yl;
  }

private:
  StructureTag tag_;
  Cardinalities dims_;
  HiddenSpace hidden_;
  Eigen::MatrixXd pa_, pb_, plambda_, px_;
  Eigen::RowVectorXd py_;
};

/// The statistics generated by the model's product formula. For NonFree the
/// behaviour conditions the hidden variable on the setting via Bayes' rule;
/// a setting the model can never produce raises DegenerateSetting.
Statistics eval_statistics(const CausalModel& m);

/// Weights over deterministic response functions reproducing a stochastic
/// table: p(a|x) = sum_f [a == f(x)] w_f with the canonical product choice
/// w_f = prod_x p(f(x)|x). `pax` has one row per x.
Eigen::VectorXd decompose_deterministic(const Eigen::MatrixXd& pax);

/// Builds a model of the given structure that reproduces `stats` exactly.
/// Inputs must pass check_independences at `tol`. construct_nonfree
/// additionally requires every Alice setting to have positive probability.
CausalModel construct_nonlocal(const Statistics& stats, double tol = kTolExact);
CausalModel construct_retrocausal(const Statistics& stats, double tol = kTolExact);
CausalModel construct_nonfree(const Statistics& stats, double tol = kTolExact);

CausalModel construct_structure(StructureTag tag, const Statistics& stats,
                                double tol = kTolExact);

struct Trial {
  int a = 0, b = 0, x = 0, y = 0;
  Eigen::Index lambda = 0;
};

/// One ancestral sample in the structure's topological order
/// (R draws x before lambda; NF draws x from lambda).
Trial sample_trial(const CausalModel& m, std::mt19937_64& rng);

}  // namespace bellfrac

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plrkit/catalog.hpp"
#include "plrkit/io.hpp"
#include "plrkit/orbit.hpp"
#include "plrkit/plr.hpp"
#include "plrkit/subdifferential.hpp"

namespace plrkit {

struct DeterminationInstance {
  std::string id;
  std::string description;
  Expression f;
  Expression g;
  Vector x_bar;
  double c = 1.0;
  double delta = 1.0;
  bool expect_equal = true;
  std::optional<double> expected_a;

  static DeterminationInstance from_json(const nlohmann::json& j, const std::string& where = "instance");
  static DeterminationInstance load(const std::string& path);

  /// The shipped instances: six positive pairs and three negative controls.
  static const std::vector<DeterminationInstance>& builtin();
  static const DeterminationInstance& builtin(const std::string& id);
};

nlohmann::json to_json(const DeterminationInstance& inst);

// ---------------------------------------------------------------------------
// Subdifferential-equality gate

struct EqualityOptions {
  double spacing = 0.0;  // 0: delta / 25
  int fan = 16;
  double tolerance = 1e-9;
};

struct EqualityWitness {
  Vector x;
  Vector direction;
  double support_f = 0.0;
  double support_g = 0.0;
};

struct EqualityReport {
  bool equal = false;
  std::size_t points = 0;
  std::size_t directions = 0;
  std::optional<EqualityWitness> witness;  // first sampled point and direction where one side fails to dominate
};

/// Mutual support-function domination of df and dg on a sample of B°(x_bar; delta).
/// Throws CoverageError when either oracle returns the empty set inside the ball.
EqualityReport verify_subdifferential_equality(const SubdifferentialOracle& of, const SubdifferentialOracle& og,
                                               const Vector& x_bar, double delta, const EqualityOptions& options = {});

// ---------------------------------------------------------------------------
// Slope-level core on a finite space

struct DilationRun {
  double dilation = 0.0;  // f_d = (1 + d) f1, map coefficient (1 + d) c, gap (1 + d) gap
  StarReport star;
  Orbit orbit;
  bool ends_at_min = false;
  std::optional<std::size_t> membership_failure;
  LengthBoundReport length;
  double sharp_bound = 0.0;  // f1(x0) / gap
  bool s1_monotone = false;
  SeriesReport series;
  bool series_ok = false;
  double min_conclusion = 0.0;  // min over the space of (f_d - g1)(y) - (f_d - g1)(x_bar)
  std::optional<PointIndex> conclusion_witness;
  bool ok = false;
};

struct CoreOptions {
  double gap = 0.5;
  std::vector<double> dilations{0.5, 0.1, 0.01};
  double regular_tolerance = 1e-9;
  double slope_tolerance = 1e-9;
  double mixed_slack = 1e-9;
  double conclusion_tolerance = 1e-9;
};

struct CoreReport {
  RegularSlopeCertificate regular;  // f1 at coefficient c with `regular_slopes`
  bool slope_domination_ok = false;  // slope_g1 <= slope_f1 + tolerance
  std::optional<PointIndex> slope_domination_witness;
  RegularSlopeCertificate mixed;  // g1 against slope_f1
  bool gap_ok = false;
  std::optional<PointIndex> gap_witness;
  std::vector<DilationRun> dilations;
  bool ok = false;
  std::string failure;
};

/// Checks the hypotheses of the slope determination result on a finite space and runs the
/// dilated orbit machinery from x0. f1 and g1 must share a space; x_bar is the sharp minimum of f1.
CoreReport slope_determination_core(const ScalarField& f1, const ScalarField& g1,
                                    std::span<const ExtReal> regular_slopes, std::span<const ExtReal> slope_f1,
                                    std::span<const ExtReal> slope_g1, double c, PointIndex x_bar, PointIndex x0,
                                    const CoreOptions& options = {});

// ---------------------------------------------------------------------------
// One-sided pipeline and the full harness

struct DeterminationSampling {
  double h = 1e-2;
  double eps_factor = 4.0;  // slope resolution eps = eps_factor * h
  EqualityOptions gate;
  PlrSampling plr;
  CoreOptions core;
  int extra_centers = 4;  // fixed off-lattice centers besides x_bar
};

struct OneSidedReport {
  std::string direction;  // "f>=g" or "g>=f"
  Vector center;
  Vector target;
  Vector x0;
  double delta_c = 0.0;
  double delta_prime = 0.0;
  double h = 0.0;
  double eps = 0.0;
  double nu = 0.0;
  double alpha_max = 0.0;
  double alpha = 0.0;
  bool alpha_ok = false;
  Vector p;
  std::size_t y_points = 0;
  bool y_bounded = false;
  SharpMinReport sharp;
  CoreReport core;
  double margin = 0.0;  // (f - g)(x0) - (f - g)(center) in the run's orientation
  double tolerance = 0.0;
  bool margin_ok = false;
  bool ok = false;
  std::string failure;
};

/// The one-sided lemma at `center`: PLR on B°(center; delta - |center - x_bar|), target in the open
/// delta'-ball. Runs the whole pipeline on a grid of spacing h anchored at `center`.
OneSidedReport run_one_sided(const Expression& f, const Expression& g, const Vector& x_bar, double c, double delta,
                             const Vector& center, const Vector& target, const DeterminationSampling& sampling,
                             const std::string& direction = "f>=g");

struct SampleRow {
  Vector x;
  double f = 0.0;
  double g = 0.0;
  double deviation = 0.0;  // f - g - a
  ExtReal slope_f = 0.0;
  ExtReal slope_g = 0.0;
};

struct DeterminationReport {
  std::string id;
  double c = 0.0;
  double delta = 0.0;
  double c_prime = 0.0;
  double delta_prime = 0.0;
  double delta_hat = 0.0;
  double h = 0.0;
  double eps = 0.0;

  bool plr_f = false;
  bool plr_g = false;
  std::optional<PlrViolation> plr_witness;
  EqualityReport gate;
  bool expect_equal = true;
  bool ran = false;

  double a = 0.0;
  std::optional<double> expected_a;
  bool a_ok = false;
  double max_deviation = 0.0;
  double certified_deviation = 0.0;  // one-sided deficits plus the lattice covering term
  double tolerance = 0.0;
  bool deviation_ok = false;
  bool density_ok = false;
  bool two_sided_ok = false;
  std::vector<OneSidedReport> runs;
  std::vector<SampleRow> samples;

  bool pass = false;
  std::string failure;
};

DeterminationReport run_determination(const DeterminationInstance& inst, const DeterminationSampling& sampling = {});

/// Fixed centers x_bar + delta_hat * u_k with |u_k| < 1; independent of h.
std::vector<Vector> determination_centers(const Vector& x_bar, double delta_hat, int extra);

}  // namespace plrkit

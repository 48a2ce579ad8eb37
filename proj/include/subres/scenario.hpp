#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subres/coefficient.hpp"
#include "subres/csv.hpp"
#include "subres/direct_solver.hpp"
#include "subres/envelope_model.hpp"
#include "subres/spectral_sums.hpp"
#include "subres/sweep.hpp"
#include "subres/wkb.hpp"

namespace subres {

/// Everything a run can be configured with. Config files are flat JSON
/// objects whose keys are the field names below; command-line flags are
/// applied on top.
struct ScenarioConfig {
  double k = 2.0;
  double p = 5.0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> kappa;
  std::optional<double> lambda;

  double t_end = 2e4;
  double dt = kDefaultStep;
  double abs_tol = 1e-3;
  std::size_t max_terms = 1'000'000;
  std::size_t output_stride = kDefaultStride;
  bool tabulated = false;

  // slow-envelope runs
  std::optional<double> tau0;
  double tau_end = 50.0;
  double dtau = 1e-3;
  double theta0 = 1.0;
  double theta_end = 1e4;
  double dtheta = 0.01;
  double w0 = 1.0;
  double v0 = 0.0;
  std::optional<double> b_coef;
  bool closed_form = false;

  // constants
  std::size_t fit_samples = 16;
  double fit_t_min = 1e3;
  double fit_t_max = 1e5;

  GridSpec grid;
  double growth_factor = 3.0;

  std::optional<std::string> out;
  std::optional<std::string> gnuplot;
  unsigned threads = 1;
  bool long_run = false;

  CoefficientSpec spec() const { return {k, p}; }
};

/// Applies the keys of a flat JSON object; throws UsageError on unknown keys
/// or wrongly typed values.
void apply_json(ScenarioConfig& config, const nlohmann::json& object);

/// Reads and applies a JSON config file.
void apply_config_file(ScenarioConfig& config, const std::string& path);

enum class Parameterization { none, delta, kappa, lambda };

/// Which of delta / kappa / lambda was given. Throws UsageError when more
/// than one is present.
Parameterization parameterization(const ScenarioConfig& config);

/// Detuning implied by the configuration (delta directly, or reconstructed
/// from kappa or lambda with the derived gamma and B). Throws UsageError when
/// nothing or too little is given.
double resolve_delta(const ScenarioConfig& config, const AsymptoticConstants& constants);

/// Worker count: SUBRES_THREADS if set, else the hardware concurrency.
unsigned default_threads();

struct VariantRow {
  std::string label;
  double gamma;
  double kappa;
  double lambda;
  double theta_star;
  double t_turn;
};

struct ComparisonReport {
  AsymptoticConstants constants;
  double delta = 0.0;
  double epsilon = 0.0;
  double omega = 1.0;
  double gamma = 0.0;
  double b_coef = 0.0;
  double kappa = 0.0;
  std::optional<double> lambda;
  std::optional<TurningPoint> turning;
  std::optional<double> t_turn;         ///< theta*_exact / (kappa epsilon^gamma)
  std::optional<double> t_turn_approx;  ///< lambda^{1/alpha} / (kappa epsilon^gamma)
  std::optional<double> theta_peak_envelope;
  std::optional<double> t_peak_envelope;
  std::optional<double> envelope_discrepancy;  ///< |theta_peak - theta*| / theta*
  std::optional<double> t_peak_direct;
  std::optional<double> direct_horizon;
  std::optional<double> direct_discrepancy;  ///< |t_peak - T| / T
  std::vector<VariantRow> variants;
  std::vector<std::string> notes;
};

/// Constants -> gamma, B -> kappa -> lambda -> theta* -> T, then the
/// envelope-model saturation. With `run_long` the direct equation is also
/// integrated to 4 T (tabulated coefficient, renormalized) and its envelope
/// peak located. Requires epsilon > 0 and a resolvable delta.
ComparisonReport build_comparison(const ScenarioConfig& config, bool run_long);

std::string format_report(const ComparisonReport& report);

/// key,value rows of every reported quantity.
csv::Table comparison_table(const ComparisonReport& report);

}  // namespace subres

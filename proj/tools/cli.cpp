#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subres/csv.hpp"
#include "subres/error.hpp"
#include "subres/scenario.hpp"

namespace subres::cli {

namespace {

/// Flag values; only the ones actually given override the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<double> k, p, epsilon, delta, kappa, lambda, t_end, dt, abs_tol;
  std::optional<std::size_t> max_terms, output_stride;
  std::optional<std::string> out, gnuplot;
  std::optional<unsigned> threads;
  bool tabulated = false;
  // envelope
  std::optional<double> tau0, tau_end, dtau, theta0, theta_end, dtheta, w0, v0, b_coef;
  bool closed_form = false;
  // constants
  std::optional<std::size_t> fit_samples;
  // sweep
  std::optional<double> delta_min, delta_max, epsilon_min, epsilon_max, growth_factor;
  std::optional<std::size_t> delta_count, epsilon_count;
  // compare
  bool long_run = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON scenario file (flat keys)");
  cmd->add_option("--k", f.k, "decay exponent k of the coefficient amplitudes (k > 1)");
  cmd->add_option("--p", f.p, "frequency exponent p (p > 0)");
  cmd->add_option("--epsilon", f.epsilon, "forcing strength");
  cmd->add_option("--delta", f.delta, "detuning, omega = 1 + delta");
  cmd->add_option("--kappa", f.kappa, "scaled detuning delta/epsilon^gamma");
  cmd->add_option("--lambda", f.lambda, "rescaled coupling B kappa^(alpha-1)");
  cmd->add_option("--t-end", f.t_end, "final time");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--abs-tol", f.abs_tol, "truncation tail tolerance for q(t)");
  cmd->add_option("--max-terms", f.max_terms, "upper bound on coefficient modes");
  cmd->add_option("--stride", f.output_stride, "steps between output samples");
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--threads", f.threads, "worker threads (default: SUBRES_THREADS or all cores)");
}

template <class T>
void take(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

template <class T>
void take(const std::optional<T>& flag, std::optional<T>& field) {
  if (flag) field = *flag;
}

ScenarioConfig resolve(const Flags& f) {
  ScenarioConfig c;
  c.threads = default_threads();
  if (f.config) apply_config_file(c, *f.config);
  take(f.k, c.k);
  take(f.p, c.p);
  take(f.epsilon, c.epsilon);
  // A flag parameterization replaces whatever the file chose.
  if (f.delta || f.kappa || f.lambda) {
    c.delta = f.delta;
    c.kappa = f.kappa;
    c.lambda = f.lambda;
  }
  take(f.t_end, c.t_end);
  take(f.dt, c.dt);
  take(f.abs_tol, c.abs_tol);
  take(f.max_terms, c.max_terms);
  take(f.output_stride, c.output_stride);
  take(f.out, c.out);
  take(f.gnuplot, c.gnuplot);
  take(f.threads, c.threads);
  if (f.tabulated) c.tabulated = true;
  take(f.tau0, c.tau0);
  take(f.tau_end, c.tau_end);
  take(f.dtau, c.dtau);
  take(f.theta0, c.theta0);
  take(f.theta_end, c.theta_end);
  take(f.dtheta, c.dtheta);
  take(f.w0, c.w0);
  take(f.v0, c.v0);
  take(f.b_coef, c.b_coef);
  if (f.closed_form) c.closed_form = true;
  take(f.fit_samples, c.fit_samples);
  take(f.delta_min, c.grid.delta_min);
  take(f.delta_max, c.grid.delta_max);
  take(f.delta_count, c.grid.delta_count);
  take(f.epsilon_min, c.grid.epsilon_min);
  take(f.epsilon_max, c.grid.epsilon_max);
  take(f.epsilon_count, c.grid.epsilon_count);
  take(f.growth_factor, c.growth_factor);
  if (f.long_run) c.long_run = true;
  if (c.threads == 0) c.threads = 1;
  return c;
}

void emit(const ScenarioConfig& c, const csv::Table& table, std::ostream& out) {
  if (c.out) {
    csv::write_file(*c.out, table);
    out << "wrote " << table.rows.size() << " rows to " << *c.out << '\n';
  } else {
    out << csv::write(table);
  }
}

void emit_gnuplot(const ScenarioConfig& c, const std::string& columns, const std::string& title) {
  if (!c.gnuplot) return;
  if (!c.out) throw UsageError("--gnuplot needs --out so the script has a data file to plot");
  std::ofstream script(*c.gnuplot);
  if (!script) throw Error("cannot open '" + *c.gnuplot + "' for writing");
  script << "set datafile separator ','\n"
         << "set key autotitle columnhead\n"
         << "set title '" << title << "'\n"
         << "plot '" << *c.out << "' using " << columns << " with lines\n";
}

int cmd_constants(const ScenarioConfig& c, std::ostream& out) {
  const CoefficientSpec spec = c.spec();
  const auto started = std::chrono::steady_clock::now();
  const AsymptoticConstants k = constants(spec);
  const MellinReference mellin = mellin_reference(spec);
  out << "k = " << csv::format_number(c.k) << ", p = " << csv::format_number(c.p) << '\n'
      << "quadrature\n"
      << "  alpha      " << csv::format_number(k.alpha) << '\n'
      << "  C_s        " << csv::format_number(k.c_s) << '\n'
      << "  C_c        " << csv::format_number(k.c_c) << '\n'
      << "  A_alpha    " << csv::format_number(k.a_alpha) << '\n'
      << "  phi_alpha  " << csv::format_number(k.phi_alpha) << '\n'
      << "full-range Mellin limits\n"
      << "  sine       " << csv::format_number(mellin.sine) << '\n'
      << "  versine    " << csv::format_number(mellin.versine) << '\n';

  if (c.fit_samples > 0) {
    out << "lattice fit over t in [" << csv::format_number(c.fit_t_min) << ", "
        << csv::format_number(c.fit_t_max) << "], " << c.fit_samples << " samples\n";
    for (auto kind : {LatticeKind::sine, LatticeKind::versine}) {
      const auto samples =
          sample_lattice_sum(spec, kind, c.fit_t_min, c.fit_t_max, c.fit_samples, c.threads);
      const PowerLawFit fit = fit_asymptotic_constant(samples, k.alpha);
      const double reference = kind == LatticeKind::sine ? k.c_s : std::abs(k.c_c);
      const char* name = kind == LatticeKind::sine ? "sine   " : "versine";
      out << "  " << name << " constant " << csv::format_number(fit.constant) << " vs "
          << csv::format_number(reference) << " (rel. diff "
          << csv::format_number(std::abs(fit.constant - reference) / reference) << "), exponent "
          << csv::format_number(fit.exponent) << " vs " << csv::format_number(1.0 - k.alpha) << '\n';
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << "elapsed " << csv::format_number(std::round(seconds * 1000.0) / 1000.0) << " s\n";
  return kOk;
}

int cmd_simulate(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
  const CoefficientSpec spec = c.spec();
  const double epsilon = c.epsilon.value_or(0.0);
  double delta = 0.0;
  if (parameterization(c) != Parameterization::none) delta = resolve_delta(c, constants(spec));
  const std::size_t n_terms = truncation_order(spec, {c.abs_tol, c.max_terms, c.t_end});
  const OscillatorParams params{delta, epsilon, spec, n_terms};
  const SolverOptions options{c.tabulated ? CoefficientMode::tabulated : CoefficientMode::direct};
  const Trajectory traj = integrate(params, {0.0, 1.0, 0.0}, c.t_end, c.dt, c.output_stride, options);
  emit(c, csv::trajectory_table(traj), out);
  emit_gnuplot(c, "1:4", "envelope");
  if (traj.truncated) {
    err << "state overflowed at t = "
        << csv::format_number(traj.samples.empty() ? 0.0 : traj.samples.back().t)
        << "; trajectory truncated\n";
    return kNumeric;
  }
  if (traj.samples.size() >= 100) {
    err << "verdict: " << to_string(classify_growth(traj, c.growth_factor)) << " (ratio "
        << csv::format_number(growth_ratio(traj)) << ")\n";
  }
  return kOk;
}

int cmd_envelope(const ScenarioConfig& c, std::ostream& out) {
  const auto which = parameterization(c);
  if (which == Parameterization::none) throw UsageError("envelope needs one of --delta, --kappa, --lambda");
  const CoefficientSpec spec = c.spec();
  const double alpha_value = alpha(spec);

  if (which == Parameterization::lambda) {
    if (c.closed_form) throw UsageError("--closed-form applies to kappa = 0 runs only");
    const EnvelopeRun run = integrate_theta_form(*c.lambda, alpha_value, {c.theta0, c.w0, c.v0, 0.0},
                                                 c.theta_end, c.dtheta, c.output_stride);
    emit(c, csv::envelope_table(run, true), out);
    emit_gnuplot(c, "1:4", "log norm (theta form)");
    return run.truncated ? kNumeric : kOk;
  }

  const AsymptoticConstants k = constants(spec);
  EnvelopeParams params;
  if (which == Parameterization::delta) {
    if (!c.epsilon) throw UsageError("envelope with --delta needs --epsilon");
    params = make_envelope_params(k, *c.delta, *c.epsilon);
  } else {
    const double delta = c.epsilon ? delta_of_kappa(*c.kappa, *c.epsilon, derive_gamma(k.alpha)) : 0.0;
    params = make_envelope_params(k, delta, c.epsilon.value_or(1.0));
    params.kappa = *c.kappa;
  }
  if (c.b_coef) params.b_coef = *c.b_coef;

  const double tau0 = c.tau0.value_or(10.0 * c.dtau);
  const EnvelopeRun run =
      integrate_envelope(params, {tau0, c.w0, c.v0, 0.0}, c.tau_end, c.dtau, c.output_stride);
  csv::Table table = csv::envelope_table(run, false);
  if (c.closed_form) {
    if (params.kappa != 0.0) throw UsageError("--closed-form applies to kappa = 0 runs only");
    table.header.insert(table.header.end(), {"w_closed", "v_closed"});
    for (std::size_t i = 0; i < run.states.size(); ++i) {
      const auto [w, v] = closed_form_kappa0(params.b_coef, params.alpha, tau0, {c.w0, c.v0},
                                             run.states[i].tau);
      table.rows[i].push_back(csv::format_number(w));
      table.rows[i].push_back(csv::format_number(v));
    }
  }
  emit(c, table, out);
  emit_gnuplot(c, "1:4", "log norm");
  return run.truncated ? kNumeric : kOk;
}

int cmd_sweep(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
  GridSpec grid = c.grid;
  grid.t_end = c.t_end;
  grid.dt = c.dt;
  grid.growth_factor = c.growth_factor;
  SweepOptions options;
  options.threads = c.threads;
  options.abs_tol = c.abs_tol;
  options.max_terms = c.max_terms;
  options.output_stride = c.output_stride;
  const StabilityMap map = stability_map(grid, c.spec(), options);
  emit(c, csv::stability_table(map), out);
  emit_gnuplot(c, "1:2:(strcol(3) eq 'growing' ? 1 : 0)", "stability map");
  for (std::size_t j = 0; j < grid.epsilon_count; ++j) {
    err << "epsilon " << csv::format_number(grid.epsilon_at(j)) << ": ";
    const auto bands = resonance_band_edges(map, j);
    if (bands.empty()) err << "all bounded";
    for (const auto& [lo, hi] : bands) {
      err << "[" << csv::format_number(lo) << ", " << csv::format_number(hi) << "] ";
    }
    err << '\n';
  }
  return kOk;
}

int cmd_compare(const ScenarioConfig& c, std::ostream& out) {
  const ComparisonReport report = build_comparison(c, c.long_run);
  out << format_report(report);
  if (c.out) {
    csv::write_file(*c.out, comparison_table(report));
    out << "wrote report table to " << *c.out << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametric subresonance laboratory"};
  app.require_subcommand(1);
  Flags f;

  auto* constants_cmd = app.add_subcommand("constants", "asymptotic constants and lattice-sum check");
  add_common(constants_cmd, f);
  constants_cmd->add_option("--fit-samples", f.fit_samples, "lattice samples for the fit (0 skips it)");

  auto* simulate_cmd = app.add_subcommand("simulate", "direct integration, writes t,u,du,envelope");
  add_common(simulate_cmd, f);
  simulate_cmd->add_flag("--tabulated", f.tabulated, "evaluate q(t) by phasor recurrence");
  simulate_cmd->add_option("--growth-factor", f.growth_factor, "growth threshold for the verdict");
  simulate_cmd->add_option("--gnuplot", f.gnuplot, "also write a gnuplot script");

  auto* envelope_cmd = app.add_subcommand("envelope", "slow-envelope system, writes tau,w,v,log_norm");
  add_common(envelope_cmd, f);
  envelope_cmd->add_option("--tau0", f.tau0, "initial slow time (default 10*dtau)");
  envelope_cmd->add_option("--tau-end", f.tau_end, "final slow time");
  envelope_cmd->add_option("--dtau", f.dtau, "slow-time step");
  envelope_cmd->add_option("--theta0", f.theta0, "initial theta (lambda form)");
  envelope_cmd->add_option("--theta-end", f.theta_end, "final theta (lambda form)");
  envelope_cmd->add_option("--dtheta", f.dtheta, "theta step (lambda form)");
  envelope_cmd->add_option("--w0", f.w0, "initial w");
  envelope_cmd->add_option("--v0", f.v0, "initial v");
  envelope_cmd->add_option("--b-coef", f.b_coef, "override B = A/(4 omega)");
  envelope_cmd->add_flag("--closed-form", f.closed_form, "append the kappa = 0 closed form");
  envelope_cmd->add_option("--gnuplot", f.gnuplot, "also write a gnuplot script");

  auto* sweep_cmd = app.add_subcommand("sweep", "bounded/growing map over (delta, epsilon)");
  add_common(sweep_cmd, f);
  sweep_cmd->add_option("--delta-min", f.delta_min);
  sweep_cmd->add_option("--delta-max", f.delta_max);
  sweep_cmd->add_option("--delta-count", f.delta_count);
  sweep_cmd->add_option("--epsilon-min", f.epsilon_min);
  sweep_cmd->add_option("--epsilon-max", f.epsilon_max);
  sweep_cmd->add_option("--epsilon-count", f.epsilon_count);
  sweep_cmd->add_option("--growth-factor", f.growth_factor);
  sweep_cmd->add_option("--gnuplot", f.gnuplot, "also write a gnuplot script");

  auto* compare_cmd = app.add_subcommand("compare", "turning point: asymptotics vs numerics");
  add_common(compare_cmd, f);
  compare_cmd->add_flag("--long", f.long_run, "also integrate the full equation past T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const ScenarioConfig config = resolve(f);
    if (constants_cmd->parsed()) return cmd_constants(config, out);
    if (simulate_cmd->parsed()) return cmd_simulate(config, out, err);
    if (envelope_cmd->parsed()) return cmd_envelope(config, out);
    if (sweep_cmd->parsed()) return cmd_sweep(config, out, err);
    if (compare_cmd->parsed()) return cmd_compare(config, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace subres::cli

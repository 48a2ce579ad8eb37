#include "subres/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "subres/error.hpp"

namespace subres {

namespace {

using nlohmann::json;

template <class T>
T get(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& value, const std::string& key) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw UsageError("config key '" + key + "' must be a nonnegative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

void apply_json(ScenarioConfig& c, const json& object) {
  if (!object.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (key == "k") c.k = get<double>(value, key);
    else if (key == "p") c.p = get<double>(value, key);
    else if (key == "epsilon") c.epsilon = get<double>(value, key);
    else if (key == "delta") c.delta = get<double>(value, key);
    else if (key == "kappa") c.kappa = get<double>(value, key);
    else if (key == "lambda") c.lambda = get<double>(value, key);
    else if (key == "t_end") c.t_end = get<double>(value, key);
    else if (key == "dt") c.dt = get<double>(value, key);
    else if (key == "abs_tol") c.abs_tol = get<double>(value, key);
    else if (key == "max_terms") c.max_terms = get_count(value, key);
    else if (key == "output_stride") c.output_stride = get_count(value, key);
    else if (key == "tabulated") c.tabulated = get<bool>(value, key);
    else if (key == "tau0") c.tau0 = get<double>(value, key);
    else if (key == "tau_end") c.tau_end = get<double>(value, key);
    else if (key == "dtau") c.dtau = get<double>(value, key);
    else if (key == "theta0") c.theta0 = get<double>(value, key);
    else if (key == "theta_end") c.theta_end = get<double>(value, key);
    else if (key == "dtheta") c.dtheta = get<double>(value, key);
    else if (key == "w0") c.w0 = get<double>(value, key);
    else if (key == "v0") c.v0 = get<double>(value, key);
    else if (key == "b_coef") c.b_coef = get<double>(value, key);
    else if (key == "closed_form") c.closed_form = get<bool>(value, key);
    else if (key == "fit_samples") c.fit_samples = get_count(value, key);
    else if (key == "fit_t_min") c.fit_t_min = get<double>(value, key);
    else if (key == "fit_t_max") c.fit_t_max = get<double>(value, key);
    else if (key == "delta_min") c.grid.delta_min = get<double>(value, key);
    else if (key == "delta_max") c.grid.delta_max = get<double>(value, key);
    else if (key == "delta_count") c.grid.delta_count = get_count(value, key);
    else if (key == "epsilon_min") c.grid.epsilon_min = get<double>(value, key);
    else if (key == "epsilon_max") c.grid.epsilon_max = get<double>(value, key);
    else if (key == "epsilon_count") c.grid.epsilon_count = get_count(value, key);
    else if (key == "growth_factor") c.growth_factor = get<double>(value, key);
    else if (key == "out") c.out = get<std::string>(value, key);
    else if (key == "gnuplot") c.gnuplot = get<std::string>(value, key);
    else if (key == "threads") c.threads = static_cast<unsigned>(get_count(value, key));
    else if (key == "long") c.long_run = get<bool>(value, key);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

void apply_config_file(ScenarioConfig& config, const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read config file '" + path + "'");
  json object;
  try {
    object = json::parse(file);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  apply_json(config, object);
}

Parameterization parameterization(const ScenarioConfig& c) {
  const int given = int(c.delta.has_value()) + int(c.kappa.has_value()) + int(c.lambda.has_value());
  if (given > 1) {
    throw UsageError("give exactly one of delta, kappa or lambda; derived values are never double-specified");
  }
  if (c.delta) return Parameterization::delta;
  if (c.kappa) return Parameterization::kappa;
  if (c.lambda) return Parameterization::lambda;
  return Parameterization::none;
}

double resolve_delta(const ScenarioConfig& c, const AsymptoticConstants& constants) {
  const auto which = parameterization(c);
  if (which == Parameterization::none) throw UsageError("one of delta, kappa or lambda is required");
  if (which == Parameterization::delta) return *c.delta;
  if (!c.epsilon) throw UsageError("reconstructing delta from kappa or lambda needs epsilon");
  const double gamma = derive_gamma(constants.alpha);
  if (which == Parameterization::kappa) return delta_of_kappa(*c.kappa, *c.epsilon, gamma);
  // B depends on omega = 1 + delta; a few fixed-point passes settle it.
  double delta = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double b = derive_b(constants.a_alpha, 1.0 + delta);
    delta = delta_of_kappa(derive_kappa_from_lambda(b, *c.lambda, constants.alpha), *c.epsilon, gamma);
  }
  return delta;
}

unsigned default_threads() {
  if (const char* env = std::getenv("SUBRES_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

VariantRow variant(std::string label, double gamma, double kappa, double lambda, double alpha,
                   double epsilon) {
  const double theta_star = lambda > 1.0 ? std::pow(lambda, 1.0 / alpha) : std::nan("");
  const double t_turn = kappa > 0.0 ? theta_star / (kappa * std::pow(epsilon, gamma)) : std::nan("");
  return {std::move(label), gamma, kappa, lambda, theta_star, t_turn};
}

}  // namespace

ComparisonReport build_comparison(const ScenarioConfig& config, bool run_long) {
  if (!config.epsilon || !(*config.epsilon > 0.0)) {
    throw DomainError("compare needs epsilon > 0");
  }
  ComparisonReport r;
  const CoefficientSpec spec = config.spec();
  r.constants = constants(spec);
  r.epsilon = *config.epsilon;
  r.delta = resolve_delta(config, r.constants);
  r.omega = 1.0 + r.delta;
  const EnvelopeParams params = make_envelope_params(r.constants, r.delta, r.epsilon);
  r.gamma = params.gamma;
  r.b_coef = params.b_coef;
  r.kappa = params.kappa;
  r.lambda = params.lambda;
  const double alpha = r.constants.alpha;

  if (r.kappa == 0.0) {
    r.notes.emplace_back("no turning point: pure subresonant growth (kappa = 0 closed form never saturates)");
  } else if (r.kappa < 0.0) {
    r.notes.emplace_back("negative detuning: lambda = B kappa^(alpha-1) is undefined");
  } else if (!(*r.lambda > 1.0)) {
    r.notes.emplace_back("lambda <= 1: Q has no growth region, no turning point");
  } else {
    r.turning = turning_point(*r.lambda, alpha);
    r.t_turn = physical_turning_time(r.turning->theta_star_exact, r.kappa, r.epsilon, r.gamma);
    r.t_turn_approx = physical_turning_time(r.turning->theta_star_approx, r.kappa, r.epsilon, r.gamma);

    const double theta_star = r.turning->theta_star_exact;
    const double theta0 = std::min(1.0, theta_star / 1000.0);
    const double dtheta = std::min(0.01, theta0 / 10.0);
    const double theta_end = 4.0 * theta_star;
    const auto steps = static_cast<std::size_t>(theta_end / dtheta);
    const EnvelopeRun run = integrate_theta_form(*r.lambda, alpha, {theta0, 1.0, 0.0, 0.0}, theta_end,
                                                 dtheta, std::max<std::size_t>(1, steps / 100000));
    r.theta_peak_envelope = peak_position(run);
    r.t_peak_envelope = *r.theta_peak_envelope / r.delta;
    r.envelope_discrepancy = std::abs(*r.theta_peak_envelope - theta_star) / theta_star;

    if (run_long) {
      const double horizon = std::max(config.t_end, 4.0 * *r.t_turn);
      const std::size_t n_terms = truncation_order(spec, {config.abs_tol, config.max_terms, horizon});
      const OscillatorParams osc{r.delta, r.epsilon, spec, n_terms};
      const auto trace = trace_log_envelope(osc, {0.0, 1.0, 0.0}, horizon, config.dt,
                                            config.output_stride, {CoefficientMode::tabulated});
      r.t_peak_direct = trace.t_peak;
      r.direct_horizon = horizon;
      r.direct_discrepancy = std::abs(trace.t_peak - *r.t_turn) / *r.t_turn;
      if (trace.t_peak >= 0.95 * horizon) {
        r.notes.emplace_back("direct envelope still rising at the end of the horizon: no saturation observed");
      }
    }
  }

  // Alternative readings of gamma, kappa and delta, next to the consistent chain.
  const double alt_lambda = 5.0;
  const double alt_gamma = 6.0 / 5.0;
  if (r.delta > 0.0) {
    const double k_alt_gamma = derive_kappa(r.delta, r.epsilon, alt_gamma);
    r.variants.push_back(variant("gamma = 6/5", alt_gamma, k_alt_gamma,
                                 derive_lambda(r.b_coef, k_alt_gamma, alpha), alpha, r.epsilon));
    const double gamma_kappa = std::log(r.delta) / std::log(r.epsilon);
    const double k_exp = gamma_kappa / r.gamma;
    r.variants.push_back(variant("delta = epsilon^(gamma kappa)", r.gamma, k_exp,
                                 k_exp > 0.0 ? derive_lambda(r.b_coef, k_exp, alpha) : std::nan(""),
                                 alpha, r.epsilon));
    r.variants.push_back(variant("lambda = 5 with this delta", r.gamma, r.kappa, alt_lambda, alpha,
                                 r.epsilon));
  }
  const double k_from_lambda = derive_kappa_from_lambda(r.b_coef, alt_lambda, alpha);
  r.variants.push_back(variant("lambda = 5, kappa = (B/lambda)^(1/(1-alpha))", r.gamma, k_from_lambda,
                               alt_lambda, alpha, r.epsilon));
  r.variants.push_back(variant("lambda = 5, kappa = (1/4)^(5/4)", r.gamma, std::pow(0.25, 1.25),
                               alt_lambda, alpha, r.epsilon));
  return r;
}

namespace {

std::string num(double v) { return csv::format_number(v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string("n/a"); }

}  // namespace

std::string format_report(const ComparisonReport& r) {
  std::ostringstream out;
  out << "asymptotic constants\n"
      << "  alpha      " << num(r.constants.alpha) << '\n'
      << "  C_s        " << num(r.constants.c_s) << '\n'
      << "  C_c        " << num(r.constants.c_c) << '\n'
      << "  A_alpha    " << num(r.constants.a_alpha) << '\n'
      << "  phi_alpha  " << num(r.constants.phi_alpha) << '\n'
      << "derived parameters\n"
      << "  delta      " << num(r.delta) << '\n'
      << "  epsilon    " << num(r.epsilon) << '\n'
      << "  gamma      " << num(r.gamma) << '\n'
      << "  B          " << num(r.b_coef) << '\n'
      << "  kappa      " << num(r.kappa) << '\n'
      << "  lambda     " << opt(r.lambda) << '\n';
  if (r.turning) {
    out << "turning point\n"
        << "  theta* (root of Q)        " << num(r.turning->theta_star_exact) << '\n'
        << "  theta* ~ lambda^(1/alpha) " << num(r.turning->theta_star_approx) << '\n'
        << "  T = theta*/(kappa eps^gamma)  " << opt(r.t_turn) << '\n'
        << "  T from lambda^(1/alpha)       " << opt(r.t_turn_approx) << '\n'
        << "envelope model\n"
        << "  log-norm peak theta       " << opt(r.theta_peak_envelope) << '\n'
        << "  peak in physical time     " << opt(r.t_peak_envelope) << '\n'
        << "  |peak - theta*| / theta*  " << opt(r.envelope_discrepancy) << '\n';
  }
  if (r.t_peak_direct) {
    out << "direct simulation\n"
        << "  horizon                   " << opt(r.direct_horizon) << '\n'
        << "  envelope peak t           " << opt(r.t_peak_direct) << '\n'
        << "  |peak - T| / T            " << opt(r.direct_discrepancy) << '\n';
  }
  out << "alternative variants (gamma, kappa, lambda, theta*, T)\n";
  for (const auto& v : r.variants) {
    out << "  " << v.label << ": " << num(v.gamma) << ", " << num(v.kappa) << ", " << num(v.lambda)
        << ", " << num(v.theta_star) << ", " << num(v.t_turn) << '\n';
  }
  for (const auto& note : r.notes) out << "note: " << note << '\n';
  return out.str();
}

csv::Table comparison_table(const ComparisonReport& r) {
  csv::Table table{{"key", "value"}, {}};
  auto add = [&](const std::string& key, const std::optional<double>& value) {
    if (value) table.rows.push_back({key, num(*value)});
  };
  add("alpha", r.constants.alpha);
  add("c_s", r.constants.c_s);
  add("c_c", r.constants.c_c);
  add("a_alpha", r.constants.a_alpha);
  add("phi_alpha", r.constants.phi_alpha);
  add("delta", r.delta);
  add("epsilon", r.epsilon);
  add("gamma", r.gamma);
  add("b_coef", r.b_coef);
  add("kappa", r.kappa);
  add("lambda", r.lambda);
  if (r.turning) {
    add("theta_star_exact", r.turning->theta_star_exact);
    add("theta_star_approx", r.turning->theta_star_approx);
  }
  add("t_turn", r.t_turn);
  add("t_turn_approx", r.t_turn_approx);
  add("theta_peak_envelope", r.theta_peak_envelope);
  add("t_peak_envelope", r.t_peak_envelope);
  add("envelope_discrepancy", r.envelope_discrepancy);
  add("direct_horizon", r.direct_horizon);
  add("t_peak_direct", r.t_peak_direct);
  add("direct_discrepancy", r.direct_discrepancy);
  return table;
}

}  // namespace subres

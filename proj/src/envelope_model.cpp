#include "subres/envelope_model.hpp"

#include <cmath>
#include <string>

#include "subres/error.hpp"

namespace subres {

double EnvelopeState::log_norm() const { return log_scale + std::log(std::hypot(w, v)); }

double derive_gamma(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("gamma needs alpha in (0, 1), got " + std::to_string(alpha));
  }
  return 1.0 / (1.0 - alpha);
}

double derive_b(double a_alpha, double omega) {
  if (!(omega > 0.0)) throw DomainError("B needs omega > 0");
  if (!(a_alpha > 0.0)) throw DomainError("B needs A_alpha > 0");
  return a_alpha / (4.0 * omega);
}

double derive_kappa(double delta, double epsilon, double gamma) {
  if (!(epsilon > 0.0)) throw DomainError("kappa needs epsilon > 0");
  return delta / std::pow(epsilon, gamma);
}

double delta_of_kappa(double kappa, double epsilon, double gamma) {
  if (!(epsilon > 0.0)) throw DomainError("delta needs epsilon > 0");
  return kappa * std::pow(epsilon, gamma);
}

double derive_lambda(double b_coef, double kappa, double alpha) {
  if (!(kappa > 0.0)) {
    throw DomainError("kappa zero: lambda is undefined, use the kappa = 0 closed form");
  }
  return b_coef * std::pow(kappa, alpha - 1.0);
}

double derive_kappa_from_lambda(double b_coef, double lambda, double alpha) {
  if (!(lambda > 0.0) || !(b_coef > 0.0)) throw DomainError("kappa from lambda needs B, lambda > 0");
  return std::pow(b_coef / lambda, 1.0 / (1.0 - alpha));
}

EnvelopeParams make_envelope_params(const AsymptoticConstants& constants, double delta,
                                    double epsilon) {
  EnvelopeParams p;
  p.alpha = constants.alpha;
  p.gamma = derive_gamma(constants.alpha);
  p.b_coef = derive_b(constants.a_alpha, 1.0 + delta);
  p.kappa = derive_kappa(delta, epsilon, p.gamma);
  if (p.kappa > 0.0) p.lambda = derive_lambda(p.b_coef, p.kappa, p.alpha);
  p.phi = constants.phi_alpha;
  return p;
}

namespace {

// Coupling g(s) = c / s^alpha and rotation rate r:
//   w' = g w + r v,  v' = -r w - g v.
template <class Coupling>
EnvelopeRun march(Coupling coupling, double rate, const EnvelopeState& init, double s_end,
                  double h, std::size_t stride) {
  if (stride == 0) throw DomainError("envelope stride must be positive");
  EnvelopeRun run;
  run.states.push_back(init);
  const auto steps = static_cast<long long>(std::ceil((s_end - init.tau) / h - 1e-9));
  double w = init.w;
  double v = init.v;
  double log_scale = init.log_scale;
  const double s0 = init.tau;
  auto rhs = [&](double s, double ww, double vv, double& dw, double& dv) {
    const double g = coupling(s);
    dw = g * ww + rate * vv;
    dv = -rate * ww - g * vv;
  };
  for (long long n = 0; n < steps; ++n) {
    const double s = s0 + static_cast<double>(n) * h;
    double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
    rhs(s, w, v, k1w, k1v);
    rhs(s + 0.5 * h, w + 0.5 * h * k1w, v + 0.5 * h * k1v, k2w, k2v);
    rhs(s + 0.5 * h, w + 0.5 * h * k2w, v + 0.5 * h * k2v, k3w, k3v);
    rhs(s + h, w + h * k3w, v + h * k3v, k4w, k4v);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double norm = std::hypot(w, v);
    if (!std::isfinite(norm)) {
      run.truncated = true;
      break;
    }
    if (norm > 1e100) {
      w /= norm;
      v /= norm;
      log_scale += std::log(norm);
    }
    if ((n + 1) % static_cast<long long>(stride) == 0 || n + 1 == steps) {
      run.states.push_back({s0 + static_cast<double>(n + 1) * h, w, v, log_scale});
    }
  }
  return run;
}

void check_start(const EnvelopeState& init, double end, double h) {
  if (!(init.tau > 0.0)) {
    throw DomainError("envelope integration must start at positive slow time (tau^-alpha is singular at 0)");
  }
  if (!(h > 0.0)) throw DomainError("envelope step must be positive");
  if (!(end > init.tau)) throw DomainError("envelope end time must exceed the start");
  if (!std::isfinite(init.w) || !std::isfinite(init.v)) throw DomainError("envelope init must be finite");
}

}  // namespace

EnvelopeRun integrate_envelope(const EnvelopeParams& params, const EnvelopeState& init,
                               double tau_end, double dtau, std::size_t stride) {
  check_start(init, tau_end, dtau);
  if (dtau > init.tau / 10.0) {
    throw DomainError("envelope step dtau must not exceed tau0/10");
  }
  const double b = params.b_coef;
  const double a = params.alpha;
  return march([b, a](double tau) { return b / std::pow(tau, a); }, params.kappa, init, tau_end,
               dtau, stride);
}

EnvelopeRun integrate_theta_form(double lambda, double alpha, const EnvelopeState& init,
                                 double theta_end, double dtheta, std::size_t stride) {
  check_start(init, theta_end, dtheta);
  return march([lambda, alpha](double theta) { return lambda / std::pow(theta, alpha); }, 1.0, init,
               theta_end, dtheta, stride);
}

std::pair<double, double> closed_form_kappa0(double b_coef, double alpha, double tau0,
                                             std::pair<double, double> state0, double tau) {
  if (!(tau > 0.0) || !(tau0 > 0.0)) throw DomainError("closed form needs tau, tau0 > 0");
  if (tau == tau0) return state0;
  const double exponent = alpha == 0.0
                              ? b_coef * (tau - tau0)
                              : b_coef * (std::pow(tau, 1.0 - alpha) - std::pow(tau0, 1.0 - alpha)) /
                                    (1.0 - alpha);
  return {state0.first * std::exp(exponent), state0.second * std::exp(-exponent)};
}

std::pair<double, double> ab_to_slow(double a, double b, double kappa, double tau, double phi) {
  const double angle = kappa * tau + 0.5 * phi;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {a * c + b * s, b * c - a * s};
}

std::pair<double, double> slow_to_ab(double w, double v, double kappa, double tau, double phi) {
  const double angle = kappa * tau + 0.5 * phi;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {w * c - v * s, w * s + v * c};
}

double peak_position(const EnvelopeRun& run) {
  if (run.states.empty()) throw DomainError("peak of an empty run");
  double best = run.states.front().log_norm();
  double where = run.states.front().tau;
  for (const auto& s : run.states) {
    const double value = s.log_norm();
    if (value > best) {
      best = value;
      where = s.tau;
    }
  }
  return where;
}

}  // namespace subres

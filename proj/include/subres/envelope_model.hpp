#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "subres/spectral_sums.hpp"

namespace subres {

/// Parameters of the averaged slow-amplitude system
///
///   dw/dtau =  B w / tau^alpha + kappa v
///   dv/dtau = -kappa w - B v / tau^alpha
///
/// with slow time tau = epsilon^gamma t and detuning delta = epsilon^gamma kappa.
struct EnvelopeParams {
  double alpha = 0.0;
  double gamma = 0.0;
  double b_coef = 0.0;
  double kappa = 0.0;
  std::optional<double> lambda;  ///< B kappa^{alpha-1}; absent when kappa == 0
  double phi = 0.0;
};

/// (w, v) at slow time tau. The true amplitudes are (w, v) * exp(log_scale);
/// integrations renormalize so exponential growth never overflows.
struct EnvelopeState {
  double tau = 0.0;
  double w = 0.0;
  double v = 0.0;
  double log_scale = 0.0;

  /// log sqrt(w^2 + v^2) of the unscaled amplitudes.
  double log_norm() const;
};

struct EnvelopeRun {
  std::vector<EnvelopeState> states;
  bool truncated = false;
};

/// gamma = 1/(1-alpha), the unique solution of gamma - 1 = gamma alpha.
double derive_gamma(double alpha);

/// B = A_alpha / (4 omega).
double derive_b(double a_alpha, double omega);

/// kappa = delta / epsilon^gamma.
double derive_kappa(double delta, double epsilon, double gamma);

/// delta = kappa epsilon^gamma.
double delta_of_kappa(double kappa, double epsilon, double gamma);

/// lambda = B kappa^{alpha-1}. Throws DomainError ("kappa zero") unless kappa > 0.
double derive_lambda(double b_coef, double kappa, double alpha);

/// kappa = (B/lambda)^{1/(1-alpha)}, the inverse of derive_lambda.
double derive_kappa_from_lambda(double b_coef, double lambda, double alpha);

/// Assembles all slow-system parameters from the constants and (delta, epsilon).
EnvelopeParams make_envelope_params(const AsymptoticConstants& constants, double delta,
                                    double epsilon);

/// RK4 on the (w, v) system in slow time, one state kept every `stride` steps
/// (plus the initial state). Requires init.tau > 0 and dtau <= init.tau / 10.
EnvelopeRun integrate_envelope(const EnvelopeParams& params, const EnvelopeState& init,
                               double tau_end, double dtau, std::size_t stride = 1);

/// The same system after theta = kappa tau:
///   dw/dtheta = (lambda/theta^alpha) w + v,  dv/dtheta = -(lambda/theta^alpha) v - w.
/// The `tau` field of the returned states holds theta.
EnvelopeRun integrate_theta_form(double lambda, double alpha, const EnvelopeState& init,
                                 double theta_end, double dtheta, std::size_t stride = 1);

/// Exact kappa = 0 solution anchored at (tau0, w0, v0).
std::pair<double, double> closed_form_kappa0(double b_coef, double alpha, double tau0,
                                             std::pair<double, double> state0, double tau);

/// (w, v) = Re/Im of (a + i b) exp(-i (kappa tau + phi/2)).
std::pair<double, double> ab_to_slow(double a, double b, double kappa, double tau, double phi);

/// Inverse of ab_to_slow.
std::pair<double, double> slow_to_ab(double w, double v, double kappa, double tau, double phi);

/// theta at which the log-norm of a run peaks.
double peak_position(const EnvelopeRun& run);

}  // namespace subres

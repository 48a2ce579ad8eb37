#pragma once

#include <cstddef>
#include <vector>

#include "subres/coefficient.hpp"

namespace subres {

/// Full equation u'' + (omega^2 + epsilon q(t)) u = 0 with omega = 1 + delta.
struct OscillatorParams {
  double delta = 0.0;
  double epsilon = 0.0;
  CoefficientSpec spec{2.0, 5.0};
  std::size_t n_terms = 100;

  double omega() const { return 1.0 + delta; }
};

struct State {
  double t = 0.0;
  double u = 0.0;
  double du = 0.0;
};

struct Sample {
  double t;
  double u;
  double du;
  double envelope;
};

struct Trajectory {
  std::vector<Sample> samples;
  double dt = 0.0;
  OscillatorParams meta;
  /// Set when the state stopped being finite; samples end before that point.
  bool truncated = false;
};

/// How q(t) is evaluated at the Runge-Kutta stages.
enum class CoefficientMode {
  direct,     ///< full trigonometric sum at every stage
  tabulated,  ///< phasor-recurrence grid with spacing dt/2
};

struct SolverOptions {
  CoefficientMode mode = CoefficientMode::direct;
};

/// Largest accepted step (about 125 steps per fast period).
inline constexpr double kMaxStep = 0.05;
inline constexpr double kDefaultStep = 0.02;
inline constexpr std::size_t kDefaultStride = 50;

/// Classical fixed-step RK4 for (u, du)' = (du, -(omega^2 + epsilon q(t)) u).
/// A sample is stored at the initial time and after every `output_stride` steps.
///
/// Throws DomainError for dt outside (0, 0.05], non-finite init or a zero
/// stride; HorizonError when n_terms < 4*ceil(t_end^{1/p}). Overflow does not
/// throw: integration stops and the trajectory is marked truncated.
Trajectory integrate(const OscillatorParams& params, const State& init, double t_end, double dt,
                     std::size_t output_stride = kDefaultStride, const SolverOptions& options = {});

/// sqrt(u^2 + (du/omega)^2).
double envelope(const State& state, double omega);

/// Integrates the fundamental pair (1,0), (0,1) and returns the largest
/// deviation of the Wronskian W = u1 du2 - u2 du1 from 1, measured relative
/// to the size of its terms: |W - 1| / max(1, |u1 du2| + |u2 du1|).
double wronskian_drift(const OscillatorParams& params, double t_end, double dt,
                       const SolverOptions& options = {});

enum class Verdict { bounded, growing };

const char* to_string(Verdict verdict);

/// Median envelope of the last decile of samples over that of the first decile.
double growth_ratio(const Trajectory& trajectory);

/// "growing" iff growth_ratio >= growth_factor. A truncated (overflowed)
/// trajectory is growing. Throws DomainError for fewer than 100 samples.
Verdict classify_growth(const Trajectory& trajectory, double growth_factor = 3.0);

/// Log-envelope history of a run that renormalizes the state whenever it
/// grows large, so exponential growth far beyond double range can be followed.
struct LogEnvelopeTrace {
  std::vector<double> t;
  std::vector<double> log_envelope;
  double t_peak = 0.0;
  double log_peak = 0.0;
};

LogEnvelopeTrace trace_log_envelope(const OscillatorParams& params, const State& init,
                                    double t_end, double dt,
                                    std::size_t output_stride = kDefaultStride,
                                    const SolverOptions& options = {});

}  // namespace subres

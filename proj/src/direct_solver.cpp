#include "subres/direct_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "subres/error.hpp"

namespace subres {

namespace {

struct Phase {
  double u;
  double du;
};

std::int64_t step_count(double t0, double t_end, double dt) {
  return static_cast<std::int64_t>(std::ceil((t_end - t0) / dt - 1e-9));
}

void validate(const OscillatorParams& params, const State& init, double t_end, double dt) {
  if (!(params.omega() > 0.0)) throw DomainError("omega = 1 + delta must be positive");
  if (!(params.epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  if (!(dt > 0.0) || dt > kMaxStep) {
    throw DomainError("step dt must lie in (0, " + std::to_string(kMaxStep) + "], got " +
                      std::to_string(dt));
  }
  if (!std::isfinite(init.t) || !std::isfinite(init.u) || !std::isfinite(init.du)) {
    throw DomainError("initial state must be finite");
  }
  if (!(t_end > init.t) || !std::isfinite(t_end)) {
    throw DomainError("t_end must be finite and exceed the initial time");
  }
  const double horizon = std::max(std::abs(init.t), std::abs(t_end));
  const std::size_t needed = horizon_terms(params.spec, horizon);
  if (params.n_terms < needed) {
    throw HorizonError("horizon exceeds truncation validity: t_end = " + std::to_string(t_end) +
                       " needs n_terms >= " + std::to_string(needed) + ", have " +
                       std::to_string(params.n_terms));
  }
}

/// Stiffness omega^2 + epsilon q on the half-step grid t0 + j*dt/2.
class Stiffness {
 public:
  Stiffness(const OscillatorParams& params, double t0, double dt, CoefficientMode mode)
      : omega2_(params.omega() * params.omega()),
        epsilon_(params.epsilon),
        t0_(t0),
        h_(0.5 * dt),
        series_(params.spec, params.epsilon == 0.0 ? 0 : params.n_terms) {
    if (mode == CoefficientMode::tabulated) grid_.emplace(series_, t0, h_);
  }

  double at(std::int64_t j) {
    if (epsilon_ == 0.0) return omega2_;
    const double q = grid_ ? grid_->at(j) : series_(t0_ + static_cast<double>(j) * h_);
    return omega2_ + epsilon_ * q;
  }

 private:
  double omega2_;
  double epsilon_;
  double t0_;
  double h_;
  CoefficientSeries series_;
  std::optional<CoefficientGrid> grid_;
};

/// Advances `Cols` solutions sharing one coefficient evaluation per stage.
/// `visit(step, t, states)` runs after each step and returns false to stop.
template <std::size_t Cols, class Visit>
void march(const OscillatorParams& params, double t0, double t_end, double dt,
           const SolverOptions& options, std::array<Phase, Cols>& y, Visit visit) {
  Stiffness stiffness(params, t0, dt, options.mode);
  const std::int64_t steps = step_count(t0, t_end, dt);
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;
  double s_begin = stiffness.at(0);
  for (std::int64_t n = 0; n < steps; ++n) {
    const double s_mid = stiffness.at(2 * n + 1);
    const double s_end = stiffness.at(2 * n + 2);
    for (auto& c : y) {
      const double k1u = c.du;
      const double k1v = -s_begin * c.u;
      const double k2u = c.du + half * k1v;
      const double k2v = -s_mid * (c.u + half * k1u);
      const double k3u = c.du + half * k2v;
      const double k3v = -s_mid * (c.u + half * k2u);
      const double k4u = c.du + dt * k3v;
      const double k4v = -s_end * (c.u + dt * k3u);
      c.u += sixth * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      c.du += sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    s_begin = s_end;
    if (!visit(n + 1, t0 + static_cast<double>(n + 1) * dt, y)) return;
  }
}

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

}  // namespace

double envelope(const State& state, double omega) {
  if (!(omega > 0.0)) throw DomainError("envelope needs omega > 0");
  return std::hypot(state.u, state.du / omega);
}

Trajectory integrate(const OscillatorParams& params, const State& init, double t_end, double dt,
                     std::size_t output_stride, const SolverOptions& options) {
  validate(params, init, t_end, dt);
  if (output_stride == 0) throw DomainError("output stride must be positive");

  Trajectory out;
  out.dt = dt;
  out.meta = params;
  const double omega = params.omega();
  out.samples.reserve(static_cast<std::size_t>(step_count(init.t, t_end, dt)) / output_stride + 2);
  out.samples.push_back({init.t, init.u, init.du, envelope(init, omega)});

  std::array<Phase, 1> y{{{init.u, init.du}}};
  march(params, init.t, t_end, dt, options, y,
        [&](std::int64_t step, double t, const std::array<Phase, 1>& s) {
          if (!std::isfinite(s[0].u) || !std::isfinite(s[0].du)) {
            out.truncated = true;
            return false;
          }
          if (step % static_cast<std::int64_t>(output_stride) == 0) {
            const State st{t, s[0].u, s[0].du};
            const double env = envelope(st, omega);
            if (!std::isfinite(env)) {
              out.truncated = true;
              return false;
            }
            out.samples.push_back({t, s[0].u, s[0].du, env});
          }
          return true;
        });
  return out;
}

double wronskian_drift(const OscillatorParams& params, double t_end, double dt,
                       const SolverOptions& options) {
  const State init{0.0, 1.0, 0.0};
  validate(params, init, t_end, dt);
  std::array<Phase, 2> y{{{1.0, 0.0}, {0.0, 1.0}}};
  double drift = 0.0;
  bool finite = true;
  march(params, 0.0, t_end, dt, options, y,
        [&](std::int64_t, double, const std::array<Phase, 2>& s) {
          const double a = s[0].u * s[1].du;
          const double b = s[1].u * s[0].du;
          const double w = a - b;
          if (!std::isfinite(w)) {
            finite = false;
            return false;
          }
          drift = std::max(drift, std::abs(w - 1.0) / std::max(1.0, std::abs(a) + std::abs(b)));
          return true;
        });
  if (!finite) throw NumericError("non-finite state while tracking the Wronskian");
  return drift;
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::growing ? "growing" : "bounded";
}

double growth_ratio(const Trajectory& trajectory) {
  const auto& s = trajectory.samples;
  if (s.size() < 100) {
    throw DomainError("growth classification needs at least 100 samples, got " +
                      std::to_string(s.size()));
  }
  const std::size_t decile = s.size() / 10;
  std::vector<double> head;
  std::vector<double> tail;
  for (std::size_t i = 0; i < decile; ++i) {
    head.push_back(s[i].envelope);
    tail.push_back(s[s.size() - decile + i].envelope);
  }
  const double first = median(std::move(head));
  const double last = median(std::move(tail));
  if (first == 0.0) return last == 0.0 ? 1.0 : INFINITY;
  return last / first;
}

Verdict classify_growth(const Trajectory& trajectory, double growth_factor) {
  if (!(growth_factor > 1.0)) throw DomainError("growth factor must exceed 1");
  if (trajectory.truncated) return Verdict::growing;
  return growth_ratio(trajectory) >= growth_factor ? Verdict::growing : Verdict::bounded;
}

LogEnvelopeTrace trace_log_envelope(const OscillatorParams& params, const State& init,
                                    double t_end, double dt, std::size_t output_stride,
                                    const SolverOptions& options) {
  validate(params, init, t_end, dt);
  if (output_stride == 0) throw DomainError("output stride must be positive");
  const double omega = params.omega();
  const double env0 = envelope(init, omega);
  if (!(env0 > 0.0)) throw DomainError("log-envelope trace needs a nonzero initial state");

  LogEnvelopeTrace out;
  double log_scale = std::log(env0);
  std::array<Phase, 1> y{{{init.u / env0, init.du / env0}}};
  out.t.push_back(init.t);
  out.log_envelope.push_back(log_scale);
  out.t_peak = init.t;
  out.log_peak = log_scale;

  march(params, init.t, t_end, dt, options, y,
        [&](std::int64_t step, double t, std::array<Phase, 1>& s) {
          const double env = envelope({t, s[0].u, s[0].du}, omega);
          if (!std::isfinite(env) || env == 0.0) {
            throw NumericError("non-finite state in log-envelope trace");
          }
          if (env > 1e100 || env < 1e-100) {
            s[0].u /= env;
            s[0].du /= env;
            log_scale += std::log(env);
          }
          if (step % static_cast<std::int64_t>(output_stride) == 0) {
            const double value = log_scale + std::log(envelope({t, s[0].u, s[0].du}, omega));
            out.t.push_back(t);
            out.log_envelope.push_back(value);
            if (value > out.log_peak) {
              out.log_peak = value;
              out.t_peak = t;
            }
          }
          return true;
        });
  return out;
}

}  // namespace subres

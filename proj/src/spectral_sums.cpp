#include "subres/spectral_sums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "subres/compensated.hpp"
#include "subres/error.hpp"

namespace subres {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <class F>
double adaptive(F f, double lo, double hi, double rel_tol, const char* what) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 20, rel_tol, &error);
  if (!(error <= rel_tol * std::abs(value)) || !std::isfinite(value)) {
    throw NumericError(std::string("quadrature did not converge for ") + what +
                       ": estimate " + std::to_string(value) + ", error " +
                       std::to_string(error));
  }
  return value;
}

void check_options(const QuadratureOptions& options, double upper) {
  if (!(options.split > 0.0) || !(options.split < upper)) {
    throw DomainError("quadrature split point must lie inside the integration interval");
  }
  if (options.taylor_terms < 1) throw DomainError("quadrature needs at least one Taylor term");
}

// int_0^a tau^{alpha-2} sin(tau): sin tau = sum (-1)^m tau^{2m+1}/(2m+1)!
double sine_head(double alpha, double a, int terms) {
  CompensatedSum sum;
  for (int m = terms - 1; m >= 0; --m) {
    const double power = alpha + 2.0 * m;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::pow(a, power) / (power * factorial(2 * m + 1));
  }
  return sum.value();
}

// int_0^a tau^{alpha-2} sin^2(tau/2): sin^2(tau/2) = sum_{m>=1} (-1)^{m+1} tau^{2m}/(2 (2m)!)
double versine_head(double alpha, double a, int terms) {
  CompensatedSum sum;
  for (int m = terms; m >= 1; --m) {
    const double power = alpha - 1.0 + 2.0 * m;
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    sum += sign * std::pow(a, power) / (2.0 * factorial(2 * m) * power);
  }
  return sum.value();
}

}  // namespace

double alpha(const CoefficientSpec& spec) {
  const double a = (spec.k() - 1.0) / spec.p();
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("regime violation: alpha = (k-1)/p = " + std::to_string(a) +
                      " must lie in (0, 1)");
  }
  return a;
}

double c_s(const CoefficientSpec& spec, const QuadratureOptions& options) {
  const double a = alpha(spec);
  const double upper = kPi / 2.0;
  check_options(options, upper);
  const double head = sine_head(a, options.split, options.taylor_terms);
  const double body = adaptive([a](double x) { return std::pow(x, a - 2.0) * std::sin(x); },
                               options.split, upper, options.rel_tol, "C_s");
  return (head + body) / spec.p();
}

double c_c(const CoefficientSpec& spec, const QuadratureOptions& options) {
  const double a = alpha(spec);
  const double upper = kPi;
  check_options(options, upper);
  const double head = versine_head(a, options.split, options.taylor_terms);
  const double body = adaptive(
      [a](double x) {
        const double s = std::sin(0.5 * x);
        return std::pow(x, a - 2.0) * s * s;
      },
      options.split, upper, options.rel_tol, "C_c");
  const double closed = 1.0 / (2.0 * std::pow(kPi, 1.0 - a) * spec.p() * (1.0 - a));
  return -(closed + (head + body) / spec.p());
}

AsymptoticConstants constants(const CoefficientSpec& spec, const QuadratureOptions& options) {
  AsymptoticConstants out;
  out.alpha = alpha(spec);
  out.c_s = c_s(spec, options);
  out.c_c = c_c(spec, options);
  out.a_alpha = std::hypot(out.c_s, out.c_c);
  out.phi_alpha = std::atan(out.c_c / out.c_s);
  return out;
}

MellinReference mellin_reference(const CoefficientSpec& spec) {
  const double a = alpha(spec);
  const double s = a - 1.0;
  const double g = std::tgamma(s);
  return {g * std::sin(kPi * s / 2.0) / spec.p(), -g * std::cos(kPi * s / 2.0) / spec.p()};
}

namespace {

void check_lattice(const CoefficientSpec& spec, double t, std::size_t n_terms) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("lattice sum needs finite t >= 0");
  if (t > 0.0 && n_terms < horizon_terms(spec, t)) {
    throw DomainError("lattice sum precondition violated: N = " + std::to_string(n_terms) +
                      " < 4*ceil(t^{1/p}) = " + std::to_string(horizon_terms(spec, t)));
  }
}

}  // namespace

double lattice_sum_sin(const CoefficientSpec& spec, double t, std::size_t n_terms) {
  check_lattice(spec, t, n_terms);
  CompensatedSum sum;
  for (std::size_t i = n_terms; i >= 1; --i) {
    const double n = static_cast<double>(i);
    sum += std::pow(n, spec.p() - spec.k()) * std::sin(t / std::pow(n, spec.p()));
  }
  return sum.value();
}

double lattice_sum_versine(const CoefficientSpec& spec, double t, std::size_t n_terms) {
  check_lattice(spec, t, n_terms);
  CompensatedSum sum;
  for (std::size_t i = n_terms; i >= 1; --i) {
    const double n = static_cast<double>(i);
    const double s = std::sin(0.5 * t / std::pow(n, spec.p()));
    sum += std::pow(n, spec.p() - spec.k()) * 2.0 * s * s;
  }
  return sum.value();
}

std::size_t lattice_terms(const CoefficientSpec& spec, double t, double rel_tol) {
  const double a = alpha(spec);
  const double k = spec.k();
  const double by_tail = std::ceil(std::pow(std::pow(t, a) / ((k - 1.0) * rel_tol), 1.0 / (k - 1.0)));
  const auto tail = static_cast<std::size_t>(std::max(1.0, by_tail));
  return std::max(tail, horizon_terms(spec, t));
}

PowerLawFit fit_asymptotic_constant(std::span<const PowerLawSample> samples, double alpha) {
  if (samples.size() < 8) {
    throw DomainError("insufficient span: need at least 8 samples, got " +
                      std::to_string(samples.size()));
  }
  double t_lo = samples.front().t;
  double t_hi = samples.front().t;
  for (const auto& s : samples) {
    if (!(s.t > 0.0) || !(std::abs(s.value) > 0.0)) {
      throw DomainError("power-law fit needs positive t and nonzero values");
    }
    t_lo = std::min(t_lo, s.t);
    t_hi = std::max(t_hi, s.t);
  }
  if (std::log10(t_hi / t_lo) < 2.0 - 1e-12) {
    throw DomainError("insufficient span: samples cover " +
                      std::to_string(std::log10(t_hi / t_lo)) + " decades, need 2");
  }

  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& s : samples) {
    mean_x += std::log(s.t);
    mean_y += std::log(std::abs(s.value));
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = std::log(s.t) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(s.value)) - mean_y);
  }
  return {std::exp(mean_y - (1.0 - alpha) * mean_x), sxy / sxx};
}

std::vector<PowerLawSample> sample_lattice_sum(const CoefficientSpec& spec, LatticeKind kind,
                                               double t_min, double t_max, std::size_t count,
                                               unsigned threads) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw DomainError("lattice sampling needs 0 < t_min < t_max and at least 2 samples");
  }
  std::vector<PowerLawSample> out(count);
  const double log_lo = std::log(t_min);
  const double step = (std::log(t_max) - log_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].t = (i + 1 == count) ? t_max : std::exp(log_lo + step * static_cast<double>(i));
  }
  out.front().t = t_min;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const double t = out[i].t;
      const std::size_t n = lattice_terms(spec, t);
      out[i].value = kind == LatticeKind::sine ? lattice_sum_sin(spec, t, n)
                                               : lattice_sum_versine(spec, t, n);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  return out;
}

}  // namespace subres

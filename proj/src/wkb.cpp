#include "subres/wkb.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "subres/error.hpp"

namespace subres {

double q_coefficient(double lambda, double alpha, double theta) {
  if (!(theta > 0.0)) throw DomainError("Q(theta) needs theta > 0");
  return 1.0 - lambda * lambda / std::pow(theta, 2.0 * alpha) +
         alpha * lambda / std::pow(theta, alpha + 1.0);
}

TurningPoint turning_point(double lambda, double alpha) {
  if (!(lambda > 1.0)) throw DomainError("turning point needs lambda > 1");
  if (!(alpha > 0.0)) throw DomainError("turning point needs alpha > 0");
  TurningPoint out;
  out.theta_star_approx = std::pow(lambda, 1.0 / alpha);
  const double lo = out.theta_star_approx / 10.0;
  const double hi = out.theta_star_approx * 10.0;

  // Scan downward on a log grid for the first sign change below hi.
  constexpr int kScan = 4000;
  const double ratio = std::pow(lo / hi, 1.0 / kScan);
  double upper = hi;
  double q_upper = q_coefficient(lambda, alpha, upper);
  double lower = 0.0;
  bool found = false;
  for (int i = 1; i <= kScan; ++i) {
    const double theta = i == kScan ? lo : hi * std::pow(ratio, i);
    const double q = q_coefficient(lambda, alpha, theta);
    if ((q < 0.0) != (q_upper < 0.0)) {
      lower = theta;
      found = true;
      break;
    }
    upper = theta;
    q_upper = q;
  }
  if (!found) {
    throw NumericError("no sign change of Q on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }

  const bool upper_negative = q_upper < 0.0;
  while (upper - lower > 1e-10 * upper) {
    const double mid = 0.5 * (lower + upper);
    if ((q_coefficient(lambda, alpha, mid) < 0.0) == upper_negative) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  out.theta_star_exact = 0.5 * (lower + upper);
  return out;
}

double physical_turning_time(double theta_star, double kappa, double epsilon, double gamma) {
  if (!(kappa > 0.0)) throw DomainError("turning time needs kappa > 0");
  if (!(epsilon > 0.0)) throw DomainError("turning time needs epsilon > 0");
  return theta_star / (kappa * std::pow(epsilon, gamma));
}

std::vector<WkbPoint> wkb_amplitude(double lambda, double alpha, double theta_lo,
                                    double theta_hi, std::size_t count, double c1) {
  if (!(theta_lo > 0.0) || !(theta_hi > theta_lo) || count < 2) {
    throw DomainError("WKB table needs 0 < theta_lo < theta_hi and at least 2 points");
  }
  if (!(c1 > 0.0)) throw DomainError("WKB amplitude constant must be positive");

  std::vector<WkbPoint> table(count);
  const double step = (theta_hi - theta_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = i + 1 == count ? theta_hi : theta_lo + step * static_cast<double>(i);
    const double q = q_coefficient(lambda, alpha, theta);
    if (std::abs(q) < kWkbMinAbsQ) {
      throw NumericError("turning region: |Q(" + std::to_string(theta) + ")| = " +
                         std::to_string(std::abs(q)) + " < " + std::to_string(kWkbMinAbsQ));
    }
    table[i].theta = theta;
    table[i].q = q;
  }

  auto root_abs_q = [&](double theta) { return std::sqrt(std::abs(q_coefficient(lambda, alpha, theta))); };
  double phase = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      if ((table[i].q < 0.0) != (table[i - 1].q < 0.0)) {
        throw NumericError("turning region: Q changes sign between table points");
      }
      phase += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          root_abs_q, table[i - 1].theta, table[i].theta, 15, 1e-12);
    }
    auto& p = table[i];
    p.phase = phase;
    const double amplitude_log = std::log(c1) - 0.25 * std::log(std::abs(p.q));
    if (p.q < 0.0) {
      p.log_amplitude = amplitude_log + phase;
      p.w = std::exp(p.log_amplitude);
    } else {
      p.log_amplitude = amplitude_log;
      p.w = std::exp(amplitude_log) * std::cos(phase);
    }
  }
  return table;
}

}  // namespace subres

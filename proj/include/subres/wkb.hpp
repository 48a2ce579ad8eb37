#pragma once

#include <cstddef>
#include <vector>

namespace subres {

/// Q(theta) = 1 - lambda^2/theta^{2 alpha} + alpha lambda/theta^{alpha+1}, the
/// coefficient of w'' + Q(theta) w = 0 obtained by eliminating v.
double q_coefficient(double lambda, double alpha, double theta);

struct TurningPoint {
  double theta_star_exact = 0.0;   ///< largest root of Q (bisection)
  double theta_star_approx = 0.0;  ///< lambda^{1/alpha}
};

/// Largest root of Q on [approx/10, 10 approx] to relative tolerance 1e-10.
/// Throws DomainError unless lambda > 1 and alpha > 0; NumericError
/// ("no sign change") when no bracket is found.
TurningPoint turning_point(double lambda, double alpha);

/// theta* / (kappa epsilon^gamma), i.e. theta*/delta in physical time.
double physical_turning_time(double theta_star, double kappa, double epsilon, double gamma);

struct WkbPoint {
  double theta;
  double q;              ///< Q(theta)
  double phase;          ///< int_{theta_0}^{theta} sqrt|Q|
  double log_amplitude;  ///< log C1 - |Q|^{1/4} factor, plus the phase where Q < 0
  double w;              ///< growing branch exp(log_amplitude) or C1 |Q|^{-1/4} cos(phase)
};

/// Minimum |Q| allowed on a WKB table; below it the turning-point
/// neighbourhood needs connection formulas.
inline constexpr double kWkbMinAbsQ = 0.05;

/// WKB approximation on `count` uniformly spaced points of [theta_lo, theta_hi].
/// Where Q < 0 the solution is the growing exponential exp(int sqrt(-Q))/|Q|^{1/4};
/// where Q > 0 it oscillates with amplitude C1 Q^{-1/4}. Throws NumericError
/// ("turning region") if |Q| < 0.05 anywhere on the table.
std::vector<WkbPoint> wkb_amplitude(double lambda, double alpha, double theta_lo,
                                    double theta_hi, std::size_t count, double c1 = 1.0);

}  // namespace subres

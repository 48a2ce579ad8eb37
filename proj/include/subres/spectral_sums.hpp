#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "subres/coefficient.hpp"

namespace subres {

/// Asymptotic constants of the secular lattice sums
///
///   sum n^{p-k} sin(t/n^p)       ~ C_s t^{1-alpha}
///   sum n^{p-k} 2 sin^2(t/2n^p)  ~ C_c t^{1-alpha}   (C_c stored negative)
struct AsymptoticConstants {
  double alpha = 0.0;
  double c_s = 0.0;
  double c_c = 0.0;
  double a_alpha = 0.0;    ///< sqrt(c_s^2 + c_c^2)
  double phi_alpha = 0.0;  ///< atan(c_c / c_s), principal branch
};

/// alpha = (k-1)/p. Throws DomainError ("regime violation") unless 0 < alpha < 1.
double alpha(const CoefficientSpec& spec);

/// Controls for the singular-endpoint quadrature.
struct QuadratureOptions {
  double split = 0.25;       ///< series on [0, split], adaptive quadrature beyond
  int taylor_terms = 8;
  double rel_tol = 1e-10;
};

/// (1/p) * int_0^{pi/2} tau^{alpha-2} sin(tau) dtau.
double c_s(const CoefficientSpec& spec, const QuadratureOptions& options = {});

/// -( 1/(2 pi^{1-alpha} p (1-alpha)) + (1/p) int_0^pi tau^{alpha-2} sin^2(tau/2) dtau ).
double c_c(const CoefficientSpec& spec, const QuadratureOptions& options = {});

AsymptoticConstants constants(const CoefficientSpec& spec, const QuadratureOptions& options = {});

/// Full-range Mellin integrals (1/p) int_0^inf tau^{alpha-2} f(tau) in closed
/// form via the Gamma function: f = sin gives `sine`, f = 1 - cos = 2 sin^2(tau/2)
/// gives `versine`. These are the exact large-t limits of the lattice sums and
/// serve as a diagnostic next to the quadrature constants.
struct MellinReference {
  double sine = 0.0;
  double versine = 0.0;
};
MellinReference mellin_reference(const CoefficientSpec& spec);

/// sum_{n=1}^{N} n^{p-k} sin(t/n^p), descending n, compensated.
/// Requires N >= horizon_terms(spec, t).
double lattice_sum_sin(const CoefficientSpec& spec, double t, std::size_t n_terms);

/// sum_{n=1}^{N} n^{p-k} 2 sin^2(t/(2 n^p)); nonnegative. Same precondition.
double lattice_sum_versine(const CoefficientSpec& spec, double t, std::size_t n_terms);

/// Number of lattice terms whose dropped tail (~ t N^{1-k}/(k-1)) stays below
/// rel_tol * t^{1-alpha}, and never fewer than the horizon rule.
std::size_t lattice_terms(const CoefficientSpec& spec, double t, double rel_tol = 1e-5);

struct PowerLawSample {
  double t;
  double value;
};

struct PowerLawFit {
  double constant;  ///< exp(mean(log|S| - (1-alpha) log t))
  double exponent;  ///< least-squares slope of log|S| against log t
};

/// Throws DomainError ("insufficient span") for fewer than 8 samples or less
/// than two decades in t.
PowerLawFit fit_asymptotic_constant(std::span<const PowerLawSample> samples, double alpha);

enum class LatticeKind { sine, versine };

/// Samples the chosen lattice sum at `count` log-spaced times in [t_min, t_max].
/// Work is split over `threads` workers; output order is by time regardless.
std::vector<PowerLawSample> sample_lattice_sum(const CoefficientSpec& spec, LatticeKind kind,
                                               double t_min, double t_max, std::size_t count,
                                               unsigned threads = 1);

}  // namespace subres

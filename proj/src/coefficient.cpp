#include "subres/coefficient.hpp"

#include <cmath>
#include <string>

#include "subres/compensated.hpp"
#include "subres/error.hpp"

namespace subres {

CoefficientSpec::CoefficientSpec(double k, double p) : k_(k), p_(p) {
  if (!(k > 1.0) || !std::isfinite(k)) {
    throw DomainError("coefficient exponent k must satisfy k > 1, got " + std::to_string(k));
  }
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("coefficient exponent p must satisfy p > 0, got " + std::to_string(p));
  }
}

double tail_bound(const CoefficientSpec& spec, std::size_t n_terms) {
  const double n = static_cast<double>(n_terms);
  return std::pow(n, 1.0 - spec.k()) / (spec.k() - 1.0);
}

std::size_t horizon_terms(const CoefficientSpec& spec, double t) {
  if (!(t > 0.0)) return 4;
  const double root = std::pow(t, 1.0 / spec.p());
  // pow(1e5, 0.2) may land one ulp above 10; do not let that round up to 11.
  const double snapped = std::nearbyint(root);
  const double base = std::abs(root - snapped) <= 1e-12 * snapped ? snapped : std::ceil(root);
  return 4 * static_cast<std::size_t>(base);
}

namespace {

std::size_t tail_terms(const CoefficientSpec& spec, double abs_tol, std::size_t max_terms) {
  if (abs_tol <= 0.0) return max_terms;
  // N^{1-k}/(k-1) <= tol  <=>  N >= ((k-1) tol)^{-1/(k-1)}
  const double estimate = std::pow((spec.k() - 1.0) * abs_tol, -1.0 / (spec.k() - 1.0));
  if (!std::isfinite(estimate) || estimate > 1e18) return max_terms + 1;
  auto n = static_cast<std::size_t>(std::max(1.0, std::floor(estimate)));
  while (n > 1 && tail_bound(spec, n - 1) <= abs_tol) --n;
  while (tail_bound(spec, n) > abs_tol) ++n;
  return n;
}

}  // namespace

std::size_t truncation_order(const CoefficientSpec& spec, const TruncationPolicy& policy) {
  if (policy.max_terms == 0) throw DomainError("truncation policy: max_terms must be positive");
  if (!(policy.t_max > 0.0)) throw DomainError("truncation policy: t_max must be positive");
  if (policy.abs_tol < 0.0) throw DomainError("truncation policy: abs_tol must be nonnegative");

  const std::size_t by_tail = tail_terms(spec, policy.abs_tol, policy.max_terms);
  const std::size_t by_horizon = horizon_terms(spec, policy.t_max);
  const std::size_t n = std::max(by_tail, by_horizon);
  if (n > policy.max_terms) {
    throw HorizonError("policy unsatisfiable: need " + std::to_string(n) +
                       " terms (tail " + std::to_string(by_tail) + ", horizon " +
                       std::to_string(by_horizon) + "), max_terms is " +
                       std::to_string(policy.max_terms));
  }
  return n;
}

double eval_q(const CoefficientSpec& spec, double t, std::size_t n_terms) {
  CompensatedSum sum;
  for (std::size_t i = n_terms; i >= 1; --i) {
    const double n = static_cast<double>(i);
    const double amplitude = std::pow(n, -spec.k());
    const double frequency = 2.0 - std::pow(n, -spec.p());
    sum += amplitude * std::cos(frequency * t);
  }
  return sum.value();
}

CoefficientSeries::CoefficientSeries(const CoefficientSpec& spec, std::size_t n_terms)
    : spec_(spec) {
  amplitude_.reserve(n_terms);
  frequency_.reserve(n_terms);
  for (std::size_t i = n_terms; i >= 1; --i) {
    const double n = static_cast<double>(i);
    amplitude_.push_back(std::pow(n, -spec.k()));
    frequency_.push_back(2.0 - std::pow(n, -spec.p()));
  }
}

double CoefficientSeries::operator()(double t) const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < amplitude_.size(); ++i) {
    sum += amplitude_[i] * std::cos(frequency_[i] * t);
  }
  return sum.value();
}

CoefficientGrid::CoefficientGrid(const CoefficientSeries& series, double t0, double h)
    : series_(&series), t0_(t0), h_(h) {
  if (!(h > 0.0)) throw DomainError("coefficient grid spacing must be positive");
  const std::size_t n = series.size();
  step_re_.resize(n);
  step_im_.resize(n);
  re_.resize(n);
  im_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = series.frequencies()[i] * h;
    step_re_[i] = std::cos(angle);
    step_im_[i] = std::sin(angle);
  }
  values_.resize(2 * kBlock);
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

double& CoefficientGrid::slot(std::int64_t j) {
  const std::int64_t block = floor_div(j, kBlock);
  const std::int64_t parity = block & 1;
  return values_[static_cast<std::size_t>(parity * kBlock + (j - block * kBlock))];
}

void CoefficientGrid::fill_block(std::int64_t block) {
  const auto& amplitude = series_->amplitudes();
  const auto& frequency = series_->frequencies();
  const std::size_t n = amplitude.size();
  const std::int64_t first = block * kBlock;
  const double t_first = time_at(first);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = frequency[i] * t_first;
    re_[i] = std::cos(angle);
    im_[i] = std::sin(angle);
  }
  for (std::int64_t j = first; j < first + kBlock; ++j) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) {
      sum += amplitude[i] * re_[i];
      const double r = re_[i] * step_re_[i] - im_[i] * step_im_[i];
      im_[i] = re_[i] * step_im_[i] + im_[i] * step_re_[i];
      re_[i] = r;
    }
    slot(j) = sum.value();
  }
  blocks_[block & 1] = block;
}

double CoefficientGrid::at(std::int64_t j) {
  const std::int64_t block = floor_div(j, kBlock);
  if (blocks_[block & 1] != block) fill_block(block);
  return slot(j);
}

double CoefficientGrid::interpolate(double t) {
  const double x = (t - t0_) / h_;
  const auto j = static_cast<std::int64_t>(std::floor(x));
  const double s = x - static_cast<double>(j);
  const double qm1 = at(j - 1);
  const double q0 = at(j);
  const double q1 = at(j + 1);
  const double q2 = at(j + 2);
  // Lagrange weights on nodes -1, 0, 1, 2.
  const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return wm1 * qm1 + w0 * q0 + w1 * q1 + w2 * q2;
}

}  // namespace subres

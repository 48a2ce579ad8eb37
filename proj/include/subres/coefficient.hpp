#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace subres {

/// Exponents (k, p) of the almost-periodic coefficient
///
///   q(t) = sum_{n >= 1} n^{-k} cos((2 - n^{-p}) t),   k > 1, p > 0.
class CoefficientSpec {
 public:
  /// Throws DomainError unless k > 1 and p > 0.
  CoefficientSpec(double k, double p);

  double k() const { return k_; }
  double p() const { return p_; }

  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;

 private:
  double k_;
  double p_;
};

/// Dual stopping rule for truncating the q(t) series.
struct TruncationPolicy {
  double abs_tol = 1e-3;            ///< bound on the dropped tail; 0 disables the rule
  std::size_t max_terms = 1'000'000;
  double t_max = 1.0;               ///< largest time the truncation must serve
};

/// Integral bound on the dropped tail, N^{1-k}/(k-1).
double tail_bound(const CoefficientSpec& spec, std::size_t n_terms);

/// Minimum number of modes that resolves the slow phases t/n^p up to time t:
/// 4 * ceil(t^{1/p}).
std::size_t horizon_terms(const CoefficientSpec& spec, double t);

/// Smallest N meeting both the tail bound and the horizon rule.
/// Throws HorizonError ("policy unsatisfiable") if N would exceed max_terms.
std::size_t truncation_order(const CoefficientSpec& spec, const TruncationPolicy& policy);

/// Truncated q(t), summed from n = N down to 1 with compensation.
double eval_q(const CoefficientSpec& spec, double t, std::size_t n_terms);

/// Same sum as eval_q with the mode amplitudes and frequencies precomputed.
/// Bit-identical to eval_q for equal (spec, n_terms).
class CoefficientSeries {
 public:
  CoefficientSeries(const CoefficientSpec& spec, std::size_t n_terms);

  double operator()(double t) const;

  std::size_t size() const { return amplitude_.size(); }
  const CoefficientSpec& spec() const { return spec_; }

  /// Stored in descending n order.
  const std::vector<double>& amplitudes() const { return amplitude_; }
  const std::vector<double>& frequencies() const { return frequency_; }

 private:
  CoefficientSpec spec_;
  std::vector<double> amplitude_;
  std::vector<double> frequency_;
};

/// q(t) on the uniform grid t_j = t0 + j*h, produced by phasor recurrence.
///
/// Values are generated in blocks; each block re-anchors the phasors with
/// exact cos/sin so rounding does not accumulate over long runs. Access must
/// be monotone up to one block of look-back, which is what a forward
/// integrator needs.
class CoefficientGrid {
 public:
  static constexpr std::int64_t kBlock = 1024;

  CoefficientGrid(const CoefficientSeries& series, double t0, double h);

  double t0() const { return t0_; }
  double spacing() const { return h_; }
  double time_at(std::int64_t j) const { return t0_ + static_cast<double>(j) * h_; }

  /// q(t0 + j*h); j must not precede the previous block.
  double at(std::int64_t j);

  /// 4-point cubic Lagrange interpolation between grid nodes.
  double interpolate(double t);

 private:
  void fill_block(std::int64_t block);
  double& slot(std::int64_t j);

  const CoefficientSeries* series_;
  double t0_;
  double h_;
  std::vector<double> step_re_;
  std::vector<double> step_im_;
  std::vector<double> re_;
  std::vector<double> im_;
  // Two block buffers: current and previous.
  std::vector<double> values_;
  std::int64_t blocks_[2] = {-1, -1};
};

}  // namespace subres

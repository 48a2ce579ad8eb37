#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "subres/coefficient.hpp"
#include "subres/direct_solver.hpp"

namespace subres {

struct GridSpec {
  double delta_min = 0.0;
  double delta_max = 0.01;
  std::size_t delta_count = 21;
  double epsilon_min = 0.0;
  double epsilon_max = 0.1;
  std::size_t epsilon_count = 2;
  double t_end = 2e4;
  double dt = kDefaultStep;
  double growth_factor = 3.0;

  double delta_at(std::size_t i) const;
  double epsilon_at(std::size_t j) const;
};

struct SweepOptions {
  unsigned threads = 1;
  double abs_tol = 1e-2;  ///< truncation tail tolerance for q
  std::size_t max_terms = 1'000'000;
  std::size_t output_stride = kDefaultStride;
  CoefficientMode mode = CoefficientMode::tabulated;
};

struct StabilityMap {
  GridSpec grid;
  std::size_t n_terms = 0;
  /// Row-major by delta index: verdicts[i * epsilon_count + j].
  std::vector<Verdict> verdicts;
  std::vector<double> envelope_ratios;

  Verdict verdict(std::size_t delta_index, std::size_t epsilon_index) const {
    return verdicts[delta_index * grid.epsilon_count + epsilon_index];
  }
  double ratio(std::size_t delta_index, std::size_t epsilon_index) const {
    return envelope_ratios[delta_index * grid.epsilon_count + epsilon_index];
  }
};

/// Throws DomainError for an invalid grid.
void validate(const GridSpec& grid);

/// Classifies every (delta, epsilon) cell by direct simulation from (u, du) = (1, 0).
/// Cells are independent tasks written by index, so the map does not depend on
/// the worker count. A cell whose state overflows is recorded as growing with
/// an infinite ratio.
StabilityMap stability_map(const GridSpec& grid, const CoefficientSpec& spec,
                           const SweepOptions& options = {});

/// Maximal runs of growing cells along the given epsilon row, as
/// (delta_low, delta_high) pairs of cell coordinates.
std::vector<std::pair<double, double>> resonance_band_edges(const StabilityMap& map,
                                                            std::size_t epsilon_index);

}  // namespace subres

#include "subres/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "subres/error.hpp"

namespace subres {

namespace {

double axis(double lo, double hi, std::size_t count, std::size_t i) {
  if (count == 1) return lo;
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

double GridSpec::delta_at(std::size_t i) const { return axis(delta_min, delta_max, delta_count, i); }

double GridSpec::epsilon_at(std::size_t j) const {
  return axis(epsilon_min, epsilon_max, epsilon_count, j);
}

void validate(const GridSpec& grid) {
  if (grid.delta_count < 1 || grid.epsilon_count < 1) throw DomainError("grid counts must be >= 1");
  if (!(grid.delta_min <= grid.delta_max)) throw DomainError("grid needs delta_min <= delta_max");
  if (!(grid.epsilon_min <= grid.epsilon_max)) throw DomainError("grid needs epsilon_min <= epsilon_max");
  if (!(grid.epsilon_min >= 0.0)) throw DomainError("grid epsilon must be nonnegative");
  if (!(grid.delta_min > -1.0)) throw DomainError("grid needs omega = 1 + delta > 0");
  if (!(grid.growth_factor > 1.0)) throw DomainError("growth factor must exceed 1");
  if (!(grid.t_end > 0.0)) throw DomainError("grid t_end must be positive");
  if (!(grid.dt > 0.0) || grid.dt > kMaxStep) throw DomainError("grid dt must lie in (0, 0.05]");
}

StabilityMap stability_map(const GridSpec& grid, const CoefficientSpec& spec,
                           const SweepOptions& options) {
  validate(grid);
  StabilityMap map;
  map.grid = grid;
  map.n_terms = truncation_order(spec, {options.abs_tol, options.max_terms, grid.t_end});
  const std::size_t cells = grid.delta_count * grid.epsilon_count;
  map.verdicts.assign(cells, Verdict::bounded);
  map.envelope_ratios.assign(cells, 0.0);

  const double steps = std::ceil(grid.t_end / grid.dt - 1e-9);
  if (steps / static_cast<double>(options.output_stride) + 1.0 < 100.0) {
    throw DomainError("grid horizon yields fewer than 100 samples per cell; lower the stride or raise t_end");
  }

  auto run_cell = [&](std::size_t cell) {
    const std::size_t i = cell / grid.epsilon_count;
    const std::size_t j = cell % grid.epsilon_count;
    OscillatorParams params{grid.delta_at(i), grid.epsilon_at(j), spec, map.n_terms};
    const Trajectory traj = integrate(params, {0.0, 1.0, 0.0}, grid.t_end, grid.dt,
                                      options.output_stride, {options.mode});
    if (traj.truncated) {
      map.verdicts[cell] = Verdict::growing;
      map.envelope_ratios[cell] = std::numeric_limits<double>::infinity();
      return;
    }
    map.envelope_ratios[cell] = growth_ratio(traj);
    map.verdicts[cell] = classify_growth(traj, grid.growth_factor);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      try {
        run_cell(cell);
      } catch (const Error&) {
        map.verdicts[cell] = Verdict::growing;
        map.envelope_ratios[cell] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cells)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  return map;
}

std::vector<std::pair<double, double>> resonance_band_edges(const StabilityMap& map,
                                                            std::size_t epsilon_index) {
  if (epsilon_index >= map.grid.epsilon_count) {
    throw DomainError("epsilon index " + std::to_string(epsilon_index) + " out of range");
  }
  std::vector<std::pair<double, double>> bands;
  std::size_t i = 0;
  const std::size_t n = map.grid.delta_count;
  while (i < n) {
    if (map.verdict(i, epsilon_index) != Verdict::growing) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end + 1 < n && map.verdict(end + 1, epsilon_index) == Verdict::growing) ++end;
    bands.emplace_back(map.grid.delta_at(i), map.grid.delta_at(end));
    i = end + 1;
  }
  return bands;
}

}  // namespace subres

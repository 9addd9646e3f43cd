#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onestep/integrators.hpp"
#include "onestep/stochastizer.hpp"

namespace onestep {

/// Per-time statistics over an ensemble, computed on the shared grid from
/// the runs that had not been absorbed by that time.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<std::vector<double>> mean;      ///< [time][species]; NaN when no run is active
  std::vector<std::vector<double>> variance;  ///< unbiased; 0 with fewer than two active runs
  std::vector<std::size_t> active;            ///< runs contributing at each time
  std::vector<double> absorbed_fraction;
  std::size_t n_runs = 0;
};

/// Streaming aggregator. Runs must be added in run-index order; the result
/// then does not depend on how the runs were scheduled.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator(std::vector<double> grid, std::size_t n_species);

  /// Samples strictly before the absorption sample are grid-aligned and
  /// count towards the moments; the run counts as absorbed from the index
  /// of its last sample on.
  void add(const Trajectory& run);
  EnsembleStats finish() const;

 private:
  std::vector<double> grid_;
  std::size_t n_species_;
  std::size_t n_runs_ = 0;
  std::vector<std::size_t> count_;
  std::vector<std::size_t> absorbed_;
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> m2_;
};

/// Runs `n_runs` independent trajectories (run i uses random stream i of
/// cfg.seed) with the engine selected by cfg.method and aggregates them.
/// `threads` = 0 picks the hardware concurrency.
EnsembleStats ensemble(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                       const SimConfig& cfg, std::size_t n_runs, unsigned threads = 0);

/// Single run of any engine; the trajectory ensemble() would produce as run
/// `stream`.
Trajectory simulate(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                    const SimConfig& cfg, std::uint64_t stream = 0);

}  // namespace onestep

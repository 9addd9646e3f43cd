#include "onestep/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "onestep/errors.hpp"
#include "onestep/ssa.hpp"

namespace onestep {

EnsembleAccumulator::EnsembleAccumulator(std::vector<double> grid, std::size_t n_species)
    : grid_(std::move(grid)),
      n_species_(n_species),
      count_(grid_.size(), 0),
      absorbed_(grid_.size(), 0),
      mean_(grid_.size(), std::vector<double>(n_species, 0.0)),
      m2_(grid_.size(), std::vector<double>(n_species, 0.0)) {}

void EnsembleAccumulator::add(const Trajectory& run) {
  const std::size_t valid = run.absorbed ? run.states.size() - 1 : run.states.size();
  if (valid > grid_.size()) throw std::logic_error("trajectory longer than the ensemble grid");
  for (std::size_t k = 0; k < valid; ++k) {
    const std::size_t c = ++count_[k];
    for (std::size_t i = 0; i < n_species_; ++i) {
      const double x = run.states[k][i];
      const double delta = x - mean_[k][i];
      mean_[k][i] += delta / static_cast<double>(c);
      m2_[k][i] += delta * (x - mean_[k][i]);
    }
  }
  if (run.absorbed)
    for (std::size_t k = valid; k < grid_.size(); ++k) ++absorbed_[k];
  ++n_runs_;
}

EnsembleStats EnsembleAccumulator::finish() const {
  EnsembleStats stats;
  stats.times = grid_;
  stats.n_runs = n_runs_;
  stats.active = count_;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const std::size_t c = count_[k];
    std::vector<double> mean(n_species_, nan), var(n_species_, nan);
    if (c > 0) {
      mean = mean_[k];
      for (std::size_t i = 0; i < n_species_; ++i)
        var[i] = c > 1 ? m2_[k][i] / static_cast<double>(c - 1) : 0.0;
    }
    stats.mean.push_back(std::move(mean));
    stats.variance.push_back(std::move(var));
    stats.absorbed_fraction.push_back(
        n_runs_ == 0 ? 0.0 : static_cast<double>(absorbed_[k]) / static_cast<double>(n_runs_));
  }
  return stats;
}

Trajectory simulate(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                    const SimConfig& cfg, std::uint64_t stream) {
  switch (cfg.method) {
    case Method::Srk3:
    case Method::Em:
      return simulate_sde(model, binding, x0, cfg, stream);
    case Method::Rk4Det:
      return simulate_ode(model, binding, x0, cfg);
    case Method::Ssa: {
      validate_config(cfg);
      SsaOptions opts{cfg.t0, cfg.absorb, stream};
      auto path = gillespie_run(model, binding, to_counts(x0), cfg.t_end, cfg.seed, opts);
      return sample_on_grid(path, cfg);
    }
  }
  throw ConfigError("unknown method");
}

EnsembleStats ensemble(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                       const SimConfig& cfg, std::size_t n_runs, unsigned threads) {
  if (n_runs == 0) throw ConfigError("ensemble needs at least one run");
  EnsembleAccumulator acc(time_grid(cfg).times, model.dimension());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  // Runs are produced in parallel a batch at a time and folded in index
  // order, so the statistics are independent of scheduling.
  const std::size_t batch = std::max<std::size_t>(64, 4 * threads);
  std::vector<Trajectory> slots(batch);
  for (std::size_t first = 0; first < n_runs; first += batch) {
    const std::size_t count = std::min(batch, n_runs - first);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&] {
      for (std::size_t j; (j = next.fetch_add(1)) < count;) {
        try {
          slots[j] = simulate(model, binding, x0, cfg, first + j);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t j = 0; j < count; ++j) acc.add(slots[j]);
  }
  return acc.finish();
}

}  // namespace onestep

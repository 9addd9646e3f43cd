#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "onestep/integrators.hpp"
#include "onestep/polynomial.hpp"
#include "onestep/stochastizer.hpp"

namespace onestep {

using CountState = std::vector<std::int64_t>;

enum class JumpStatus {
  ReachedTMax,
  Extinct,  ///< some species hit zero while other channels were still live
  Silent,   ///< every propensity is zero; the state can never change again
};

struct JumpTrajectory {
  double t0 = 0.0;
  CountState initial_state;
  std::vector<double> jump_times;
  std::vector<CountState> states;  ///< post-jump states
  std::vector<std::size_t> channels;  ///< fired channel per jump, index into propensities
  JumpStatus status = JumpStatus::ReachedTMax;
  double stop_time = 0.0;
  /// Species that reached zero, for Extinct.
  std::size_t extinct_species = 0;

  const CountState& final_state() const {
    return states.empty() ? initial_state : states.back();
  }
};

/// Numeric propensities of every channel, forward rates first then backward
/// rates: a[a] = k+_a prod ff(x_i, n_ia), a[s + a] = k-_a prod ff(x_i, m_ia).
/// Computed directly from the stoichiometry so that a channel needing more
/// molecules than present is exactly zero.
class PropensityEvaluator {
 public:
  /// Throws UnboundSymbolError for a rate parameter missing from `binding`,
  /// ConfigError for a negative rate value.
  PropensityEvaluator(const SdeModel& model, const Binding& binding);

  std::size_t channels() const { return 2 * reactions_; }
  /// Step vector of channel c (+r for forward, -r for backward).
  const std::vector<int>& step(std::size_t c) const { return steps_[c]; }
  void evaluate(std::span<const std::int64_t> x, std::span<double> out) const;

 private:
  std::size_t reactions_ = 0;
  std::vector<double> rates_;                    // 2s
  std::vector<std::vector<int>> requirements_;   // 2s x n
  std::vector<std::vector<int>> steps_;          // 2s x n
};

std::vector<double> propensities_at(const SdeModel& model, const Binding& binding,
                                    std::span<const std::int64_t> x);

struct SsaOptions {
  double t0 = 0.0;
  /// Report Extinct when a species reaches zero.
  bool absorb = true;
  std::uint64_t stream = 0;
};

/// Gillespie direct method on the reaction channels of `model`.
JumpTrajectory gillespie_run(const SdeModel& model, const Binding& binding, const CountState& x0,
                             double t_max, std::uint64_t seed, const SsaOptions& options = {});

/// Samples a jump path onto the grid of `cfg` by last-value interpolation.
/// An extinct path keeps the grid samples strictly before the extinction
/// time and ends with the extinct state at that time.
Trajectory sample_on_grid(const JumpTrajectory& path, const SimConfig& cfg);

/// Rounds an initial state to counts, rejecting negative or fractional values.
CountState to_counts(std::span<const double> x0);

}  // namespace onestep

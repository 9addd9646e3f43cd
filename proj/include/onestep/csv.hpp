#pragma once

#include <string>
#include <vector>

#include "onestep/ensemble.hpp"
#include "onestep/integrators.hpp"

namespace onestep {

/// Shortest decimal text that reads back to the same double.
std::string format_shortest(double v);
/// 17 significant digits ("%.17g").
std::string format_g17(double v);

/// Trajectory CSV:
///
///   # seed=<u64> method=<name> h=<decimal>[ <extra>]
///   t,<species...>
///   <rows, 17 significant digits>
///   # absorbed t=<t> species=<name>      (absorbed runs only)
///
/// `extra` is appended verbatim to the first line after a space.
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& species,
                           const std::string& extra = {});

/// Ensemble CSV with columns t, mean_<s>..., var_<s>..., absorbed_fraction.
/// The first line also records runs=<N>.
std::string ensemble_csv(const EnsembleStats& stats, const std::vector<std::string>& species,
                         std::uint64_t seed, Method method, double h,
                         const std::string& extra = {});

}  // namespace onestep

#include "onestep/csv.hpp"

#include <charconv>
#include <cstdio>

namespace onestep {

std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_g17(double v) {
  char buf[64];
  int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

namespace {

std::string header(std::uint64_t seed, Method method, double h, const std::string& extra) {
  std::string out = "# seed=" + std::to_string(seed) + " method=" + method_name(method) +
                    " h=" + format_shortest(h);
  if (!extra.empty()) out += " " + extra;
  return out + "\n";
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& species,
                           const std::string& extra) {
  std::string out = header(traj.seed, traj.method, traj.h, extra);
  out += "t";
  for (const auto& s : species) out += "," + s;
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += format_g17(traj.times[k]);
    for (double v : traj.states[k]) out += "," + format_g17(v);
    out += "\n";
  }
  if (traj.absorbed)
    out += "# absorbed t=" + format_g17(traj.absorbed->time) +
           " species=" + species.at(traj.absorbed->species) + "\n";
  return out;
}

std::string ensemble_csv(const EnsembleStats& stats, const std::vector<std::string>& species,
                         std::uint64_t seed, Method method, double h, const std::string& extra) {
  std::string tail = "runs=" + std::to_string(stats.n_runs);
  if (!extra.empty()) tail += " " + extra;
  std::string out = header(seed, method, h, tail);
  out += "t";
  for (const auto& s : species) out += ",mean_" + s;
  for (const auto& s : species) out += ",var_" + s;
  out += ",absorbed_fraction\n";
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    out += format_g17(stats.times[k]);
    for (double v : stats.mean[k]) out += "," + format_g17(v);
    for (double v : stats.variance[k]) out += "," + format_g17(v);
    out += "," + format_g17(stats.absorbed_fraction[k]) + "\n";
  }
  return out;
}

}  // namespace onestep

#include "onestep/ssa.hpp"

#include <cmath>
#include <stdexcept>

#include "onestep/errors.hpp"
#include "onestep/random.hpp"

namespace onestep {

namespace {

double rate_value(const Rate& rate, const Binding& binding) {
  double v;
  if (const auto* sym = std::get_if<std::string>(&rate)) {
    auto it = binding.find(*sym);
    if (it == binding.end()) throw UnboundSymbolError(*sym);
    v = it->second;
  } else {
    v = to_double(std::get<Rational>(rate));
  }
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ConfigError("rate constant must be finite and nonnegative, got " + std::to_string(v));
  return v;
}

}  // namespace

PropensityEvaluator::PropensityEvaluator(const SdeModel& model, const Binding& binding)
    : reactions_(model.network.reactions.size()) {
  const auto& reactions = model.network.reactions;
  rates_.resize(2 * reactions_, 0.0);
  requirements_.resize(2 * reactions_);
  steps_.resize(2 * reactions_);
  for (std::size_t a = 0; a < reactions_; ++a) {
    const auto& r = reactions[a];
    const auto& delta = model.step_ops.r[a];
    rates_[a] = rate_value(r.k_forward, binding);
    requirements_[a] = r.reactants;
    steps_[a] = delta;
    if (r.k_backward) rates_[reactions_ + a] = rate_value(*r.k_backward, binding);
    requirements_[reactions_ + a] = r.products;
    steps_[reactions_ + a].resize(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) steps_[reactions_ + a][i] = -delta[i];
  }
}

void PropensityEvaluator::evaluate(std::span<const std::int64_t> x, std::span<double> out) const {
  for (std::size_t c = 0; c < rates_.size(); ++c) {
    double value = rates_[c];
    for (std::size_t i = 0; i < x.size() && value != 0.0; ++i) {
      const int need = requirements_[c][i];
      if (x[i] < need) {
        value = 0.0;
        break;
      }
      for (int j = 0; j < need; ++j) value *= static_cast<double>(x[i] - j);
    }
    out[c] = value;
  }
}

std::vector<double> propensities_at(const SdeModel& model, const Binding& binding,
                                    std::span<const std::int64_t> x) {
  if (x.size() != model.dimension())
    throw ConfigError("state has " + std::to_string(x.size()) + " components, model has " +
                      std::to_string(model.dimension()));
  for (auto v : x)
    if (v < 0) throw ConfigError("propensities need a nonnegative state");
  PropensityEvaluator pe(model, binding);
  std::vector<double> out(pe.channels());
  pe.evaluate(x, out);
  return out;
}

CountState to_counts(std::span<const double> x0) {
  CountState out;
  for (double v : x0) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
      throw ConfigError("ssa needs nonnegative integer initial counts, got " + std::to_string(v));
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

JumpTrajectory gillespie_run(const SdeModel& model, const Binding& binding, const CountState& x0,
                             double t_max, std::uint64_t seed, const SsaOptions& options) {
  if (x0.size() != model.dimension())
    throw ConfigError("initial state has " + std::to_string(x0.size()) +
                      " components, model has " + std::to_string(model.dimension()));
  for (auto v : x0)
    if (v < 0) throw ConfigError("ssa needs a nonnegative initial state");
  if (!(t_max >= options.t0)) throw ConfigError("t_max must not precede t0");

  const PropensityEvaluator pe(model, binding);
  RandomStream rng(seed, options.stream);
  JumpTrajectory path;
  path.t0 = options.t0;
  path.initial_state = x0;

  CountState x = x0;
  std::vector<double> a(pe.channels());
  double t = options.t0;
  for (;;) {
    pe.evaluate(x, a);
    double a0 = 0.0;
    for (double v : a) a0 += v;
    if (a0 == 0.0) {
      path.status = JumpStatus::Silent;
      path.stop_time = t;
      return path;
    }
    if (options.absorb) {
      bool extinct = false;
      for (std::size_t i = 0; i < x.size() && !extinct; ++i)
        if (x[i] == 0) {
          path.extinct_species = i;
          extinct = true;
        }
      if (extinct) {
        path.status = JumpStatus::Extinct;
        path.stop_time = t;
        return path;
      }
    }

    const double tau = rng.exponential() / a0;
    if (t + tau > t_max) {
      path.status = JumpStatus::ReachedTMax;
      path.stop_time = t_max;
      return path;
    }
    t += tau;

    const double target = rng.uniform() * a0;
    std::size_t channel = a.size();
    double cumulative = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (a[c] <= 0.0) continue;
      channel = c;  // last live channel absorbs rounding at the top end
      cumulative += a[c];
      if (target < cumulative) break;
    }

    const auto& delta = pe.step(channel);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += delta[i];
      if (x[i] < 0) throw std::logic_error("ssa produced a negative count");
    }
    path.jump_times.push_back(t);
    path.states.push_back(x);
    path.channels.push_back(channel);
  }
}

Trajectory sample_on_grid(const JumpTrajectory& path, const SimConfig& cfg) {
  const TimeGrid grid = time_grid(cfg);
  Trajectory traj;
  traj.seed = cfg.seed;
  traj.method = Method::Ssa;
  traj.h = cfg.h;

  auto as_double = [](const CountState& s) { return std::vector<double>(s.begin(), s.end()); };
  std::size_t next_jump = 0;
  const CountState* current = &path.initial_state;
  for (double t : grid.times) {
    if (path.status == JumpStatus::Extinct && t >= path.stop_time) {
      traj.times.push_back(path.stop_time);
      traj.states.push_back(as_double(path.final_state()));
      traj.absorbed = Absorption{path.stop_time, path.extinct_species};
      return traj;
    }
    while (next_jump < path.jump_times.size() && path.jump_times[next_jump] <= t)
      current = &path.states[next_jump++];
    traj.times.push_back(t);
    traj.states.push_back(as_double(*current));
  }
  return traj;
}

}  // namespace onestep

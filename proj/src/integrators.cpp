#include "onestep/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onestep/errors.hpp"
#include "onestep/random.hpp"

namespace onestep {

std::string method_name(Method m) {
  switch (m) {
    case Method::Srk3: return "srk3";
    case Method::Em: return "em";
    case Method::Rk4Det: return "rk4-det";
    case Method::Ssa: return "ssa";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "srk3") return Method::Srk3;
  if (name == "em") return Method::Em;
  if (name == "rk4-det") return Method::Rk4Det;
  if (name == "ssa") return Method::Ssa;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected srk3, em, rk4-det or ssa)");
}

void validate_config(const SimConfig& cfg) {
  if (!std::isfinite(cfg.t0) || !std::isfinite(cfg.t_end) || !std::isfinite(cfg.h))
    throw ConfigError("time parameters must be finite");
  if (!(cfg.t_end > cfg.t0)) throw ConfigError("t_end must be greater than t0");
  if (!(cfg.h > 0.0)) throw ConfigError("step size must be positive");
  if (cfg.h > cfg.t_end - cfg.t0) throw ConfigError("step size exceeds the integration interval");
}

TimeGrid time_grid(const SimConfig& cfg) {
  validate_config(cfg);
  const double span = cfg.t_end - cfg.t0;
  const double q = span / cfg.h;
  double whole = std::round(q);
  bool exact = std::abs(q - whole) <= 1e-9 * std::max(1.0, q);
  const auto n = static_cast<std::size_t>(exact ? whole : std::ceil(q));

  TimeGrid grid;
  grid.times.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) grid.times.push_back(cfg.t0 + static_cast<double>(k) * cfg.h);
  grid.times.push_back(cfg.t_end);
  grid.steps.assign(n, cfg.h);
  if (!exact) grid.steps.back() = cfg.t_end - grid.times[n - 1];
  return grid;
}

// ---- Stepping ---------------------------------------------------------------

namespace {

Eigen::VectorXd explicit_step(const NumericTableau& tab, const DriftFn& drift,
                              const NoiseFn* noise, const Eigen::VectorXd& x0, double h,
                              const Eigen::VectorXd* J) {
  const std::size_t s = tab.stages;
  const Eigen::Index n = x0.size();

  // Stage l needs b(X_l) only if a later stage or the update uses it.
  std::vector<bool> noise_used(s, false);
  if (noise) {
    for (std::size_t l = 0; l < s; ++l) {
      noise_used[l] = tab.noise_weights[l] != 0.0;
      for (std::size_t k = l + 1; k < s; ++k)
        if (tab.noise_stages[k][l] != 0.0) noise_used[l] = true;
    }
  }

  std::vector<Eigen::VectorXd> a(s, Eigen::VectorXd(n));
  std::vector<Eigen::VectorXd> bj(s, Eigen::VectorXd::Zero(n));
  Eigen::MatrixXd b;
  Eigen::VectorXd drift_acc(n), noise_acc(n), stage(n);

  auto combine = [&](const std::vector<double>& drift_w, const std::vector<double>& noise_w,
                     std::size_t upto) {
    drift_acc.setZero();
    noise_acc.setZero();
    for (std::size_t l = 0; l < upto; ++l) {
      if (drift_w[l] != 0.0) drift_acc += drift_w[l] * a[l];
      if (noise && noise_w[l] != 0.0) noise_acc += noise_w[l] * bj[l];
    }
    Eigen::VectorXd out = x0 + h * drift_acc;
    if (noise) out += noise_acc;
    return out;
  };

  for (std::size_t k = 0; k < s; ++k) {
    stage = combine(tab.drift_stages[k], tab.noise_stages[k], k);
    drift(stage, a[k]);
    if (noise_used[k]) {
      (*noise)(stage, b);
      bj[k] = b * (*J);
    }
  }
  return combine(tab.drift_weights, tab.noise_weights, s);
}

}  // namespace

Eigen::VectorXd srk_step(const NumericTableau& tab, const DriftFn& drift, const NoiseFn& noise,
                         const Eigen::VectorXd& x0, double h, const Eigen::VectorXd& J) {
  return explicit_step(tab, drift, &noise, x0, h, &J);
}

Eigen::VectorXd rk_step(const NumericTableau& tab, const DriftFn& drift,
                        const Eigen::VectorXd& x0, double h) {
  return explicit_step(tab, drift, nullptr, x0, h, nullptr);
}

// ---- Model evaluation -------------------------------------------------------

ModelEvaluator::ModelEvaluator(const SdeModel& model, const Binding& binding)
    : n_(model.dimension()) {
  std::vector<std::string> slot_names;
  for (const auto& p : model.network.parameters) {
    if (auto it = binding.find(p.name); it != binding.end()) {
      slot_names.push_back(p.name);
      slots_.push_back(it->second);
    }
  }
  n_params_ = slot_names.size();
  for (const auto& s : model.species_names()) slot_names.push_back(s);
  slots_.resize(slot_names.size(), 0.0);

  for (const auto& p : model.drift) drift_.emplace_back(p, slot_names);
  for (const auto& row : model.diffusion)
    for (const auto& p : row) diffusion_.emplace_back(p, slot_names);
}

void ModelEvaluator::load(const Eigen::VectorXd& x, bool project) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double v = x(static_cast<Eigen::Index>(i));
    slots_[n_params_ + i] = project && v < 0.0 ? 0.0 : v;
  }
}

void ModelEvaluator::drift(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  load(x, false);
  out.resize(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) out(static_cast<Eigen::Index>(i)) = drift_[i](slots_);
}

void ModelEvaluator::diffusion(const Eigen::VectorXd& x, Eigen::MatrixXd& out) const {
  load(x, project_);
  const auto n = static_cast<Eigen::Index>(n_);
  out.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = diffusion_[static_cast<std::size_t>(i * n + j)](slots_);
}

void ModelEvaluator::noise(const Eigen::VectorXd& x, Eigen::MatrixXd& out) const {
  Eigen::MatrixXd B;
  diffusion(x, B);
  try {
    out = matrix_sqrt_psd(B);
  } catch (const NotPsdError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << e.what() << " at state (";
    for (Eigen::Index i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x(i);
    msg << ")";
    throw NotPsdError(msg.str());
  }
}

Binding resolve_binding(const SdeModel& model, const Binding& overrides) {
  Binding out;
  std::string missing;
  for (const auto& p : model.network.parameters) {
    if (auto it = overrides.find(p.name); it != overrides.end())
      out[p.name] = it->second;
    else if (p.default_value)
      out[p.name] = to_double(*p.default_value);
    else
      missing += (missing.empty() ? "" : ", ") + p.name;
  }
  if (!missing.empty()) throw ConfigError("missing value for parameter(s): " + missing);
  for (const auto& [name, _] : overrides)
    if (!model.network.parameter_index(name))
      throw ConfigError("'" + name + "' is not a parameter of the model");
  return out;
}

// ---- Simulation drivers -----------------------------------------------------

namespace {

std::optional<std::size_t> nonpositive_component(const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) <= 0.0) return static_cast<std::size_t>(i);
  return std::nullopt;
}

std::vector<double> to_std(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

Eigen::VectorXd initial_state(const SdeModel& model, std::span<const double> x0) {
  if (x0.size() != model.dimension())
    throw ConfigError("initial state has " + std::to_string(x0.size()) + " components, model has " +
                      std::to_string(model.dimension()) + " species");
  Eigen::VectorXd x(static_cast<Eigen::Index>(x0.size()));
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!std::isfinite(x0[i])) throw ConfigError("initial state must be finite");
    x(static_cast<Eigen::Index>(i)) = x0[i];
  }
  return x;
}

// Fixed-step march shared by all drivers. `step` advances one step of the
// given size ending at the given time.
template <typename Step>
Trajectory march(const SdeModel& model, std::span<const double> x0, const SimConfig& cfg,
                 Step&& step) {
  const TimeGrid grid = time_grid(cfg);
  Trajectory traj;
  traj.seed = cfg.seed;
  traj.method = cfg.method;
  traj.h = cfg.h;

  Eigen::VectorXd x = initial_state(model, x0);
  traj.times.push_back(grid.times[0]);
  traj.states.push_back(to_std(x));
  if (cfg.absorb)
    if (auto i = nonpositive_component(x)) {
      traj.absorbed = Absorption{grid.times[0], *i};
      return traj;
    }

  for (std::size_t k = 0; k < grid.steps.size(); ++k) {
    const double t = grid.times[k + 1];
    try {
      x = step(x, grid.steps[k]);
    } catch (const NotPsdError& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << e.what() << " during step ending at t=" << t;
      throw NotPsdError(msg.str());
    }
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state became non-finite at t=" << t;
      throw Error(msg.str());
    }
    traj.times.push_back(t);
    traj.states.push_back(to_std(x));
    if (cfg.absorb)
      if (auto i = nonpositive_component(x)) {
        traj.absorbed = Absorption{t, *i};
        return traj;
      }
  }
  return traj;
}

}  // namespace

Trajectory simulate_sde(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                        const SimConfig& cfg, std::uint64_t stream) {
  validate_config(cfg);
  if (cfg.method != Method::Srk3 && cfg.method != Method::Em)
    throw ConfigError("simulate_sde supports srk3 and em, not " + method_name(cfg.method));
  const NumericTableau tab(cfg.method == Method::Srk3 ? srk3_tableau() : em_tableau());
  ModelEvaluator eval(model, binding);
  eval.set_project_diffusion_state(cfg.absorb);
  const DriftFn drift = [&eval](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    eval.drift(x, out);
  };
  const NoiseFn noise = [&eval](const Eigen::VectorXd& x, Eigen::MatrixXd& out) {
    eval.noise(x, out);
  };

  RandomStream rng(cfg.seed, stream);
  const auto n = static_cast<Eigen::Index>(model.dimension());
  Eigen::VectorXd J(n);
  return march(model, x0, cfg, [&](const Eigen::VectorXd& x, double h) {
    const double root_h = std::sqrt(h);
    for (Eigen::Index a = 0; a < n; ++a) J(a) = root_h * rng.normal();
    return srk_step(tab, drift, noise, x, h, J);
  });
}

Trajectory simulate_deterministic(const SdeModel& model, const Binding& binding,
                                  std::span<const double> x0, const SimConfig& cfg,
                                  const ButcherTableau& tableau) {
  const NumericTableau tab(tableau);
  ModelEvaluator eval(model, binding);
  const DriftFn drift = [&eval](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    eval.drift(x, out);
  };
  return march(model, x0, cfg,
               [&](const Eigen::VectorXd& x, double h) { return rk_step(tab, drift, x, h); });
}

Trajectory simulate_ode(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                        const SimConfig& cfg) {
  if (cfg.method != Method::Rk4Det)
    throw ConfigError("simulate_ode requires method rk4-det, not " + method_name(cfg.method));
  return simulate_deterministic(model, binding, x0, cfg, rk4_tableau());
}

}  // namespace onestep

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "onestep/matrix_sqrt.hpp"
#include "onestep/polynomial.hpp"
#include "onestep/stochastizer.hpp"
#include "onestep/tableau.hpp"

namespace onestep {

enum class Method { Srk3, Em, Rk4Det, Ssa };

std::string method_name(Method m);
/// Accepts "srk3", "em", "rk4-det", "ssa"; throws ConfigError otherwise.
Method parse_method(std::string_view name);

struct SimConfig {
  double t0 = 0.0;
  double t_end = 1.0;
  double h = 1e-3;
  std::uint64_t seed = 0;
  Method method = Method::Srk3;
  /// Stop once a component reaches zero or below.
  bool absorb = true;
};

/// Throws ConfigError unless t_end > t0, 0 < h <= t_end - t0, all finite.
void validate_config(const SimConfig& cfg);

/// Fixed-step grid t0, t0+h, ..., ending exactly at t_end. When the span
/// is not a whole number of steps the final step is shortened.
struct TimeGrid {
  std::vector<double> times;
  std::vector<double> steps;  ///< steps[k] = size of the step ending at times[k+1]
};
TimeGrid time_grid(const SimConfig& cfg);

struct Absorption {
  double time = 0.0;
  std::size_t species = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::optional<Absorption> absorbed;
  std::uint64_t seed = 0;
  Method method = Method::Srk3;
  double h = 0.0;

  bool completed() const { return !absorbed.has_value(); }
};

using DriftFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& out)>;
/// Produces the noise matrix b(x) (n x m) for the Langevin form.
using NoiseFn = std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& out)>;

/// One step of the explicit stochastic Runge-Kutta scheme. Stages are built
/// in order, each from earlier stages only; J holds one Wiener increment
/// per noise dimension.
Eigen::VectorXd srk_step(const NumericTableau& tab, const DriftFn& drift, const NoiseFn& noise,
                         const Eigen::VectorXd& x0, double h, const Eigen::VectorXd& J);

/// Deterministic explicit Runge-Kutta step with the drift half of `tab`.
/// Shares the arithmetic of srk_step, so a zero noise matrix gives
/// bit-identical results.
Eigen::VectorXd rk_step(const NumericTableau& tab, const DriftFn& drift,
                        const Eigen::VectorXd& x0, double h);

/// Drift and diffusion of a model with all parameters bound to numbers.
class ModelEvaluator {
 public:
  /// Throws UnboundSymbolError naming the first parameter without a value.
  ModelEvaluator(const SdeModel& model, const Binding& binding);

  std::size_t dimension() const { return n_; }
  void drift(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  void diffusion(const Eigen::VectorXd& x, Eigen::MatrixXd& out) const;
  /// b = sqrt(B(x)); NotPsdError messages carry the offending state.
  void noise(const Eigen::VectorXd& x, Eigen::MatrixXd& out) const;

  /// Evaluate B at the state with negative components replaced by zero.
  /// Used with the absorbing boundary, whose physical domain is x >= 0.
  void set_project_diffusion_state(bool on) { project_ = on; }

 private:
  void load(const Eigen::VectorXd& x, bool project) const;

  std::size_t n_ = 0;
  std::size_t n_params_ = 0;
  std::vector<CompiledPolynomial> drift_;
  std::vector<CompiledPolynomial> diffusion_;  // row-major n x n
  mutable std::vector<double> slots_;
  bool project_ = false;
};

/// Collects the parameter values a simulation needs: defaults from the
/// network overlaid with `overrides`. Throws ConfigError listing every
/// parameter left without a value.
Binding resolve_binding(const SdeModel& model, const Binding& overrides);

/// Integrates the Langevin equation with srk3 or em. Wiener increments are
/// sqrt(step) * N(0,1), one fresh draw per species per step, from
/// RandomStream(cfg.seed, stream).
Trajectory simulate_sde(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                        const SimConfig& cfg, std::uint64_t stream = 0);

/// Classical RK4 on the drift only (method rk4-det).
Trajectory simulate_ode(const SdeModel& model, const Binding& binding, std::span<const double> x0,
                        const SimConfig& cfg);

/// Drift-only integration with an arbitrary explicit tableau.
Trajectory simulate_deterministic(const SdeModel& model, const Binding& binding,
                                  std::span<const double> x0, const SimConfig& cfg,
                                  const ButcherTableau& tableau);

}  // namespace onestep

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "onestep/rational.hpp"

namespace onestep {

/// Coefficients of an explicit stochastic Runge-Kutta method:
///
///   X_k = x0 + h sum_l R[k][l] a(X_l) + sum_l Rhat[k][l] b(X_l) J
///   x1  = x0 + h sum_l r[l]    a(X_l) + sum_l rhat[l]    b(X_l) J
///
/// A deterministic method is the special case Rhat = 0, rhat = 0.
struct ButcherTableau {
  std::string name;
  std::vector<std::vector<Rational>> drift_stages;  ///< R
  std::vector<std::vector<Rational>> noise_stages;  ///< Rhat
  std::vector<Rational> drift_weights;              ///< r
  std::vector<Rational> noise_weights;              ///< rhat

  std::size_t stages() const { return drift_weights.size(); }
  /// Both stage matrices strictly lower triangular.
  bool is_explicit() const;
};

/// Throws ConfigError unless the tableau is square, explicit and its drift
/// weights sum to one.
void validate_tableau(const ButcherTableau& tab);

/// Three-stage scheme used for the predator-prey experiments.
ButcherTableau srk3_tableau();
/// Euler-Maruyama as a one-stage scheme.
ButcherTableau em_tableau();
/// Classical fourth-order Runge-Kutta, drift only.
ButcherTableau rk4_tableau();

/// {"srk3", "em"}: the stochastic tables.
std::map<std::string, ButcherTableau> builtin_tableaux();

/// Same coefficients as doubles, ready for stepping.
struct NumericTableau {
  std::size_t stages = 0;
  std::vector<std::vector<double>> drift_stages;
  std::vector<std::vector<double>> noise_stages;
  std::vector<double> drift_weights;
  std::vector<double> noise_weights;

  explicit NumericTableau(const ButcherTableau& tab);
};

}  // namespace onestep

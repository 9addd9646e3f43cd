#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "onestep/model.hpp"
#include "onestep/polynomial.hpp"

namespace onestep {

/// State-change vectors r = m - n, one row per reaction.
struct StepOperators {
  std::size_t n_species = 0;
  std::vector<std::vector<int>> r;
};

/// Forward and backward transition rates s+ and s- per reaction.
struct RatePair {
  std::vector<Polynomial> s_plus;
  std::vector<Polynomial> s_minus;
};

/// Compiled Fokker-Planck / Langevin model: drift A^i and symmetric
/// diffusion B^ij as exact polynomials in parameter and species symbols.
struct SdeModel {
  ReactionNetwork network;
  StepOperators step_ops;
  RatePair rates;
  std::vector<Polynomial> drift;
  PolynomialMatrix diffusion;

  std::size_t dimension() const { return drift.size(); }
  std::vector<std::string> species_names() const { return network.species_names(); }
  std::vector<std::string> symbol_order() const { return network.symbol_order(); }
};

StepOperators step_operators(const ReactionNetwork& net);

/// s+ = k+ prod_i ff(x_i, n_i),  s- = k- prod_i ff(x_i, m_i), with ff the
/// falling factorial. s- is zero for irreversible schemes.
RatePair transition_rates(const ReactionNetwork& net);

/// A^i = sum_a r^{ia} (s+_a - s-_a).
std::vector<Polynomial> drift_vector(const StepOperators& ops, const RatePair& rates);

/// B^ij = sum_a r^{ia} r^{ja} (s+_a + s-_a).
PolynomialMatrix diffusion_matrix(const StepOperators& ops, const RatePair& rates);

/// Full pipeline from a validated network to its SDE coefficients.
SdeModel stochastize(const ReactionNetwork& net);

/// Wraps hand-written coefficients as a model without reaction channels.
/// Every free symbol must be a listed species or parameter; the diffusion
/// matrix must be square, match the drift length and be symmetric.
SdeModel make_sde_model(const std::vector<std::string>& species,
                        const std::vector<std::string>& parameters,
                        std::vector<Polynomial> drift, PolynomialMatrix diffusion);

}  // namespace onestep

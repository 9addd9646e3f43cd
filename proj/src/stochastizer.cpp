#include "onestep/stochastizer.hpp"

#include <set>

#include "onestep/errors.hpp"

namespace onestep {

namespace {

Polynomial rate_polynomial(const Rate& rate) {
  if (const auto* sym = std::get_if<std::string>(&rate)) return Polynomial::variable(*sym);
  return Polynomial::constant(std::get<Rational>(rate));
}

// k * prod_i ff(x_i, counts_i); the calcProd construction.
Polynomial combinatorial_rate(const Rate& k, const std::vector<int>& counts,
                              const std::vector<Species>& species) {
  Polynomial out = rate_polynomial(k);
  for (std::size_t i = 0; i < species.size(); ++i)
    if (counts[i] != 0)
      out *= falling_factorial(species[i].name, static_cast<unsigned>(counts[i]));
  return out;
}

}  // namespace

StepOperators step_operators(const ReactionNetwork& net) {
  StepOperators ops;
  ops.n_species = net.species.size();
  for (const auto& reaction : net.reactions) {
    std::vector<int> row(ops.n_species);
    for (std::size_t i = 0; i < ops.n_species; ++i)
      row[i] = reaction.products[i] - reaction.reactants[i];
    ops.r.push_back(std::move(row));
  }
  return ops;
}

RatePair transition_rates(const ReactionNetwork& net) {
  RatePair rates;
  for (const auto& reaction : net.reactions) {
    rates.s_plus.push_back(combinatorial_rate(reaction.k_forward, reaction.reactants, net.species));
    rates.s_minus.push_back(reaction.k_backward ? combinatorial_rate(*reaction.k_backward,
                                                                     reaction.products, net.species)
                                                : Polynomial{});
  }
  return rates;
}

std::vector<Polynomial> drift_vector(const StepOperators& ops, const RatePair& rates) {
  std::vector<Polynomial> a(ops.n_species);
  for (std::size_t alpha = 0; alpha < ops.r.size(); ++alpha) {
    const Polynomial net_rate = rates.s_plus[alpha] - rates.s_minus[alpha];
    for (std::size_t i = 0; i < ops.n_species; ++i)
      if (ops.r[alpha][i] != 0) a[i] += poly_scale(net_rate, ops.r[alpha][i]);
  }
  return a;
}

PolynomialMatrix diffusion_matrix(const StepOperators& ops, const RatePair& rates) {
  const std::size_t n = ops.n_species;
  PolynomialMatrix b(n, std::vector<Polynomial>(n));
  for (std::size_t alpha = 0; alpha < ops.r.size(); ++alpha) {
    // Second jump moment: forward and backward jumps both add r r^T.
    const Polynomial total_rate = rates.s_plus[alpha] + rates.s_minus[alpha];
    const auto& r = ops.r[alpha];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i] != 0 && r[j] != 0) b[i][j] += poly_scale(total_rate, r[i] * r[j]);
  }
  return b;
}

SdeModel stochastize(const ReactionNetwork& net) {
  validate_network(net);
  SdeModel model;
  model.network = net;
  model.step_ops = step_operators(net);
  model.rates = transition_rates(net);
  model.drift = drift_vector(model.step_ops, model.rates);
  model.diffusion = diffusion_matrix(model.step_ops, model.rates);
  return model;
}

SdeModel make_sde_model(const std::vector<std::string>& species,
                        const std::vector<std::string>& parameters,
                        std::vector<Polynomial> drift, PolynomialMatrix diffusion) {
  SdeModel model;
  for (const auto& name : species)
    model.network.species.push_back({name, model.network.species.size()});
  for (const auto& name : parameters) model.network.parameters.push_back({name, std::nullopt});
  validate_network(model.network);

  const std::size_t n = species.size();
  if (drift.size() != n)
    throw ValidationError("drift has " + std::to_string(drift.size()) + " entries for " +
                          std::to_string(n) + " species");
  if (diffusion.size() != n)
    throw ValidationError("diffusion matrix has " + std::to_string(diffusion.size()) +
                          " rows for " + std::to_string(n) + " species");
  for (const auto& row : diffusion)
    if (row.size() != n) throw ValidationError("diffusion matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (diffusion[i][j] != diffusion[j][i])
        throw ValidationError("diffusion matrix is not symmetric at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");

  const std::set<std::string> known = [&] {
    auto order = model.network.symbol_order();
    return std::set<std::string>(order.begin(), order.end());
  }();
  auto check = [&](const Polynomial& p) {
    for (const auto& sym : p.symbols())
      if (!known.contains(sym)) throw ValidationError("unknown symbol '" + sym + "'");
  };
  for (const auto& p : drift) check(p);
  for (const auto& row : diffusion)
    for (const auto& p : row) check(p);

  model.step_ops.n_species = n;
  model.drift = std::move(drift);
  model.diffusion = std::move(diffusion);
  return model;
}

}  // namespace onestep

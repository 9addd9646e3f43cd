#include "onestep/tableau.hpp"

#include "onestep/errors.hpp"

namespace onestep {

bool ButcherTableau::is_explicit() const {
  const std::size_t s = stages();
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t l = k; l < s; ++l)
      if (drift_stages[k][l] != 0 || noise_stages[k][l] != 0) return false;
  return true;
}

void validate_tableau(const ButcherTableau& tab) {
  const std::size_t s = tab.stages();
  if (s == 0) throw ConfigError("tableau '" + tab.name + "' has no stages");
  auto square = [s](const auto& m) {
    if (m.size() != s) return false;
    for (const auto& row : m)
      if (row.size() != s) return false;
    return true;
  };
  if (!square(tab.drift_stages) || !square(tab.noise_stages) || tab.noise_weights.size() != s)
    throw ConfigError("tableau '" + tab.name + "' has inconsistent dimensions");
  if (!tab.is_explicit()) throw ConfigError("tableau '" + tab.name + "' is not explicit");
  Rational sum = 0;
  for (const auto& w : tab.drift_weights) sum += w;
  if (sum != 1) throw ConfigError("drift weights of tableau '" + tab.name + "' do not sum to 1");
}

ButcherTableau srk3_tableau() {
  using R = Rational;
  std::vector<std::vector<R>> stages{
      {R(0), R(0), R(0)},
      {R(2, 3), R(0), R(0)},
      {R(-1), R(1), R(0)},
  };
  std::vector<R> weights{R(0), R(3, 4), R(1, 4)};
  return {"srk3", stages, stages, weights, weights};
}

ButcherTableau em_tableau() {
  return {"em", {{Rational(0)}}, {{Rational(0)}}, {Rational(1)}, {Rational(1)}};
}

ButcherTableau rk4_tableau() {
  using R = Rational;
  std::vector<std::vector<R>> stages{
      {R(0), R(0), R(0), R(0)},
      {R(1, 2), R(0), R(0), R(0)},
      {R(0), R(1, 2), R(0), R(0)},
      {R(0), R(0), R(1), R(0)},
  };
  std::vector<std::vector<R>> zero(4, std::vector<R>(4, R(0)));
  return {"rk4-det", stages, zero, {R(1, 6), R(1, 3), R(1, 3), R(1, 6)}, std::vector<R>(4, R(0))};
}

std::map<std::string, ButcherTableau> builtin_tableaux() {
  return {{"srk3", srk3_tableau()}, {"em", em_tableau()}};
}

NumericTableau::NumericTableau(const ButcherTableau& tab) : stages(tab.stages()) {
  validate_tableau(tab);
  auto convert = [](const std::vector<Rational>& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
  };
  for (const auto& row : tab.drift_stages) drift_stages.push_back(convert(row));
  for (const auto& row : tab.noise_stages) noise_stages.push_back(convert(row));
  drift_weights = convert(tab.drift_weights);
  noise_weights = convert(tab.noise_weights);
}

}  // namespace onestep

#include <doctest.h>

#include <cmath>

#include "onestep/ensemble.hpp"
#include "onestep/errors.hpp"
#include "onestep/model.hpp"
#include "onestep/stochastizer.hpp"

using namespace onestep;

namespace {

Polynomial P(const char* text) { return parse_poly(text); }

Trajectory fake(std::vector<double> xs, bool absorbed) {
  Trajectory t;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    t.times.push_back(static_cast<double>(k));
    t.states.push_back({xs[k]});
  }
  if (absorbed) t.absorbed = Absorption{static_cast<double>(xs.size() - 1), 0};
  return t;
}

SdeModel predator_prey() {
  return stochastize(parse_model("species x y\nparams k1=10 k2=3/2 k3=17/2\n"
                                 "reaction x -> 2 x @ k1\nreaction x + y -> 2 y @ k2\n"
                                 "reaction y -> 0 @ k3\n"));
}

}  // namespace

TEST_CASE("accumulator statistics against direct formulas") {
  EnsembleAccumulator acc({0, 1, 2, 3}, 1);
  acc.add(fake({1, 2, 3, 4}, false));
  acc.add(fake({1, 4, -0.5}, true));  // absorbed at index 2
  acc.add(fake({1, 6, 5, 2}, false));
  acc.add(fake({0}, true));           // absorbed at the start
  auto s = acc.finish();
  CHECK(s.n_runs == 4);
  CHECK(s.active == std::vector<std::size_t>{3, 3, 2, 2});
  CHECK(s.absorbed_fraction == std::vector<double>{0.25, 0.25, 0.5, 0.5});
  CHECK(s.mean[0][0] == 1);
  CHECK(s.variance[0][0] == 0);
  CHECK(s.mean[1][0] == doctest::Approx(4));
  CHECK(s.variance[1][0] == doctest::Approx(4));  // {2,4,6}
  CHECK(s.mean[2][0] == doctest::Approx(4));
  CHECK(s.variance[2][0] == doctest::Approx(2));  // {3,5}
  CHECK(s.mean[3][0] == doctest::Approx(3));

  EnsembleAccumulator gone({0, 1}, 1);
  gone.add(fake({0}, true));
  auto g = gone.finish();
  CHECK(std::isnan(g.mean[0][0]));
  CHECK(g.absorbed_fraction[1] == 1.0);
}

TEST_CASE("single run ensemble equals the trajectory") {
  auto m = predator_prey();
  auto b = resolve_binding(m, {});
  SimConfig cfg;
  cfg.t_end = 0.5;
  cfg.h = 1e-3;
  cfg.seed = 5;
  std::vector<double> x0{9.7, 6.77};
  auto traj = simulate(m, b, x0, cfg);
  auto stats = ensemble(m, b, x0, cfg, 1);
  REQUIRE(stats.times == traj.times);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(stats.mean[k] == traj.states[k]);
    CHECK(stats.variance[k] == std::vector<double>{0, 0});
  }
}

TEST_CASE("ensemble is reproducible and independent of thread count") {
  auto m = predator_prey();
  auto b = resolve_binding(m, {});
  std::vector<double> x0{9.7, 6.77};
  for (Method method : {Method::Srk3, Method::Ssa}) {
    SimConfig cfg;
    cfg.method = method;
    cfg.t_end = 2;
    cfg.h = 1e-2;
    cfg.seed = 11;
    std::vector<double> ints{10, 7};
    auto start = method == Method::Ssa ? ints : x0;
    auto one = ensemble(m, b, start, cfg, 150, 1);
    auto many = ensemble(m, b, start, cfg, 150, 3);
    auto again = ensemble(m, b, start, cfg, 150, 2);
    CHECK(one.active == many.active);
    CHECK(one.absorbed_fraction == many.absorbed_fraction);
    for (std::size_t k = 0; k < one.times.size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        if (one.active[k] == 0) continue;
        CHECK(one.mean[k][i] == many.mean[k][i]);
        CHECK(one.variance[k][i] == again.variance[k][i]);
      }
    }
    for (std::size_t k = 1; k < one.times.size(); ++k)
      CHECK(one.absorbed_fraction[k] >= one.absorbed_fraction[k - 1]);
  }
}

TEST_CASE("errors propagate") {
  auto m = make_sde_model({"x"}, {}, {P("0")}, {{P("x-2")}});
  SimConfig cfg;
  cfg.absorb = false;
  std::vector<double> x0{1.0};
  CHECK_THROWS_AS(ensemble(m, {}, x0, cfg, 10, 2), NotPsdError);
  CHECK_THROWS_AS(ensemble(m, {}, x0, cfg, 0), ConfigError);
}

TEST_CASE("Ornstein-Uhlenbeck moments") {
  // dx = -x dt + 0.5 dW: mean e^{-t}, variance 0.125 (1 - e^{-2t}).
  auto m = make_sde_model({"x"}, {}, {P("-x")}, {{P("1/4")}});
  std::vector<double> x0{1.0};
  const double mean = std::exp(-1.0), var = 0.125 * (1 - std::exp(-2.0));
  for (Method method : {Method::Em, Method::Srk3}) {
    SimConfig cfg;
    cfg.method = method;
    cfg.t_end = 1;
    cfg.h = 0.01;
    cfg.seed = 314;
    cfg.absorb = false;
    auto s = ensemble(m, {}, x0, cfg, 4000);
    CHECK(std::abs(s.mean.back()[0] - mean) < 3 * std::sqrt(var / 4000));
    CHECK(s.variance.back()[0] == doctest::Approx(var).epsilon(0.08));
  }
}

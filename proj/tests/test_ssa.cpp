#include <doctest.h>

#include <cmath>

#include "onestep/errors.hpp"
#include "onestep/model.hpp"
#include "onestep/ssa.hpp"
#include "onestep/stochastizer.hpp"

using namespace onestep;

namespace {

SdeModel compile(const char* text) { return stochastize(parse_model(text)); }

const char* kPredatorPrey =
    "species x y\n"
    "reaction x -> 2 x @ k1\n"
    "reaction x + y -> 2 y @ k2\n"
    "reaction y -> 0 @ k3\n";

struct Moments {
  double mean = 0, var = 0;
};

Moments final_moments(const SdeModel& m, const Binding& b, const CountState& x0, double t,
                      int runs, std::uint64_t seed) {
  double sum = 0, sum2 = 0;
  for (int i = 0; i < runs; ++i) {
    SsaOptions opt;
    opt.stream = static_cast<std::uint64_t>(i);
    opt.absorb = false;
    auto path = gillespie_run(m, b, x0, t, seed, opt);
    double v = static_cast<double>(path.final_state()[0]);
    sum += v;
    sum2 += v * v;
  }
  Moments out;
  out.mean = sum / runs;
  out.var = (sum2 - runs * out.mean * out.mean) / (runs - 1);
  return out;
}

}  // namespace

TEST_CASE("propensities") {
  auto m = compile(kPredatorPrey);
  Binding b{{"k1", 1}, {"k2", 1}, {"k3", 1}};
  auto a = propensities_at(m, b, std::vector<std::int64_t>{2, 3});
  REQUIRE(a.size() == 6);
  CHECK(a[0] == 2);
  CHECK(a[1] == 6);
  CHECK(a[2] == 3);
  CHECK(a[3] == 0);
  CHECK(a[4] == 0);
  CHECK(a[5] == 0);
  CHECK(propensities_at(m, b, std::vector<std::int64_t>{0, 5})[0] == 0.0);

  auto pair = compile("species x\nreaction 2 x -> 0 @ k\n");
  CHECK(propensities_at(pair, {{"k", 1}}, std::vector<std::int64_t>{1})[0] == 0.0);
  CHECK(propensities_at(pair, {{"k", 0.5}}, std::vector<std::int64_t>{4})[0] == 6.0);

  auto rev = compile("species x\nreaction x <-> 0 @ kp, km\n");
  auto r = propensities_at(rev, {{"kp", 2}, {"km", 3}}, std::vector<std::int64_t>{5});
  CHECK(r == std::vector<double>{10, 3});

  CHECK_THROWS_AS(propensities_at(m, {{"k1", 1}}, std::vector<std::int64_t>{1, 1}),
                  UnboundSymbolError);
}

TEST_CASE("property: numeric propensities equal the symbolic rates at lattice points") {
  auto m = compile("species a b c\n"
                   "reaction 2 a + b -> c @ k1\n"
                   "reaction c <-> a + 2 b @ k2, k3\n"
                   "reaction 0 -> a @ k4\n");
  Binding b{{"k1", 0.7}, {"k2", 1.3}, {"k3", 0.2}, {"k4", 5}};
  const std::size_t s = m.network.reactions.size();
  for (std::int64_t x = 0; x < 5; ++x)
    for (std::int64_t y = 0; y < 5; ++y)
      for (std::int64_t z = 0; z < 4; ++z) {
        auto a = propensities_at(m, b, std::vector<std::int64_t>{x, y, z});
        Binding at = b;
        at["a"] = double(x);
        at["b"] = double(y);
        at["c"] = double(z);
        for (std::size_t r = 0; r < s; ++r) {
          CHECK(a[r] == doctest::Approx(eval_poly(m.rates.s_plus[r], at)));
          CHECK(a[s + r] == doctest::Approx(eval_poly(m.rates.s_minus[r], at)));
        }
      }
}

TEST_CASE("silent and single-jump runs") {
  auto m = compile("species x\nreaction x -> 0 @ k\n");
  auto silent = gillespie_run(m, {{"k", 1}}, {0}, 10, 1);
  CHECK(silent.status == JumpStatus::Silent);
  CHECK(silent.stop_time == 0.0);
  CHECK(silent.jump_times.empty());
  CHECK(silent.final_state() == CountState{0});

  auto zero_rate = gillespie_run(m, {{"k", 0}}, {5}, 10, 1);
  CHECK(zero_rate.status == JumpStatus::Silent);
  CHECK(zero_rate.final_state() == CountState{5});

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto one = gillespie_run(m, {{"k", 1}}, {1}, 1e9, seed);
    REQUIRE(one.jump_times.size() == 1);
    CHECK(one.final_state() == CountState{0});
    CHECK(one.status == JumpStatus::Silent);
    CHECK(one.stop_time == one.jump_times[0]);
  }
}

TEST_CASE("extinction of one species with other channels live") {
  auto m = compile(kPredatorPrey);
  Binding b{{"k1", 1}, {"k2", 0.1}, {"k3", 5}};
  auto path = gillespie_run(m, b, {10, 1}, 1e6, 9);
  CHECK(path.status == JumpStatus::Extinct);
  CHECK(path.extinct_species == 1);
  CHECK(path.final_state()[1] == 0);

  SsaOptions keep;
  keep.absorb = false;
  auto on = gillespie_run(m, b, {10, 1}, 1.0, 9, keep);
  CHECK(on.status == JumpStatus::ReachedTMax);
  CHECK(on.stop_time == 1.0);
}

TEST_CASE("property: nonnegative one-step paths") {
  auto m = compile(kPredatorPrey);
  Binding b{{"k1", 10}, {"k2", 1.5}, {"k3", 8.5}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SsaOptions opt;
    opt.t0 = 2.0;
    auto path = gillespie_run(m, b, {10, 7}, 12.0, seed, opt);
    CountState prev = path.initial_state;
    double t = opt.t0;
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      const auto& x = path.states[k];
      CHECK(path.jump_times[k] > t);
      CHECK(path.jump_times[k] <= 12.0);
      t = path.jump_times[k];
      std::size_t c = path.channels[k];
      const std::size_t s = m.network.reactions.size();
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i] >= 0);
        int delta = c < s ? m.step_ops.r[c][i] : -m.step_ops.r[c - s][i];
        CHECK(x[i] - prev[i] == delta);
      }
      prev = x;
    }
  }
}

TEST_CASE("determinism") {
  auto m = compile(kPredatorPrey);
  Binding b{{"k1", 10}, {"k2", 1.5}, {"k3", 8.5}};
  auto a = gillespie_run(m, b, {10, 7}, 5.0, 123);
  auto a2 = gillespie_run(m, b, {10, 7}, 5.0, 123);
  CHECK(a.jump_times == a2.jump_times);
  CHECK(a.states == a2.states);
  auto c = gillespie_run(m, b, {10, 7}, 5.0, 124);
  CHECK(c.jump_times != a.jump_times);
}

TEST_CASE("sampling onto a grid") {
  auto m = compile("species x\nreaction x -> 0 @ k\n");
  JumpTrajectory path;
  path.t0 = 0;
  path.initial_state = {3};
  path.jump_times = {0.15, 0.25, 0.42};
  path.states = {{2}, {1}, {0}};
  path.channels = {0, 0, 0};
  path.status = JumpStatus::Silent;
  path.stop_time = 0.42;
  SimConfig cfg;
  cfg.t_end = 0.5;
  cfg.h = 0.1;
  cfg.method = Method::Ssa;
  auto traj = sample_on_grid(path, cfg);
  REQUIRE(traj.times.size() == 6);
  std::vector<double> xs;
  for (const auto& s : traj.states) xs.push_back(s[0]);
  CHECK(xs == std::vector<double>{3, 3, 2, 1, 1, 0});
  CHECK_FALSE(traj.absorbed);
  CHECK(traj.method == Method::Ssa);

  path.status = JumpStatus::Extinct;
  traj = sample_on_grid(path, cfg);
  REQUIRE(traj.absorbed);
  CHECK(traj.absorbed->time == 0.42);
  CHECK(traj.times == std::vector<double>{0, 0.1, 0.2, 0.30000000000000004, 0.4, 0.42});
}

TEST_CASE("to_counts") {
  CHECK(to_counts(std::vector<double>{3, 0}) == CountState{3, 0});
  CHECK_THROWS_AS(to_counts(std::vector<double>{2.5}), ConfigError);
  CHECK_THROWS_AS(to_counts(std::vector<double>{-1}), ConfigError);
}

TEST_CASE("linear oracles: pure birth and birth-death means") {
  // Yule process: E X(t) = x0 e^{kt}, Var = x0 e^{kt} (e^{kt} - 1).
  auto birth = compile("species x\nreaction x -> 2 x @ k\n");
  auto mb = final_moments(birth, {{"k", 1}}, {100}, 1.0, 10000, 2718);
  const double e = std::exp(1.0);
  CHECK(std::abs(mb.mean - 100 * e) < 3 * std::sqrt(100 * e * (e - 1) / 10000));
  CHECK(mb.var == doctest::Approx(100 * e * (e - 1)).epsilon(0.05));

  // Linear birth-death: E X(t) = x0 e^{(l-m)t}.
  auto bd = compile("species x\nreaction x -> 2 x @ l\nreaction x -> 0 @ m\n");
  const double l = 1.0, mu = 0.6, t = 1.0, x0 = 50;
  const double g = std::exp((l - mu) * t);
  const double var = x0 * (l + mu) / (l - mu) * g * (g - 1);
  auto md = final_moments(bd, {{"l", l}, {"m", mu}}, {50}, t, 10000, 99);
  CHECK(std::abs(md.mean - x0 * g) < 3 * std::sqrt(var / 10000));
  CHECK(md.var == doctest::Approx(var).epsilon(0.06));
}

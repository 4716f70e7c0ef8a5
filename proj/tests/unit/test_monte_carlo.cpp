#include <doctest.h>

#include <cmath>

#include "full_chain.hpp"
#include "telodl/errors.hpp"
#include "telodl/monte_carlo.hpp"

using namespace telodl;

namespace {

MonteCarloConfig small(Algorithm algo, int K, int N, double eps) {
  MonteCarloConfig c;
  c.algo = algo;
  c.players = K;
  c.resources = N;
  c.params = ControllerParams::defaults(K, eps);
  c.efht_trials = 400;
  c.alpha_iterations = 20000;
  c.burn_in = 100;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("collision start state") {
  const auto s = initial_collision_state(3, 5);
  CHECK(s.resources == 5);
  REQUIRE(s.size() == 3);
  for (const auto& p : s.players) {
    CHECK(p.mood == Mood::Content);
    CHECK(p.action == 0);
    CHECK(p.utility == 0);
    CHECK(p.aligned());
  }
  CHECK(s.is_rc());
  CHECK(initial_collision_state(1, 1).players[0].utility == 1);
  CHECK_THROWS_AS(initial_collision_state(3, 2), ValidationError);
}

TEST_CASE("a single player is already orthogonal") {
  for (auto algo : {Algorithm::Tel, Algorithm::Odl}) {
    const auto c = small(algo, 1, 2, 0.1);
    const auto e = estimate_efht(c);
    CHECK(e.mean == 0.0);
    CHECK(e.censored == 0);
    CHECK(e.trials_used == c.efht_trials);
    // Experiments only ever reach a free resource, where a lone player
    // always keeps the best utility.
    CHECK(estimate_alpha(c).alpha > 0.5);
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  for (auto algo : {Algorithm::Tel, Algorithm::Odl}) {
    auto c = small(algo, 3, 3, 0.1);
    c.params.c = 1.0;
    c.workers = 1;
    const auto a = estimate_efht(c);
    const auto al = estimate_alpha(c);
    c.workers = 4;
    const auto b = estimate_efht(c);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(estimate_alpha(c).alpha == al.alpha);
    c.seed = 2;
    CHECK(estimate_efht(c).mean != a.mean);
  }
}

TEST_CASE("censoring is reported") {
  auto c = small(Algorithm::Tel, 3, 3, 0.01);
  c.max_steps = 1;
  CHECK_THROWS_AS(estimate_efht(c), NumericalError);
  c.max_steps = 100;
  const auto e = estimate_efht(c);
  CHECK(e.censored > 0);
  CHECK(e.censored + e.trials_used == c.efht_trials);
}

TEST_CASE("config validation") {
  auto c = small(Algorithm::Tel, 3, 3, 0.1);
  c.resources = 2;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small(Algorithm::Tel, 3, 3, 0.1);
  c.efht_trials = 0;
  CHECK_THROWS_AS(estimate_efht(c), ValidationError);
}

TEST_CASE("matched exploration rate") {
  auto p = ControllerParams::defaults(4, 0.2);
  p.c = 4;
  const auto m = match_odl_epsilon(p, 1e-3);
  CHECK(m.odl_explore_probability() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(m.c == 4);
}

TEST_CASE("trajectories agree with the exact unreduced chain at K=N=2") {
  for (auto algo : {Algorithm::Tel, Algorithm::Odl}) {
    auto c = small(algo, 2, 2, 0.2);
    c.params.c = 1.0;
    c.efht_trials = 4000;
    c.alpha_iterations = 400000;
    c.burn_in = 1000;
    const auto exact = oracle::enumerate(algo, 2, 2, c.params);
    const double t = oracle::hitting_time_to_orthogonal(exact);
    const double a = oracle::stability(exact);
    const auto e = estimate_efht(c);
    const auto al = estimate_alpha(c);
    CAPTURE(to_string(algo));
    CHECK(std::abs(e.mean - t) <= 4.0 * e.std_error);
    CHECK(std::abs(al.alpha - a) <= 4.0 * al.std_error + 1e-3);
  }
}

#pragma once

// Trajectory estimates of the first hitting time of the orthogonal class and
// of the long-run fraction of time spent there.

#include <cstdint>

#include "telodl/game.hpp"

namespace telodl {

struct MonteCarloConfig {
  Algorithm algo = Algorithm::Tel;
  int players = 3;
  int resources = 3;
  ControllerParams params;
  std::uint64_t seed = 1;
  int efht_trials = 5000;
  std::int64_t alpha_iterations = 1'000'000;
  std::int64_t burn_in = 1000;
  std::int64_t max_steps = 100'000'000;  // per trial
  int workers = 0;                       // 0: hardware concurrency

  void validate() const;
};

/// Every player content and aligned on resource 0.
NetworkState initial_collision_state(int players, int resources);

struct EfhtEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials_used = 0;  // trials that reached the target
  int censored = 0;     // trials stopped by max_steps
};

/// Mean number of iterations until every player is on a distinct resource.
/// Trial k draws from stream k of the seed and results are merged in trial
/// order, so the estimate does not depend on the number of workers.  Throws
/// NumericalError if every trial is censored.
EfhtEstimate estimate_efht(const MonteCarloConfig& config);

struct AlphaEstimate {
  double alpha = 0.0;
  double std_error = 0.0;  // batch means
  std::int64_t iterations = 0;
};

/// Fraction of iterations, after burn-in, spent in an all-content aligned
/// state with every player on a distinct resource.
AlphaEstimate estimate_alpha(const MonteCarloConfig& config);

/// Returns ODL constants whose experiment probability epsilon^c equals
/// `tel_epsilon`.
ControllerParams match_odl_epsilon(const ControllerParams& odl, double tel_epsilon);

}  // namespace telodl

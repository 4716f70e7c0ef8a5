#include "telodl/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "telodl/errors.hpp"
#include "telodl/partitions.hpp"

namespace telodl {

namespace {

constexpr std::uint64_t kAlphaStream = 0xa1fa'0000'0000'0000ull;
constexpr int kAlphaBatches = 100;

bool orthogonal(const NetworkState& s) {
  std::vector<char> used(static_cast<std::size_t>(s.resources), 0);
  for (const auto& p : s.players) {
    if (used[static_cast<std::size_t>(p.action)]) return false;
    used[static_cast<std::size_t>(p.action)] = 1;
  }
  return true;
}

int worker_count(int requested, int jobs) {
  int w = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(w, 1, std::max(1, jobs));
}

}  // namespace

void MonteCarloConfig::validate() const {
  if (players < 1) throw ValidationError("players must be >= 1");
  if (resources < players) throw ValidationError("resources must be ≥ players");
  if (efht_trials < 1) throw ValidationError("trials must be >= 1");
  if (alpha_iterations < 1) throw ValidationError("alpha iterations must be >= 1");
  if (burn_in < 0) throw ValidationError("burn-in must be >= 0");
  if (max_steps < 1) throw ValidationError("max steps must be >= 1");
  params.validate(players);
}

NetworkState initial_collision_state(int players, int resources) {
  if (players < 1) throw ValidationError("players must be >= 1");
  if (resources < players) throw ValidationError("resources must be ≥ players");
  const int u = players == 1 ? 1 : 0;
  NetworkState s;
  s.resources = resources;
  s.players.assign(static_cast<std::size_t>(players), PlayerState{Mood::Content, 0, 0, u, u});
  return s;
}

EfhtEstimate estimate_efht(const MonteCarloConfig& config) {
  config.validate();
  const int trials = config.efht_trials;
  // -1 marks a censored trial.
  std::vector<std::int64_t> hits(static_cast<std::size_t>(trials), -1);
  std::atomic<int> next{0};

  auto run = [&] {
    for (int k = next++; k < trials; k = next++) {
      auto rng = SeededSource::for_stream(config.seed, static_cast<std::uint64_t>(k));
      NetworkState s = initial_collision_state(config.players, config.resources);
      std::int64_t t = 0;
      while (!orthogonal(s) && t < config.max_steps) {
        s = step(config.algo, s, config.params, rng);
        ++t;
      }
      hits[static_cast<std::size_t>(k)] = orthogonal(s) ? t : -1;
    }
  };
  const int workers = worker_count(config.workers, trials);
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();

  EfhtEstimate out;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t h : hits) {
    if (h < 0) {
      ++out.censored;
      continue;
    }
    ++out.trials_used;
    sum += static_cast<double>(h);
    sum_sq += static_cast<double>(h) * static_cast<double>(h);
  }
  if (out.trials_used == 0) throw NumericalError("every trial hit the step cap");
  const double n = out.trials_used;
  out.mean = sum / n;
  if (out.trials_used > 1) {
    const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

AlphaEstimate estimate_alpha(const MonteCarloConfig& config) {
  config.validate();
  auto rng = SeededSource::for_stream(config.seed, kAlphaStream);
  NetworkState s = initial_collision_state(config.players, config.resources);
  for (std::int64_t t = 0; t < config.burn_in; ++t) s = step(config.algo, s, config.params, rng);

  const std::int64_t total = config.alpha_iterations;
  const int batches = static_cast<int>(std::min<std::int64_t>(kAlphaBatches, total));
  std::vector<double> batch_hits(static_cast<std::size_t>(batches), 0.0);
  std::vector<double> batch_len(static_cast<std::size_t>(batches), 0.0);
  std::int64_t in_target = 0;
  for (std::int64_t t = 0; t < total; ++t) {
    s = step(config.algo, s, config.params, rng);
    const auto b = static_cast<std::size_t>(t * batches / total);
    batch_len[b] += 1.0;
    if (s.is_rc() && orthogonal(s)) {
      ++in_target;
      batch_hits[b] += 1.0;
    }
  }

  AlphaEstimate out;
  out.iterations = total;
  out.alpha = static_cast<double>(in_target) / static_cast<double>(total);
  if (batches > 1) {
    double ss = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double d = batch_hits[static_cast<std::size_t>(b)] / batch_len[static_cast<std::size_t>(b)] - out.alpha;
      ss += d * d;
    }
    out.std_error = std::sqrt(ss / (batches - 1.0) / batches);
  }
  return out;
}

ControllerParams match_odl_epsilon(const ControllerParams& odl, double tel_epsilon) {
  if (!(tel_epsilon > 0.0 && tel_epsilon < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
  if (!(odl.c > 0.0)) throw ValidationError("c must be > 0");
  ControllerParams out = odl;
  out.epsilon = std::pow(tel_epsilon, 1.0 / odl.c);
  return out;
}

}  // namespace telodl

#include "telodl/game.hpp"

#include <cmath>
#include <sstream>

#include "telodl/errors.hpp"

namespace telodl {

std::string_view to_string(Algorithm algo) { return algo == Algorithm::Tel ? "tel" : "odl"; }

Algorithm parse_algorithm(std::string_view name) {
  if (name == "tel" || name == "TEL") return Algorithm::Tel;
  if (name == "odl" || name == "ODL") return Algorithm::Odl;
  throw ValidationError("unknown algorithm '" + std::string(name) + "' (expected tel or odl)");
}

char mood_letter(Mood m) {
  switch (m) {
    case Mood::Content: return 'C';
    case Mood::Hopeful: return 'H';
    case Mood::Watchful: return 'W';
    case Mood::Discontent: return 'D';
  }
  return '?';
}

bool NetworkState::is_aligned() const {
  for (const auto& p : players)
    if (!p.aligned()) return false;
  return true;
}

bool NetworkState::is_rc() const {
  for (const auto& p : players)
    if (p.mood != Mood::Content || !p.aligned()) return false;
  return true;
}

std::vector<int> NetworkState::actions() const {
  std::vector<int> out;
  out.reserve(players.size());
  for (const auto& p : players) out.push_back(p.action);
  return out;
}

std::string NetworkState::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < players.size(); ++k) {
    const auto& p = players[k];
    if (k) os << ' ';
    os << mood_letter(p.mood) << '(' << p.action << '/' << p.benchmark_action << ','
       << p.utility << '/' << p.benchmark_utility << ')';
  }
  return os.str();
}

ControllerParams ControllerParams::defaults(int players, double epsilon) {
  ControllerParams p;
  p.epsilon = epsilon;
  p.nu1 = 0.48;
  p.nu2 = 0.49;
  p.phi1 = 1.0 / (2.0 * players);
  p.phi2 = 1.0 / (2.0 * players);
  p.c = static_cast<double>(players);
  return p;
}

void ControllerParams::validate(int players) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("epsilon must lie in (0,1)");
  if (!(nu1 > 0.0)) throw ValidationError("nu1 must be positive");
  const double g1 = eval_g(1.0);
  if (!(g1 > 0.0 && g1 < 0.5)) throw ValidationError("G(1) must lie in (0, 1/2)");
  if (!(phi1 > 0.0)) throw ValidationError("phi1 must be positive");
  // F may sit on the boundary [0, 1/(2K)].
  const double cap = 1.0 / (2.0 * players) + 1e-12;
  for (double u : {0.0, 1.0}) {
    const double f = eval_f(u);
    if (f < -1e-12 || f > cap) throw ValidationError("F(u) must lie in [0, 1/(2K)]");
  }
  if (!(c > 0.0)) throw ValidationError("c must be positive");
}

double ControllerParams::tel_adopt_probability() const { return std::pow(epsilon, eval_g(1.0)); }

double ControllerParams::tel_settle_probability(int u) const {
  return std::pow(epsilon, eval_f(static_cast<double>(u)));
}

double ControllerParams::odl_explore_probability() const { return std::pow(epsilon, c); }

double ControllerParams::odl_accept_probability(int u) const {
  return std::pow(epsilon, 1.0 - static_cast<double>(u));
}

std::vector<int> compute_utilities(std::span<const int> actions, int resources) {
  std::vector<int> load(static_cast<std::size_t>(resources), 0);
  for (int a : actions) {
    if (a < 0 || a >= resources)
      throw ValidationError("action " + std::to_string(a) + " outside [0," +
                            std::to_string(resources) + ")");
    ++load[static_cast<std::size_t>(a)];
  }
  std::vector<int> u;
  u.reserve(actions.size());
  for (int a : actions) u.push_back(load[static_cast<std::size_t>(a)] == 1 ? 1 : 0);
  return u;
}

void validate_state(const NetworkState& state, Algorithm algo) {
  if (state.resources < 1) throw ValidationError("state needs at least one resource");
  for (const auto& p : state.players) {
    if (p.action < 0 || p.action >= state.resources || p.benchmark_action < 0 ||
        p.benchmark_action >= state.resources)
      throw ValidationError("action index out of range in state " + state.describe());
    if ((p.utility != 0 && p.utility != 1) || (p.benchmark_utility != 0 && p.benchmark_utility != 1))
      throw ValidationError("utilities must be binary");
    if (algo == Algorithm::Odl && (p.mood == Mood::Hopeful || p.mood == Mood::Watchful))
      throw ValidationError("ODL states use only content and discontent moods");
  }
}

namespace {

// Uniform over the N-1 resources other than `benchmark`.
int pick_other(RandomSource& rng, int resources, int benchmark) {
  int r = rng.pick(resources - 1);
  return r >= benchmark ? r + 1 : r;
}

void refresh_utilities(NetworkState& s) {
  const auto acts = s.actions();
  const auto u = compute_utilities(acts, s.resources);
  for (std::size_t k = 0; k < u.size(); ++k) s.players[k].utility = u[k];
}

}  // namespace

NetworkState tel_step(const NetworkState& state, const ControllerParams& params, RandomSource& rng) {
  NetworkState next = state;
  const int n_res = state.resources;
  std::vector<bool> experimented(state.players.size(), false);

  for (std::size_t k = 0; k < next.players.size(); ++k) {
    auto& p = next.players[k];
    switch (p.mood) {
      case Mood::Content:
        if (n_res > 1 && rng.uniform() < params.epsilon) {
          experimented[k] = true;
          p.action = pick_other(rng, n_res, p.benchmark_action);
        } else {
          p.action = p.benchmark_action;
        }
        break;
      case Mood::Hopeful:
      case Mood::Watchful:
        p.action = p.benchmark_action;
        break;
      case Mood::Discontent:
        p.action = rng.pick(n_res);
        break;
    }
  }

  refresh_utilities(next);

  for (std::size_t k = 0; k < next.players.size(); ++k) {
    auto& p = next.players[k];
    const int u = p.utility;
    const int ub = p.benchmark_utility;
    switch (p.mood) {
      case Mood::Content:
        if (experimented[k]) {
          // Only a gain can be adopted; otherwise the trial is dropped.
          if (u > ub && rng.uniform() < params.tel_adopt_probability()) {
            p.benchmark_action = p.action;
            p.benchmark_utility = u;
          }
        } else if (u > ub) {
          p.mood = Mood::Hopeful;
        } else if (u < ub) {
          p.mood = Mood::Watchful;
        }
        break;
      case Mood::Hopeful:
        if (u > ub) {
          p.mood = Mood::Content;
          p.benchmark_utility = u;
        } else if (u < ub) {
          p.mood = Mood::Watchful;
        } else {
          p.mood = Mood::Content;
        }
        break;
      case Mood::Watchful:
        if (u > ub)
          p.mood = Mood::Hopeful;
        else if (u < ub)
          p.mood = Mood::Discontent;
        else
          p.mood = Mood::Content;
        break;
      case Mood::Discontent:
        if (rng.uniform() < params.tel_settle_probability(u)) {
          p.mood = Mood::Content;
          p.benchmark_action = p.action;
          p.benchmark_utility = u;
        }
        break;
    }
  }
  return next;
}

NetworkState odl_step(const NetworkState& state, const ControllerParams& params, RandomSource& rng) {
  validate_state(state, Algorithm::Odl);
  NetworkState next = state;
  const int n_res = state.resources;
  const double explore = params.odl_explore_probability();
  std::vector<bool> experimented(state.players.size(), false);

  for (std::size_t k = 0; k < next.players.size(); ++k) {
    auto& p = next.players[k];
    if (p.mood == Mood::Content) {
      if (n_res > 1 && rng.uniform() < explore) {
        experimented[k] = true;
        p.action = pick_other(rng, n_res, p.benchmark_action);
      } else {
        p.action = p.benchmark_action;
      }
    } else {
      p.action = rng.pick(n_res);
    }
  }

  refresh_utilities(next);

  for (std::size_t k = 0; k < next.players.size(); ++k) {
    auto& p = next.players[k];
    const int u = p.utility;
    if (p.mood == Mood::Content) {
      if (u == p.benchmark_utility) continue;
      if (rng.uniform() < params.odl_accept_probability(u)) {
        p.benchmark_utility = u;
        if (experimented[k]) p.benchmark_action = p.action;
      } else {
        p.mood = Mood::Discontent;
      }
    } else if (rng.uniform() < params.odl_accept_probability(u)) {
      p.mood = Mood::Content;
      p.benchmark_action = p.action;
      p.benchmark_utility = u;
    }
  }
  return next;
}

NetworkState step(Algorithm algo, const NetworkState& state, const ControllerParams& params,
                  RandomSource& rng) {
  return algo == Algorithm::Tel ? tel_step(state, params, rng) : odl_step(state, params, rng);
}

}  // namespace telodl

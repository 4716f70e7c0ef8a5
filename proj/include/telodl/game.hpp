#pragma once

// Binary-interference resource sharing game and the two per-player learning
// controllers (trial-and-error learning and optimal dynamical learning).
//
// Resources are numbered 0..N-1.  A player's utility is 1 when it is alone on
// its resource and 0 otherwise.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telodl/random.hpp"

namespace telodl {

enum class Algorithm { Tel, Odl };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

enum class Mood : std::uint8_t { Content, Hopeful, Watchful, Discontent };

char mood_letter(Mood m);

struct PlayerState {
  Mood mood = Mood::Content;
  int action = 0;
  int benchmark_action = 0;
  int utility = 0;
  int benchmark_utility = 0;

  bool aligned() const { return action == benchmark_action && utility == benchmark_utility; }
  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct NetworkState {
  int resources = 0;
  std::vector<PlayerState> players;

  int size() const { return static_cast<int>(players.size()); }
  bool is_aligned() const;
  /// All players content and aligned: a recurrence class of the unperturbed
  /// process.
  bool is_rc() const;
  std::vector<int> actions() const;
  std::string describe() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

/// Constants of both controllers.
///
/// TEL: experiment probability `epsilon`; a content experimenter that gains
/// utility adopts the trial w.p. epsilon^G(du), G(x) = -nu1*x + nu2; a
/// discontent player settles w.p. epsilon^F(u), F(u) = -phi1*u + phi2.
/// ODL: a content player experiments w.p. epsilon^c; acceptance of a change
/// is epsilon^(1-u).
struct ControllerParams {
  double epsilon = 0.01;
  double nu1 = 0.48;
  double nu2 = 0.49;
  double phi1 = 0.1;
  double phi2 = 0.1;
  double c = 5.0;

  /// nu = (0.48, 0.49); phi1 = phi2 = 1/(2K), which puts F on the boundary
  /// F(0) = 1/(2K), F(1) = 0; c = K.
  static ControllerParams defaults(int players, double epsilon);

  /// Throws ValidationError when a constraint fails for `players` players.
  void validate(int players) const;

  double eval_g(double delta_u) const { return -nu1 * delta_u + nu2; }
  double eval_f(double u) const { return -phi1 * u + phi2; }

  double tel_adopt_probability() const;          // epsilon^G(1)
  double tel_settle_probability(int u) const;    // epsilon^F(u)
  double odl_explore_probability() const;        // epsilon^c
  double odl_accept_probability(int u) const;    // epsilon^(1-u)
};

/// u_k = 1 iff no other player picked actions[k].
std::vector<int> compute_utilities(std::span<const int> actions, int resources);

/// One synchronous TEL iteration: every player acts, utilities are computed
/// once, then every mood and benchmark is updated.
NetworkState tel_step(const NetworkState& state, const ControllerParams& params,
                      RandomSource& rng);

/// One synchronous ODL iteration.  Throws ValidationError if a player is
/// hopeful or watchful.
NetworkState odl_step(const NetworkState& state, const ControllerParams& params,
                      RandomSource& rng);

NetworkState step(Algorithm algo, const NetworkState& state, const ControllerParams& params,
                  RandomSource& rng);

/// Throws ValidationError unless the state is well formed for `algo`.
void validate_state(const NetworkState& state, Algorithm algo);

}  // namespace telodl

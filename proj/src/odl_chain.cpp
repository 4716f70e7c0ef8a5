#include "telodl/odl_chain.hpp"

#include <algorithm>
#include <cmath>

#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"

namespace telodl {

namespace {

Transition edge(const OrderedRepartition& from_set, StateKind from, const OrderedRepartition& to_set,
                StateKind to, double p) {
  return {{from_set, from}, {to_set, to}, p};
}

bool has(const std::vector<StateKind>& kinds, StateKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

// Occupancy terms of one class, as doubles.
struct Terms {
  double K, N, M0, M1, M2, m1, m2;
  Terms(const OrderedRepartition& s, int players, int resources) {
    const OccupancyStats st(s);
    K = players;
    N = resources;
    M0 = st.resources_with(0);
    M1 = st.resources_with(1);
    M2 = st.resources_with(2);
    m1 = st.players_sharing(1);
    m2 = st.players_sharing(2);
  }
  // Resources holding two or more players.
  double crowded() const { return N - M1 - M0; }
};

}  // namespace

OdlRates OdlRates::from_params(const ControllerParams& params) {
  return {params.epsilon, params.odl_explore_probability()};
}

std::vector<StateKind> odl_state_set(const OrderedRepartition& s) {
  const OccupancyStats st(s);
  std::vector<StateKind> kinds{StateKind::Rrc};
  if (st.resources_with(1) >= 1) kinds.push_back(StateKind::Xi1);
  if (st.resources_with(1) >= 2) kinds.push_back(StateKind::Xi2);
  if (st.resources_with(2) >= 1) kinds.push_back(StateKind::Xi3);
  return kinds;
}

OdlCrossTotals odl_cross_totals(const OrderedRepartition& s, const OdlRates& rates, int players,
                                int resources) {
  const Terms t(s, players, resources);
  const double e = rates.epsilon;
  const double q = 1.0 - e;
  const double P = at_least_one(rates.explore, players);
  const double N = t.N;
  OdlCrossTotals c;
  c.z_up = P * (t.K - t.m1) / t.K * t.M0 / (N - 1.0);
  c.z_down = P * t.m1 / t.K * (t.crowded() / (N - 1.0) * e + (t.M1 - 1.0) / (N - 1.0) * e * e);
  c.z_up_xi1 = P * (t.K - t.m1) / t.K * (t.crowded() - 1.0) / (N - 1.0) * q;
  c.z_up_xi2 = P * (t.K - t.m1) / t.K * t.M1 / (N - 1.0) * q * q;
  c.z_down_xi3 = P * t.m1 / t.K * (t.M1 - 1.0) / (N - 1.0) * 2.0 * e * q;

  c.xi1_down = t.crowded() / N * e + (t.M1 - 1.0) / N * e * e;
  c.xi1_down_xi3 = (t.M1 - 1.0) / N * 2.0 * e * q;

  const double first_free = (t.M0 + 2.0) / N;
  c.xi2_down = first_free * (t.M1 - 1.0) / N * e * e + 2.0 * first_free * t.crowded() / N * e;
  c.xi2_down_xi1 = 2.0 * t.crowded() / N * e * t.crowded() / N * q +
                   2.0 * (t.M1 - 2.0) / N * e * e * (t.crowded() + 1.0) / N * q;
  c.xi2_down_xi2 = 2.0 * t.crowded() / N * e * (t.M1 - 2.0) / N * q * q +
                   (t.M1 - 2.0) / N * e * e * (t.M1 - 3.0) / N * q * q;
  c.xi2_down_xi3 = first_free * (t.M1 - 1.0) / N * 2.0 * e * q;

  c.xi3_up = t.M0 / N;
  c.xi3_up_xi1 = (t.crowded() - 1.0) / N * q;
  c.xi3_up_xi2 = t.M1 / N * q * q;
  return c;
}

std::vector<Transition> odl_intra_row(const OrderedRepartition& s, const OdlRates& rates,
                                      int players, int resources) {
  const Terms t(s, players, resources);
  const double e = rates.epsilon;
  const double q = 1.0 - e;
  const double P = at_least_one(rates.explore, players);
  const double N = t.N;
  const auto kinds = odl_state_set(s);
  const auto c = odl_cross_totals(s, rates, players, resources);
  const auto Z = StateKind::Rrc;

  std::vector<Transition> out;

  // From Z: an interfered player (not from a pair) lands on a lone player who
  // then rejects the drop; two lone players collide and both reject; a pair
  // member lands on a lone player and one of the two rejects.
  const double z_xi1 = P * (t.K - t.m1 - t.m2) / t.K * t.M1 / (N - 1.0) * q;
  const double z_xi2 = P * t.m1 / t.K * (t.M1 - 1.0) / (N - 1.0) * q * q;
  const double z_xi3 = P * t.m2 / t.K * t.M1 / (N - 1.0) * 2.0 * e * q;
  out.push_back(edge(s, Z, s, StateKind::Xi1, z_xi1));
  out.push_back(edge(s, Z, s, StateKind::Xi2, z_xi2));
  out.push_back(edge(s, Z, s, StateKind::Xi3, z_xi3));
  out.push_back(edge(s, Z, s, Z,
                     conservation_residue(z_xi1 + z_xi2 + z_xi3 + c.z_up + c.z_down + c.z_up_xi1 +
                                              c.z_up_xi2 + c.z_down_xi3,
                                          "odl Z")));

  if (has(kinds, StateKind::Xi1)) {
    const double to_z = (t.M0 + 1.0) / N;
    const double to_xi2 = (t.M1 - 1.0) / N * q * q;
    out.push_back(edge(s, StateKind::Xi1, s, Z, to_z));
    out.push_back(edge(s, StateKind::Xi1, s, StateKind::Xi2, to_xi2));
    out.push_back(edge(s, StateKind::Xi1, s, StateKind::Xi1,
                       conservation_residue(to_z + to_xi2 + c.xi1_down + c.xi1_down_xi3, "odl xi1")));
  }

  if (has(kinds, StateKind::Xi2)) {
    const double first_free = (t.M0 + 2.0) / N;
    const double to_z = first_free * (t.M0 + 1.0) / N;
    const double to_xi1 = 2.0 * first_free * t.crowded() / N * q;
    out.push_back(edge(s, StateKind::Xi2, s, Z, to_z));
    out.push_back(edge(s, StateKind::Xi2, s, StateKind::Xi1, to_xi1));
    out.push_back(edge(s, StateKind::Xi2, s, StateKind::Xi2,
                       conservation_residue(to_z + to_xi1 + c.xi2_down + c.xi2_down_xi1 +
                                                c.xi2_down_xi2 + c.xi2_down_xi3,
                                            "odl xi2")));
  }

  if (has(kinds, StateKind::Xi3)) {
    const double to_z = e / N + t.M1 / N * e * e;
    out.push_back(edge(s, StateKind::Xi3, s, Z, to_z));
    out.push_back(edge(s, StateKind::Xi3, s, StateKind::Xi3,
                       conservation_residue(to_z + c.xi3_up + c.xi3_up_xi1 + c.xi3_up_xi2, "odl xi3")));
  }
  return out;
}

std::vector<Transition> odl_up_row(const OrderedRepartition& s, const UpNeighbor& up,
                                   const OdlRates& rates, int players, int resources) {
  const Terms t(s, players, resources);
  const OccupancyStats st(s);
  const double e = rates.epsilon;
  const double q = 1.0 - e;
  const double N = t.N;
  const double share = at_least_one(rates.explore, players) * st.players_sharing(up.source_load) / t.K;
  const auto& j = up.target;
  const auto Z = StateKind::Rrc;

  std::vector<Transition> out{
      edge(s, Z, j, Z, share * t.M0 / (N - 1.0)),
      edge(s, Z, j, StateKind::Xi1, share * (t.crowded() - 1.0) / (N - 1.0) * q),
      edge(s, Z, j, StateKind::Xi2, share * t.M1 / (N - 1.0) * q * q),
  };
  if (has(odl_state_set(s), StateKind::Xi3)) {
    const bool pair = up.source_load == 2;
    out.push_back(edge(s, StateKind::Xi3, j, Z, pair ? t.M0 / N : 0.0));
    out.push_back(edge(s, StateKind::Xi3, j, StateKind::Xi1, pair ? (t.crowded() - 1.0) / N * q : 0.0));
    out.push_back(edge(s, StateKind::Xi3, j, StateKind::Xi2, pair ? t.M1 / N * q * q : 0.0));
  }
  return out;
}

std::vector<Transition> odl_down_row(const OrderedRepartition& upper,
                                     const OrderedRepartition& lower, int source_load,
                                     const OdlRates& rates, int players, int resources) {
  const Terms t(upper, players, resources);
  const OccupancyStats st(upper);
  const double e = rates.epsilon;
  const double q = 1.0 - e;
  const double N = t.N;
  const double P = at_least_one(rates.explore, players);
  const int joined = source_load - 1;
  const bool crowd = joined > 1;
  const double Mw = st.resources_with(joined);
  const double lone_others = t.M1 - 1.0;
  const double first_free = (t.M0 + 2.0) / N;
  const auto kinds = odl_state_set(upper);
  const auto Z = StateKind::Rrc;

  std::vector<Transition> out;
  const double lone_move = P * t.m1 / t.K;
  out.push_back(edge(upper, Z, lower, Z,
                     crowd ? lone_move * Mw / (N - 1.0) * e
                           : lone_move * lone_others / (N - 1.0) * e * e));
  out.push_back(edge(upper, Z, lower, StateKind::Xi3,
                     crowd ? 0.0 : lone_move * lone_others / (N - 1.0) * 2.0 * e * q));

  if (has(kinds, StateKind::Xi1)) {
    out.push_back(edge(upper, StateKind::Xi1, lower, Z,
                       crowd ? Mw / N * e : lone_others / N * e * e));
    out.push_back(
        edge(upper, StateKind::Xi1, lower, StateKind::Xi3, crowd ? 0.0 : lone_others / N * 2.0 * e * q));
  }

  if (has(kinds, StateKind::Xi2)) {
    out.push_back(edge(upper, StateKind::Xi2, lower, Z,
                       crowd ? 2.0 * first_free * Mw / N * e
                             : first_free * lone_others / N * e * e));
    out.push_back(edge(upper, StateKind::Xi2, lower, StateKind::Xi1,
                       crowd ? 2.0 * Mw / N * e * t.crowded() / N * q
                             : 2.0 * (t.M1 - 2.0) / N * e * e * (t.crowded() + 1.0) / N * q));
    out.push_back(edge(upper, StateKind::Xi2, lower, StateKind::Xi2,
                       crowd ? 2.0 * Mw / N * e * (t.M1 - 2.0) / N * q * q
                             : (t.M1 - 2.0) / N * e * e * (t.M1 - 3.0) / N * q * q));
    out.push_back(edge(upper, StateKind::Xi2, lower, StateKind::Xi3,
                       crowd ? 0.0 : first_free * lone_others / N * 2.0 * e * q));
  }
  return out;
}

ApproxChain build_odl_chain(int players, int resources, const ControllerParams& params) {
  return build_odl_chain(players, resources, params, OdlRates::from_params(params));
}

ApproxChain build_odl_chain(int players, int resources, const ControllerParams& params,
                            const OdlRates& rates) {
  if (players < 2) throw ValidationError("chain needs at least two players");
  if (resources < players) throw ValidationError("resources must be ≥ players");
  params.validate(players);
  if (!(rates.epsilon > 0 && rates.epsilon < 1 && rates.explore > 0 && rates.explore < 1))
    throw ValidationError("ODL rates must lie in (0,1)");

  const auto classes = enumerate_rrc(players, resources);
  std::vector<std::vector<StateKind>> kinds;
  kinds.reserve(classes.size());
  for (const auto& s : classes) kinds.push_back(odl_state_set(s));

  ChainAssembler assembler({Algorithm::Odl, players, resources, rates.epsilon, params}, classes, kinds);
  for (const auto& s : classes) {
    assembler.add(odl_intra_row(s, rates, players, resources));
    for (const auto& up : up_neighbors(s)) {
      assembler.add(odl_up_row(s, up, rates, players, resources));
      assembler.add(odl_down_row(up.target, s, up.source_load, rates, players, resources));
    }
  }
  auto chain = std::move(assembler).finish();
  if (const auto report = verify_ergodic(chain.P); !report.ergodic)
    throw NumericalError("ODL chain is not ergodic: " + report.diagnostic);
  return chain;
}

}  // namespace telodl

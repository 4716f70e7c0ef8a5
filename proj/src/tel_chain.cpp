#include "telodl/tel_chain.hpp"

#include <algorithm>
#include <cmath>

#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"

namespace telodl {

namespace {

bool is_two_two_one(const OrderedRepartition& s) {
  // (2,...,2,1,0,...,0)
  const OccupancyStats st(s);
  return st.resources_with(1) == 1 && st.max_load() == 2;
}

Transition edge(const OrderedRepartition& from_set, StateKind from, const OrderedRepartition& to_set,
                StateKind to, double p) {
  return {{from_set, from}, {to_set, to}, p};
}

bool has(const std::vector<StateKind>& kinds, StateKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

void check_sizes(int players, int resources) {
  if (players < 2) throw ValidationError("chain needs at least two players");
  if (resources < players) throw ValidationError("resources must be ≥ players");
}

}  // namespace

std::vector<StateKind> tel_state_set(const OrderedRepartition& s) {
  const int alone = OccupancyStats(s).resources_with(1);
  std::vector<StateKind> kinds{StateKind::Rrc};
  if (alone == 0) return kinds;
  if (!is_two_two_one(s)) kinds.push_back(StateKind::Xi0);
  kinds.push_back(StateKind::Xi1);
  kinds.push_back(StateKind::Xi2);
  if (alone >= 2) {
    kinds.push_back(StateKind::Xi3);
    kinds.push_back(StateKind::Xi4);
  }
  return kinds;
}

std::vector<Transition> tel_intra_row(const OrderedRepartition& s, double epsilon, int players,
                                      int resources) {
  const OccupancyStats st(s);
  const double K = players;
  const double N = resources;
  const double M0 = st.resources_with(0);
  const double M1 = st.resources_with(1);
  const double m1 = st.players_sharing(1);
  const double p_any = at_least_one(epsilon, players);
  const double p_others = at_least_one(epsilon, players - 1);
  const double settle_occupied = std::pow(epsilon, 1.0 / (2.0 * K));
  const auto kinds = tel_state_set(s);
  const auto Z = StateKind::Rrc;

  std::vector<Transition> out;

  // Z: a non-interfered player is disturbed and turns watchful; the rest of
  // the mass not spent on finding a new resource stays put.
  const double z_to_xi1 = p_any * (K - 1.0) / K * M1 / (N - 1.0);
  const double z_up_total = p_any * (K - m1) / K * M0 / (N - 1.0);
  out.push_back(edge(s, Z, s, StateKind::Xi1, z_to_xi1));
  out.push_back(edge(s, Z, s, Z, conservation_residue(z_to_xi1 + z_up_total, "tel Z")));

  if (has(kinds, StateKind::Xi1)) {
    // The only place a second experiment is allowed while not aligned.
    const double to_xi2 = p_others / (N - 1.0);
    out.push_back(edge(s, StateKind::Xi1, s, StateKind::Xi2, to_xi2));
    out.push_back(edge(s, StateKind::Xi1, s, Z, 1.0 - to_xi2));
  }

  if (has(kinds, StateKind::Xi2)) {
    const double to_z = (M0 + 1.0) / N;
    const double to_xi3 = (M1 - 1.0) / N * settle_occupied;
    const double down_total = (N - M1 - M0) / N * settle_occupied;
    out.push_back(edge(s, StateKind::Xi2, s, Z, to_z));
    out.push_back(edge(s, StateKind::Xi2, s, StateKind::Xi3, to_xi3));
    out.push_back(edge(s, StateKind::Xi2, s, StateKind::Xi2,
                       conservation_residue(to_z + to_xi3 + down_total, "tel xi2")));
  }

  if (has(kinds, StateKind::Xi3)) out.push_back(edge(s, StateKind::Xi3, s, StateKind::Xi4, 1.0));

  if (has(kinds, StateKind::Xi4)) {
    const double to_xi0 = (M0 + 1.0) / N;
    const double to_xi3 = (M1 - 2.0) / N * settle_occupied;
    const double down_total = (N - M1 - M0 + 1.0) / N * settle_occupied;
    out.push_back(edge(s, StateKind::Xi4, s, StateKind::Xi0, to_xi0));
    out.push_back(edge(s, StateKind::Xi4, s, StateKind::Xi3, to_xi3));
    // Residual mass: the discontent player picks an occupied resource and
    // rejects it, staying in xi4.
    out.push_back(edge(s, StateKind::Xi4, s, StateKind::Xi4,
                       conservation_residue(to_xi0 + to_xi3 + down_total, "tel xi4")));
  }

  if (has(kinds, StateKind::Xi0)) out.push_back(edge(s, StateKind::Xi0, s, Z, 1.0));
  return out;
}

std::vector<Transition> tel_up_row(const OrderedRepartition& s, const UpNeighbor& up,
                                   double epsilon, int players, int resources) {
  const OccupancyStats st(s);
  const double K = players;
  const double N = resources;
  const double p = at_least_one(epsilon, players) * st.players_sharing(up.source_load) / K *
                   st.resources_with(0) / (N - 1.0);
  const bool leaves_alone = up.source_load == 2;
  return {
      edge(s, StateKind::Rrc, up.target, StateKind::Rrc, leaves_alone ? 0.0 : p),
      edge(s, StateKind::Rrc, up.target, StateKind::Xi0, leaves_alone ? p : 0.0),
  };
}

std::vector<Transition> tel_down_row(const OrderedRepartition& upper,
                                     const OrderedRepartition& lower, int source_load,
                                     double epsilon, int players, int resources) {
  const OccupancyStats st(upper);
  const double N = resources;
  const double settle_occupied = std::pow(epsilon, 1.0 / (2.0 * players));
  const int joined = source_load - 1;
  const double crowd = st.resources_with(joined) / N * settle_occupied;
  const auto kinds = tel_state_set(upper);

  std::vector<Transition> out;
  if (has(kinds, StateKind::Xi2))
    out.push_back(edge(upper, StateKind::Xi2, lower, StateKind::Rrc, joined >= 2 ? crowd : 0.0));
  if (has(kinds, StateKind::Xi4)) {
    out.push_back(
        edge(upper, StateKind::Xi4, lower, StateKind::Rrc, joined == 1 ? settle_occupied / N : 0.0));
    out.push_back(edge(upper, StateKind::Xi4, lower, StateKind::Xi0, joined >= 2 ? crowd : 0.0));
  }
  return out;
}

ApproxChain build_tel_chain(int players, int resources, const ControllerParams& params) {
  check_sizes(players, resources);
  params.validate(players);
  const double eps = params.epsilon;
  const auto classes = enumerate_rrc(players, resources);
  std::vector<std::vector<StateKind>> kinds;
  kinds.reserve(classes.size());
  for (const auto& s : classes) kinds.push_back(tel_state_set(s));

  ChainAssembler assembler({Algorithm::Tel, players, resources, eps, params}, classes, kinds);
  for (const auto& s : classes) {
    assembler.add(tel_intra_row(s, eps, players, resources));
    for (const auto& up : up_neighbors(s)) {
      assembler.add(tel_up_row(s, up, eps, players, resources));
      assembler.add(tel_down_row(up.target, s, up.source_load, eps, players, resources));
    }
  }
  auto chain = std::move(assembler).finish();
  if (const auto report = verify_ergodic(chain.P); !report.ergodic)
    throw NumericalError("TEL chain is not ergodic: " + report.diagnostic);
  return chain;
}

}  // namespace telodl

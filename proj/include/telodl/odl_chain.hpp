#pragma once

// Approximated ODL chain.  Around each class Z the builder keeps
//   xi1: one player alone is discontent,
//   xi2: two players alone are discontent,
//   xi3: one of two players sharing a resource is discontent.
// At most two simultaneous discontent players are represented.

#include <vector>

#include "telodl/chain.hpp"

namespace telodl {

/// The two probabilities the ODL rows are written in.  `epsilon` is the
/// acceptance base (a change to utility u is kept w.p. epsilon^(1-u));
/// `explore` is the per-player probability that a content player experiments,
/// which enters through 1 - (1 - explore)^K.
struct OdlRates {
  double epsilon;
  double explore;

  /// explore = epsilon^c, matching the controller.
  static OdlRates from_params(const ControllerParams& params);
  /// One symbol for both roles.
  static OdlRates single(double epsilon) { return {epsilon, epsilon}; }
};

/// Z always; xi3 if some resource holds exactly two players; xi1 if a player
/// is alone; xi2 if two or more are alone.
std::vector<StateKind> odl_state_set(const OrderedRepartition& s);

std::vector<Transition> odl_intra_row(const OrderedRepartition& s, const OdlRates& rates,
                                      int players, int resources);

/// Z_n(i) -> {Z, xi1, xi2}_{n+1}(j), plus xi3_n(i) -> {Z, xi1, xi2}_{n+1}(j)
/// when the vacated resource held two players.
std::vector<Transition> odl_up_row(const OrderedRepartition& s, const UpNeighbor& up,
                                   const OdlRates& rates, int players, int resources);

/// Moves from the set of `upper` back to `lower`; `source_load` is the load of
/// the resource `lower` vacated on the way up.
std::vector<Transition> odl_down_row(const OrderedRepartition& upper,
                                     const OrderedRepartition& lower, int source_load,
                                     const OdlRates& rates, int players, int resources);

/// Aggregate cross-set masses used by the conservation self-loops; exposed so
/// the per-target decomposition can be checked against them.
struct OdlCrossTotals {
  double z_up = 0, z_down = 0, z_up_xi1 = 0, z_up_xi2 = 0, z_down_xi3 = 0;
  double xi1_down = 0, xi1_down_xi3 = 0;
  double xi2_down = 0, xi2_down_xi1 = 0, xi2_down_xi2 = 0, xi2_down_xi3 = 0;
  double xi3_up = 0, xi3_up_xi1 = 0, xi3_up_xi2 = 0;
};

OdlCrossTotals odl_cross_totals(const OrderedRepartition& s, const OdlRates& rates, int players,
                                int resources);

ApproxChain build_odl_chain(int players, int resources, const ControllerParams& params);
ApproxChain build_odl_chain(int players, int resources, const ControllerParams& params,
                            const OdlRates& rates);

}  // namespace telodl

#pragma once

// Approximated TEL chain.  Around each class Z the builder keeps
//   xi0: one player alone is hopeful,
//   xi1: one player alone is watchful,
//   xi2: one player alone is discontent,
//   xi3: two formerly alone players share a resource, one watchful,
//   xi4: the same pair, one discontent.
// At most one content player experiments per iteration, and a discontent
// player settles on a free resource w.p. 1 and on an occupied one w.p.
// epsilon^(1/2K).

#include <vector>

#include "telodl/chain.hpp"

namespace telodl {

/// Z always; xi0..xi2 when at least one player is alone (xi0 dropped for
/// (2,...,2,1,0,...)); xi3, xi4 as well when two or more are alone.
std::vector<StateKind> tel_state_set(const OrderedRepartition& s);

/// Transitions that stay inside the set of `s`, conservation self-loops
/// included.
std::vector<Transition> tel_intra_row(const OrderedRepartition& s, double epsilon, int players,
                                      int resources);

/// Z_n(i) -> Z_{n+1}(j) when the vacated resource keeps more than one player,
/// Z_n(i) -> xi0_{n+1}(j) when it leaves one player alone.
std::vector<Transition> tel_up_row(const OrderedRepartition& s, const UpNeighbor& up,
                                   double epsilon, int players, int resources);

/// Moves from the set of `upper` (n+1 resources) back to `lower`, reached from
/// `lower` by vacating a resource that held `source_load` players.
std::vector<Transition> tel_down_row(const OrderedRepartition& upper,
                                     const OrderedRepartition& lower, int source_load,
                                     double epsilon, int players, int resources);

/// Requires N >= K >= 2 and 0 < epsilon < 1.  Throws NumericalError if the
/// result is not ergodic.
ApproxChain build_tel_chain(int players, int resources, const ControllerParams& params);

}  // namespace telodl

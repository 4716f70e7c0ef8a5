#pragma once

// Approximated Markov chain over reduced recurrence classes plus intermediary
// states, shared by the TEL and ODL builders.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "telodl/game.hpp"
#include "telodl/partitions.hpp"

namespace telodl {

/// Rrc is the all-content aligned class itself; XiN are the intermediary
/// states attached to it.  The meaning of each XiN differs between TEL and
/// ODL.
enum class StateKind { Rrc, Xi0, Xi1, Xi2, Xi3, Xi4 };

std::string_view to_string(StateKind kind);
StateKind parse_state_kind(std::string_view text);

struct ChainState {
  int n = 0;      // occupied resources
  int index = 0;  // 1-based position among the classes with n parts
  StateKind kind = StateKind::Rrc;
  OrderedRepartition repartition;
  std::string label;
};

/// A state named by its class and kind, independent of matrix layout.
struct StateRef {
  OrderedRepartition set;
  StateKind kind;
};

struct Transition {
  StateRef from;
  StateRef to;
  double probability;
};

struct ChainMeta {
  Algorithm algo = Algorithm::Tel;
  int players = 0;
  int resources = 0;
  double epsilon = 0.0;
  ControllerParams params;
};

struct ApproxChain {
  ChainMeta meta;
  std::vector<ChainState> states;
  Eigen::MatrixXd P;
  /// Labels of states the builder's rules created but no transition can
  /// reach; they are left out of `states` and `P`.
  std::vector<std::string> dropped;

  std::size_t size() const { return states.size(); }
  std::optional<std::size_t> find(const OrderedRepartition& set, StateKind kind) const;
  /// Index of the Rrc state of `set`; throws ValidationError if absent.
  std::size_t rrc(const OrderedRepartition& set) const;
};

/// Collects states and transition rows, then checks the result is
/// row-stochastic.
class ChainAssembler {
 public:
  ChainAssembler(ChainMeta meta, const std::vector<OrderedRepartition>& classes,
                 const std::vector<std::vector<StateKind>>& kinds_per_class);

  /// Adds `t`.  A zero-probability transition touching an absent state is
  /// dropped; a positive one is a construction error.
  void add(const Transition& t);
  void add(const std::vector<Transition>& ts);

  /// Throws NumericalError if a row does not sum to 1 within `tolerance` or
  /// an entry leaves [0,1].  States not reachable from the first state are
  /// then removed; they carry no stationary mass and would break
  /// irreducibility.
  ApproxChain finish(double tolerance = 1e-12) &&;

 private:
  ApproxChain chain_;
  std::map<std::pair<OrderedRepartition, StateKind>, std::size_t> lookup_;
};

/// Conservation residue 1 - sum(outgoing).  Throws NumericalError when the
/// residue is negative beyond round-off.
double conservation_residue(double outgoing, std::string_view where);

/// 1 - (1 - p)^k: at least one of k players experiments.
double at_least_one(double p, int k);

std::string state_label(const OrderedRepartition& s, int n, int index, StateKind kind);

// JSON chain export: {meta:{algo,K,N,epsilon,params}, states:[{n,i,kind,label}],
// matrix:[[...]]}.
nlohmann::json to_json(const ApproxChain& chain);
ApproxChain chain_from_json(const nlohmann::json& doc);

}  // namespace telodl

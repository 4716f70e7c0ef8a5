#pragma once

// Occupancy bookkeeping for the reduced recurrence classes: a class is
// identified by how many players share each resource, sorted non-increasing.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace telodl {

class OrderedRepartition {
 public:
  OrderedRepartition() = default;
  /// `counts` must be non-increasing and non-negative; its length is N.
  explicit OrderedRepartition(std::vector<int> counts);

  std::span<const int> counts() const { return counts_; }
  int operator[](std::size_t k) const { return counts_[k]; }
  int resources() const { return static_cast<int>(counts_.size()); }
  int players() const;
  /// Number of occupied resources.
  int parts() const;
  bool is_orthogonal() const;  // (1,...,1,0,...,0)

  /// "(2,1,0)"
  std::string label() const;

  auto operator<=>(const OrderedRepartition&) const = default;
  bool operator==(const OrderedRepartition&) const = default;

 private:
  std::vector<int> counts_;
};

/// Resource counts by load: resources_with(p) resources hold exactly p
/// players; players_sharing(p) = p * resources_with(p).
class OccupancyStats {
 public:
  explicit OccupancyStats(const OrderedRepartition& s);

  int resources_with(int p) const;
  int players_sharing(int p) const { return p * resources_with(p); }
  int max_load() const { return static_cast<int>(by_load_.size()) - 1; }

 private:
  std::vector<int> by_load_;
};

/// Partitions of x into exactly n positive parts.
std::uint64_t part(int x, int n);

/// All classes for K players on N >= K resources: n = 1..min(N,K), and inside
/// each n the partitions in lexicographically decreasing order.
std::vector<OrderedRepartition> enumerate_rrc(int players, int resources);

/// Occupancy of each resource, sorted non-increasing.
OrderedRepartition reduce(std::span<const int> actions, int resources);

OrderedRepartition collision_repartition(int players, int resources);
OrderedRepartition orthogonal_repartition(int players, int resources);

/// One player leaves a resource holding `source_load` > 1 players for a free
/// resource.  Every resource with that load leads to the same target, so
/// `multiplicity` counts them.
struct UpNeighbor {
  int source_load;
  int multiplicity;
  OrderedRepartition target;
};

/// One distinct target per distinct component value > 1; empty when every
/// resource is used or no resource is shared.
std::vector<UpNeighbor> up_neighbors(const OrderedRepartition& s);

/// Reverse move: a player that is alone joins a resource holding `joined_load`
/// players.  `multiplicity` is the number of resources with that load seen by
/// the moving player (M(w), or M(1)-1 when w = 1).
struct DownNeighbor {
  int joined_load;
  int multiplicity;
  OrderedRepartition target;
};

std::vector<DownNeighbor> down_neighbors(const OrderedRepartition& s);

/// (moods * N^2 * 2)^K states in the unreduced chain.
boost::multiprecision::cpp_int full_chain_size(int moods, int resources, int players);

/// sum_{n=1}^{min(N,K)} part(K, n)
std::uint64_t reduced_size(int players, int resources);

}  // namespace telodl

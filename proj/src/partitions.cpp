#include "telodl/partitions.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "telodl/errors.hpp"

namespace telodl {

OrderedRepartition::OrderedRepartition(std::vector<int> counts) : counts_(std::move(counts)) {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] < 0) throw ValidationError("negative occupancy in repartition");
    if (k > 0 && counts_[k] > counts_[k - 1])
      throw ValidationError("repartition must be sorted non-increasing");
  }
}

int OrderedRepartition::players() const {
  int total = 0;
  for (int c : counts_) total += c;
  return total;
}

int OrderedRepartition::parts() const {
  return static_cast<int>(std::count_if(counts_.begin(), counts_.end(), [](int c) { return c > 0; }));
}

bool OrderedRepartition::is_orthogonal() const {
  return std::all_of(counts_.begin(), counts_.end(), [](int c) { return c <= 1; });
}

std::string OrderedRepartition::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < counts_.size(); ++k) os << (k ? "," : "") << counts_[k];
  os << ')';
  return os.str();
}

OccupancyStats::OccupancyStats(const OrderedRepartition& s) {
  const int top = s.resources() ? s[0] : 0;
  by_load_.assign(static_cast<std::size_t>(top) + 1, 0);
  for (int c : s.counts()) ++by_load_[static_cast<std::size_t>(c)];
}

int OccupancyStats::resources_with(int p) const {
  if (p < 0 || p >= static_cast<int>(by_load_.size())) return 0;
  return by_load_[static_cast<std::size_t>(p)];
}

std::uint64_t part(int x, int n) {
  if (n < 1 || x < n) return 0;
  // table[y][j] = part(y, j), filled by part(y, j) = part(y-1, j-1) + part(y-j, j).
  std::vector<std::vector<std::uint64_t>> table(
      static_cast<std::size_t>(x) + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  for (int y = 1; y <= x; ++y) {
    for (int j = 1; j <= std::min(y, n); ++j) {
      if (j == 1 || j == y) {
        table[y][j] = 1;
      } else {
        table[y][j] = table[y - 1][j - 1] + table[y - j][j];
      }
    }
  }
  return table[x][n];
}

namespace {

// Partitions of `remaining` into exactly `slots` parts, each <= `cap`, emitted
// in lexicographically decreasing order.
void emit_partitions(int remaining, int slots, int cap, std::vector<int>& prefix,
                     const std::function<void(const std::vector<int>&)>& out) {
  if (slots == 0) {
    if (remaining == 0) out(prefix);
    return;
  }
  const int hi = std::min(cap, remaining - (slots - 1));
  const int lo = (remaining + slots - 1) / slots;
  for (int v = hi; v >= lo; --v) {
    prefix.push_back(v);
    emit_partitions(remaining - v, slots - 1, v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<OrderedRepartition> enumerate_rrc(int players, int resources) {
  if (players < 1) throw ValidationError("need at least one player");
  if (resources < players) throw ValidationError("resources must be ≥ players");
  std::vector<OrderedRepartition> out;
  for (int n = 1; n <= std::min(players, resources); ++n) {
    std::vector<int> prefix;
    emit_partitions(players, n, players, prefix, [&](const std::vector<int>& p) {
      std::vector<int> counts(p);
      counts.resize(static_cast<std::size_t>(resources), 0);
      out.emplace_back(std::move(counts));
    });
  }
  return out;
}

OrderedRepartition reduce(std::span<const int> actions, int resources) {
  std::vector<int> load(static_cast<std::size_t>(resources), 0);
  for (int a : actions) {
    if (a < 0 || a >= resources) throw ValidationError("action index out of range");
    ++load[static_cast<std::size_t>(a)];
  }
  std::sort(load.begin(), load.end(), std::greater<>());
  return OrderedRepartition(std::move(load));
}

OrderedRepartition collision_repartition(int players, int resources) {
  std::vector<int> c(static_cast<std::size_t>(resources), 0);
  c[0] = players;
  return OrderedRepartition(std::move(c));
}

OrderedRepartition orthogonal_repartition(int players, int resources) {
  if (resources < players) throw ValidationError("resources must be ≥ players");
  std::vector<int> c(static_cast<std::size_t>(resources), 0);
  std::fill_n(c.begin(), players, 1);
  return OrderedRepartition(std::move(c));
}

namespace {

OrderedRepartition sorted(std::vector<int> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return OrderedRepartition(std::move(counts));
}

}  // namespace

std::vector<UpNeighbor> up_neighbors(const OrderedRepartition& s) {
  std::vector<UpNeighbor> out;
  const int n = s.parts();
  if (n >= s.resources()) return out;
  const OccupancyStats stats(s);
  for (int k = 0; k < n; ++k) {
    const int load = s[static_cast<std::size_t>(k)];
    if (load <= 1) break;
    if (k > 0 && s[static_cast<std::size_t>(k - 1)] == load) continue;
    std::vector<int> w(s.counts().begin(), s.counts().end());
    w[static_cast<std::size_t>(k)] -= 1;
    w[static_cast<std::size_t>(n)] = 1;
    out.push_back({load, stats.resources_with(load), sorted(std::move(w))});
  }
  return out;
}

std::vector<DownNeighbor> down_neighbors(const OrderedRepartition& s) {
  std::vector<DownNeighbor> out;
  const OccupancyStats stats(s);
  const int alone = stats.resources_with(1);
  if (alone == 0) return out;
  const int n = s.parts();
  // The mover is the right-most 1; it joins the left-most resource with load w.
  for (int k = 0; k < n; ++k) {
    const int load = s[static_cast<std::size_t>(k)];
    if (k > 0 && s[static_cast<std::size_t>(k - 1)] == load) continue;
    const int seen = load == 1 ? alone - 1 : stats.resources_with(load);
    if (seen == 0) continue;
    std::vector<int> w(s.counts().begin(), s.counts().end());
    w[static_cast<std::size_t>(k)] += 1;
    w[static_cast<std::size_t>(n - 1)] -= 1;
    out.push_back({load, seen, sorted(std::move(w))});
  }
  return out;
}

boost::multiprecision::cpp_int full_chain_size(int moods, int resources, int players) {
  if (moods < 1 || resources < 1 || players < 1)
    throw ValidationError("complexity arguments must be positive");
  using boost::multiprecision::cpp_int;
  const cpp_int base = cpp_int(moods) * resources * resources * 2;
  return boost::multiprecision::pow(base, static_cast<unsigned>(players));
}

std::uint64_t reduced_size(int players, int resources) {
  std::uint64_t total = 0;
  for (int n = 1; n <= std::min(players, resources); ++n) total += part(players, n);
  return total;
}

}  // namespace telodl

#include "full_chain.hpp"

#include <cmath>
#include <deque>

namespace oracle {

namespace {

std::vector<int> utilities(const State& s, int resources) {
  std::vector<int> load(resources, 0);
  for (const auto& p : s) ++load[p.action];
  std::vector<int> u;
  for (const auto& p : s) u.push_back(load[p.action] == 1);
  return u;
}

struct Choice {
  int action;
  bool experimented;
  double prob;
};

// First half of an iteration: the action each player plays.
std::vector<Choice> choices(telodl::Algorithm algo, const Player& p, int N,
                            const telodl::ControllerParams& c) {
  if (p.mood == 3) {
    std::vector<Choice> out;
    for (int r = 0; r < N; ++r) out.push_back({r, false, 1.0 / N});
    return out;
  }
  if (p.mood != 0 || N == 1) return {{p.bench_action, false, 1.0}};
  const double e = algo == telodl::Algorithm::Tel ? c.epsilon : std::pow(c.epsilon, c.c);
  std::vector<Choice> out{{p.bench_action, false, 1.0 - e}};
  for (int r = 0; r < N; ++r)
    if (r != p.bench_action) out.push_back({r, true, e / (N - 1)});
  return out;
}

struct Outcome {
  Player next;
  double prob;
};

// Second half: mood and benchmark given the utility just received.
std::vector<Outcome> tel_update(const Player& p, bool experimented, int u,
                                const telodl::ControllerParams& c) {
  const int ub = p.bench_utility;
  Player q = p;
  switch (p.mood) {
    case 0:
      if (experimented) {
        if (u > ub) {
          const double a = std::pow(c.epsilon, -c.nu1 * (u - ub) + c.nu2);
          Player adopt = p;
          adopt.bench_action = p.action;
          adopt.bench_utility = u;
          return {{adopt, a}, {q, 1.0 - a}};
        }
        return {{q, 1.0}};
      }
      q.mood = u > ub ? 1 : (u < ub ? 2 : 0);
      return {{q, 1.0}};
    case 1:
      if (u > ub) {
        q.mood = 0;
        q.bench_utility = u;
      } else {
        q.mood = u < ub ? 2 : 0;
      }
      return {{q, 1.0}};
    case 2:
      q.mood = u > ub ? 1 : (u < ub ? 3 : 0);
      return {{q, 1.0}};
    default: {
      const double settle = std::pow(c.epsilon, -c.phi1 * u + c.phi2);
      Player s = p;
      s.mood = 0;
      s.bench_action = p.action;
      s.bench_utility = u;
      return {{s, settle}, {q, 1.0 - settle}};
    }
  }
}

std::vector<Outcome> odl_update(const Player& p, bool experimented, int u,
                                const telodl::ControllerParams& c) {
  const double accept = std::pow(c.epsilon, 1.0 - u);
  Player keep = p;
  if (p.mood == 0) {
    if (u == p.bench_utility) return {{keep, 1.0}};
    Player ok = p;
    ok.bench_utility = u;
    if (experimented) ok.bench_action = p.action;
    Player unhappy = p;
    unhappy.mood = 3;
    return {{ok, accept}, {unhappy, 1.0 - accept}};
  }
  Player settle = p;
  settle.mood = 0;
  settle.bench_action = p.action;
  settle.bench_utility = u;
  return {{settle, accept}, {keep, 1.0 - accept}};
}

// All successors of `s` with their probabilities.
std::map<State, double> successors(telodl::Algorithm algo, const State& s, int N,
                                   const telodl::ControllerParams& c) {
  const std::size_t K = s.size();
  std::vector<std::vector<Choice>> per_player;
  for (const auto& p : s) per_player.push_back(choices(algo, p, N, c));

  std::map<State, double> out;
  std::vector<std::size_t> pick(K, 0);
  while (true) {
    State played = s;
    std::vector<bool> exp(K);
    double prob = 1.0;
    for (std::size_t k = 0; k < K; ++k) {
      const auto& ch = per_player[k][pick[k]];
      played[k].action = ch.action;
      exp[k] = ch.experimented;
      prob *= ch.prob;
    }
    if (prob > 0.0) {
      const auto u = utilities(played, N);
      std::vector<std::vector<Outcome>> updates;
      for (std::size_t k = 0; k < K; ++k)
        updates.push_back(algo == telodl::Algorithm::Tel ? tel_update(played[k], exp[k], u[k], c)
                                                         : odl_update(played[k], exp[k], u[k], c));
      std::vector<std::size_t> o(K, 0);
      while (true) {
        State next(K);
        double q = prob;
        for (std::size_t k = 0; k < K; ++k) {
          next[k] = updates[k][o[k]].next;
          q *= updates[k][o[k]].prob;
        }
        if (q > 0.0) out[next] += q;
        std::size_t k = 0;
        while (k < K && ++o[k] == updates[k].size()) o[k++] = 0;
        if (k == K) break;
      }
    }
    std::size_t k = 0;
    while (k < K && ++pick[k] == per_player[k].size()) pick[k++] = 0;
    if (k == K) break;
  }
  return out;
}

}  // namespace

bool FullChain::orthogonal(std::size_t k) const {
  std::vector<int> load(resources, 0);
  for (const auto& p : states[k])
    if (++load[p.action] > 1) return false;
  return true;
}

bool FullChain::recurrent_class(std::size_t k) const {
  const auto u = utilities(states[k], resources);
  for (std::size_t i = 0; i < states[k].size(); ++i) {
    const auto& p = states[k][i];
    if (p.mood != 0 || p.action != p.bench_action || u[i] != p.bench_utility) return false;
  }
  return true;
}

FullChain enumerate(telodl::Algorithm algo, int players, int resources,
                    const telodl::ControllerParams& params) {
  const int u0 = players == 1 ? 1 : 0;
  const State start(players, Player{0, 0, 0, u0});
  std::map<State, std::size_t> index{{start, 0}};
  std::vector<State> order{start};
  std::vector<std::map<State, double>> rows;
  for (std::size_t k = 0; k < order.size(); ++k) {
    rows.push_back(successors(algo, order[k], resources, params));
    for (const auto& [next, p] : rows.back())
      if (index.emplace(next, order.size()).second) order.push_back(next);
  }
  FullChain chain;
  chain.resources = resources;
  chain.states = order;
  const auto n = static_cast<Eigen::Index>(order.size());
  chain.P = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [next, p] : rows[r]) chain.P(r, index.at(next)) += p;
  return chain;
}

double hitting_time_to_orthogonal(const FullChain& chain) {
  const auto n = chain.P.rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (chain.orthogonal(k)) continue;
    A.row(k) -= chain.P.row(k);
    rhs[k] = 1.0;
  }
  const Eigen::VectorXd t = A.fullPivLu().solve(rhs);
  return t[0];
}

double stability(const FullChain& chain) {
  // Left null vector of P - I with a normalization row appended.
  const auto n = chain.P.rows();
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = (chain.P - Eigen::MatrixXd::Identity(n, n)).transpose();
  A.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  const Eigen::VectorXd pi = A.colPivHouseholderQr().solve(rhs);
  double alpha = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (chain.orthogonal(k) && chain.recurrent_class(k)) alpha += pi[k];
  return alpha;
}

}  // namespace oracle

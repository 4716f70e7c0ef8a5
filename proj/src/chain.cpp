#include "telodl/chain.hpp"

#include <cmath>
#include <sstream>

#include "telodl/errors.hpp"

namespace telodl {

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Rrc: return "Z";
    case StateKind::Xi0: return "xi0";
    case StateKind::Xi1: return "xi1";
    case StateKind::Xi2: return "xi2";
    case StateKind::Xi3: return "xi3";
    case StateKind::Xi4: return "xi4";
  }
  return "?";
}

StateKind parse_state_kind(std::string_view text) {
  for (auto k : {StateKind::Rrc, StateKind::Xi0, StateKind::Xi1, StateKind::Xi2, StateKind::Xi3,
                 StateKind::Xi4})
    if (to_string(k) == text) return k;
  throw ValidationError("unknown state kind '" + std::string(text) + "'");
}

std::string state_label(const OrderedRepartition& s, int n, int index, StateKind kind) {
  std::ostringstream os;
  os << to_string(kind) << '_' << n << '(' << index << ") " << s.label();
  return os.str();
}

std::optional<std::size_t> ApproxChain::find(const OrderedRepartition& set, StateKind kind) const {
  for (std::size_t k = 0; k < states.size(); ++k)
    if (states[k].kind == kind && states[k].repartition == set) return k;
  return std::nullopt;
}

std::size_t ApproxChain::rrc(const OrderedRepartition& set) const {
  if (auto k = find(set, StateKind::Rrc)) return *k;
  throw ValidationError("no class " + set.label() + " in chain");
}

// expm1/log1p keep the result accurate when p is far below machine epsilon.
double at_least_one(double p, int k) { return -std::expm1(k * std::log1p(-p)); }

double conservation_residue(double outgoing, std::string_view where) {
  const double r = 1.0 - outgoing;
  if (r < -1e-12) {
    std::ostringstream os;
    os << "negative conservation residue " << r << " in " << where;
    throw NumericalError(os.str());
  }
  return r < 0.0 ? 0.0 : r;
}

ChainAssembler::ChainAssembler(ChainMeta meta, const std::vector<OrderedRepartition>& classes,
                               const std::vector<std::vector<StateKind>>& kinds_per_class) {
  chain_.meta = std::move(meta);
  int current_n = 0;
  int index = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& s = classes[c];
    const int n = s.parts();
    index = (n == current_n) ? index + 1 : 1;
    current_n = n;
    for (StateKind kind : kinds_per_class[c]) {
      lookup_.emplace(std::make_pair(s, kind), chain_.states.size());
      chain_.states.push_back({n, index, kind, s, state_label(s, n, index, kind)});
    }
  }
  const auto dim = static_cast<Eigen::Index>(chain_.states.size());
  chain_.P = Eigen::MatrixXd::Zero(dim, dim);
}

void ChainAssembler::add(const Transition& t) {
  const auto from = lookup_.find({t.from.set, t.from.kind});
  const auto to = lookup_.find({t.to.set, t.to.kind});
  if (from == lookup_.end() || to == lookup_.end()) {
    if (t.probability == 0.0) return;
    std::ostringstream os;
    os << "transition " << to_string(t.from.kind) << t.from.set.label() << " -> "
       << to_string(t.to.kind) << t.to.set.label() << " with probability " << t.probability
       << " touches an absent state";
    throw NumericalError(os.str());
  }
  if (t.probability < 0.0) throw NumericalError("negative transition probability");
  chain_.P(static_cast<Eigen::Index>(from->second), static_cast<Eigen::Index>(to->second)) +=
      t.probability;
}

void ChainAssembler::add(const std::vector<Transition>& ts) {
  for (const auto& t : ts) add(t);
}

ApproxChain ChainAssembler::finish(double tolerance) && {
  const auto& P = chain_.P;
  for (Eigen::Index r = 0; r < P.rows(); ++r) {
    const double sum = P.row(r).sum();
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream os;
      os << "row " << chain_.states[static_cast<std::size_t>(r)].label << " sums to " << sum;
      throw NumericalError(os.str());
    }
    if (P.row(r).minCoeff() < 0.0 || P.row(r).maxCoeff() > 1.0 + tolerance)
      throw NumericalError("entry outside [0,1] in row " +
                           chain_.states[static_cast<std::size_t>(r)].label);
  }

  // Reachable set from state 0 (the full-collision class).
  const auto dim = P.rows();
  std::vector<char> seen(static_cast<std::size_t>(dim), 0);
  std::vector<Eigen::Index> todo{0};
  seen[0] = 1;
  while (!todo.empty()) {
    const auto r = todo.back();
    todo.pop_back();
    for (Eigen::Index c = 0; c < dim; ++c)
      if (P(r, c) > 0.0 && !seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        todo.push_back(c);
      }
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (seen[static_cast<std::size_t>(k)])
      keep.push_back(k);
    else
      chain_.dropped.push_back(chain_.states[static_cast<std::size_t>(k)].label);
  }
  if (static_cast<Eigen::Index>(keep.size()) == dim) return std::move(chain_);

  ApproxChain out;
  out.meta = chain_.meta;
  out.dropped = std::move(chain_.dropped);
  const auto kept = static_cast<Eigen::Index>(keep.size());
  out.P.resize(kept, kept);
  for (Eigen::Index r = 0; r < kept; ++r) {
    out.states.push_back(chain_.states[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])]);
    for (Eigen::Index c = 0; c < kept; ++c)
      out.P(r, c) = P(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]);
  }
  return out;
}

nlohmann::json to_json(const ApproxChain& chain) {
  const auto& m = chain.meta;
  nlohmann::json doc;
  doc["meta"] = {{"algo", std::string(to_string(m.algo))},
                 {"K", m.players},
                 {"N", m.resources},
                 {"epsilon", m.epsilon},
                 {"params",
                  {{"epsilon", m.params.epsilon},
                   {"nu1", m.params.nu1},
                   {"nu2", m.params.nu2},
                   {"phi1", m.params.phi1},
                   {"phi2", m.params.phi2},
                   {"c", m.params.c}}}};
  auto states = nlohmann::json::array();
  for (const auto& s : chain.states)
    states.push_back({{"n", s.n}, {"i", s.index}, {"kind", std::string(to_string(s.kind))},
                      {"label", s.label}});
  doc["states"] = std::move(states);
  doc["dropped"] = chain.dropped;
  auto matrix = nlohmann::json::array();
  for (Eigen::Index r = 0; r < chain.P.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < chain.P.cols(); ++c) row.push_back(chain.P(r, c));
    matrix.push_back(std::move(row));
  }
  doc["matrix"] = std::move(matrix);
  return doc;
}

ApproxChain chain_from_json(const nlohmann::json& doc) {
  try {
    ApproxChain chain;
    const auto& meta = doc.at("meta");
    chain.meta.algo = parse_algorithm(meta.at("algo").get<std::string>());
    chain.meta.players = meta.at("K").get<int>();
    chain.meta.resources = meta.at("N").get<int>();
    chain.meta.epsilon = meta.at("epsilon").get<double>();
    const auto& p = meta.at("params");
    chain.meta.params.epsilon = p.at("epsilon").get<double>();
    chain.meta.params.nu1 = p.at("nu1").get<double>();
    chain.meta.params.nu2 = p.at("nu2").get<double>();
    chain.meta.params.phi1 = p.at("phi1").get<double>();
    chain.meta.params.phi2 = p.at("phi2").get<double>();
    chain.meta.params.c = p.at("c").get<double>();

    // (n, i) -> class, using the same canonical enumeration as the builders.
    std::map<std::pair<int, int>, OrderedRepartition> by_index;
    int current_n = 0;
    int index = 0;
    for (const auto& s : enumerate_rrc(chain.meta.players, chain.meta.resources)) {
      index = (s.parts() == current_n) ? index + 1 : 1;
      current_n = s.parts();
      by_index.emplace(std::make_pair(current_n, index), s);
    }

    for (const auto& js : doc.at("states")) {
      ChainState st;
      st.n = js.at("n").get<int>();
      st.index = js.at("i").get<int>();
      st.kind = parse_state_kind(js.at("kind").get<std::string>());
      st.label = js.at("label").get<std::string>();
      const auto it = by_index.find({st.n, st.index});
      if (it == by_index.end()) throw ValidationError("state (n,i) not a valid class");
      st.repartition = it->second;
      chain.states.push_back(std::move(st));
    }
    if (doc.contains("dropped")) chain.dropped = doc.at("dropped").get<std::vector<std::string>>();
    const auto dim = static_cast<Eigen::Index>(chain.states.size());
    const auto& rows = doc.at("matrix");
    if (static_cast<Eigen::Index>(rows.size()) != dim)
      throw ValidationError("matrix row count does not match state count");
    chain.P.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != dim)
        throw ValidationError("matrix is not square");
      for (Eigen::Index c = 0; c < dim; ++c) chain.P(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed chain document: ") + e.what());
  }
}

}  // namespace telodl

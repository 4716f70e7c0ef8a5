#pragma once

#include <vector>

#include "telodl/chain.hpp"

// Sum of the probabilities of every listed transition from (fs,fk) to (ts,tk).
inline double prob(const std::vector<telodl::Transition>& row, const telodl::OrderedRepartition& fs,
                   telodl::StateKind fk, const telodl::OrderedRepartition& ts, telodl::StateKind tk) {
  double p = 0.0;
  for (const auto& t : row)
    if (t.from.set == fs && t.from.kind == fk && t.to.set == ts && t.to.kind == tk) p += t.probability;
  return p;
}

inline telodl::OrderedRepartition rep(std::vector<int> v) {
  return telodl::OrderedRepartition(std::move(v));
}

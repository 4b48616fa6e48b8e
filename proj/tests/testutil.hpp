#pragma once

// Shared helpers for the test binaries: deterministic random session types
// and processes.

#include <random>

#include "stiso/semantics.hpp"

namespace testutil {

using namespace stiso;

inline TypePtr random_type(std::mt19937_64& rng, int depth) {
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  if (depth <= 0 || pick(4) == 0) return tend();
  Base bases[] = {Base::Unit, Base::Bool, Base::Int};
  switch (pick(4)) {
    case 0: return tout(bases[pick(3)], random_type(rng, depth - 1));
    case 1: return tin(bases[pick(3)], random_type(rng, depth - 1));
    case 2:
      return tselect(random_type(rng, depth - 1), random_type(rng, depth - 1));
    default:
      return tbranch(random_type(rng, depth - 1), random_type(rng, depth - 1));
  }
}

inline ProcPtr random_process(std::uint64_t seed, int depth = 3, int budget = 8) {
  std::mt19937_64 rng(seed);
  TypePtr l = random_type(rng, depth), r = random_type(rng, depth);
  return generate_typed({l, r}, rng(), budget);
}

// All session types of exactly `size` nodes over the three base types.
inline const std::vector<TypePtr>& types_of_size(std::size_t size) {
  static std::vector<std::vector<TypePtr>> table{{}, {tend()}};
  while (table.size() <= size) {
    std::size_t n = table.size();
    std::vector<TypePtr> out;
    for (const TypePtr& c : table[n - 1])
      for (Base b : {Base::Unit, Base::Bool, Base::Int}) {
        out.push_back(tout(b, c));
        out.push_back(tin(b, c));
      }
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (const TypePtr& a : table[i])
        for (const TypePtr& b : table[n - 1 - i]) {
          out.push_back(tselect(a, b));
          out.push_back(tbranch(a, b));
        }
    table.push_back(std::move(out));
  }
  return table[size];
}

}  // namespace testutil

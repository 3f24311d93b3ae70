#pragma once

#include "ef1po/instance.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace ef1po::testing {

inline Instance costs(std::initializer_list<std::initializer_list<int>> rows,
                      std::initializer_list<int> entitlements = {}) {
  CostMatrix c;
  for (const auto& row : rows) {
    c.emplace_back();
    for (int v : row) c.back().push_back(Rat(v));
  }
  std::vector<Rat> alpha;
  for (int a : entitlements) alpha.push_back(Rat(a));
  return Instance(std::move(c), std::move(alpha));
}

/// Bundles with 1-based chore labels.
inline Allocation bundles(std::size_t chores, std::initializer_list<std::initializer_list<Index>> parts) {
  std::vector<Bundle> b;
  for (const auto& part : parts) {
    b.emplace_back();
    for (Index j : part) b.back().push_back(j - 1);
  }
  return Allocation::from_bundles(chores, b);
}

inline Rat q(const char* text) { return parse_rat(text); }

inline std::vector<Rat> rats(std::initializer_list<const char*> values) {
  std::vector<Rat> out;
  for (const char* v : values) out.push_back(parse_rat(v));
  return out;
}

}  // namespace ef1po::testing

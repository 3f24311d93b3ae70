#include "ef1po/error.hpp"
#include "ef1po/search.hpp"

#include <set>

namespace ef1po {
namespace {

using Mask = std::vector<bool>;  // agent membership, flattened per chore

Mask tight_mask(const Instance& inst, const std::vector<Rat>& wprime) {
  const std::size_t n = inst.agents();
  Mask mask(n * inst.chores(), false);
  for (Index j = 0; j < inst.chores(); ++j) {
    Rat best = wprime[0] * inst.cost(0, j);
    for (Index i = 1; i < n; ++i) best = std::min(best, wprime[i] * inst.cost(i, j));
    for (Index i = 0; i < n; ++i) mask[j * n + i] = wprime[i] * inst.cost(i, j) == best;
  }
  return mask;
}

// Empty when some chore loses every tight agent.
std::optional<Mask> intersect(const Mask& a, const Mask& b, std::size_t agents) {
  Mask out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && b[k];
  for (std::size_t start = 0; start < out.size(); start += agents) {
    bool any = false;
    for (std::size_t i = 0; i < agents; ++i) any = any || out[start + i];
    if (!any) return std::nullopt;
  }
  return out;
}

}  // namespace

std::vector<Cell> enumerate_cells(const Instance& inst, const Rat& tau, std::uint64_t budget) {
  require_admissible_tau(inst, tau);
  const std::size_t n = inst.agents();
  const auto vertices = arrangement_vertices(inst, tau, budget);
  std::vector<Mask> masks;
  masks.reserve(vertices.size());
  for (const auto& v : vertices) masks.push_back(tight_mask(inst, v));

  std::vector<Cell> cells;
  std::set<Mask> emitted;
  std::vector<std::size_t> chosen;
  std::uint64_t visited = 0;

  // On a common closed face, the tight set at a convex combination is the
  // intersection of the vertex tight sets, so the mask identifies the face.
  auto emit = [&](const Mask& mask) {
    if (!emitted.insert(mask).second) return;
    std::vector<Rat> centroid(n, Rat(0));
    for (std::size_t v : chosen) {
      for (Index i = 0; i < n; ++i) centroid[i] += vertices[v][i];
    }
    for (auto& c : centroid) c /= Rat(chosen.size());
    ShrunkWeights sw{centroid, tau};
    cells.push_back(Cell{unshrink(sw), tight_graph(inst, sw)});
  };

  auto dfs = [&](auto&& self, std::size_t from, const Mask& mask) -> void {
    emit(mask);
    if (chosen.size() == n) return;
    for (std::size_t v = from; v < vertices.size(); ++v) {
      auto next = intersect(mask, masks[v], n);
      if (!next) continue;
      if (++visited > budget) throw BudgetExceeded("cell enumeration exceeded its budget");
      chosen.push_back(v);
      self(self, v + 1, *next);
      chosen.pop_back();
    }
  };
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    chosen = {v};
    dfs(dfs, v + 1, masks[v]);
  }
  return cells;
}

}  // namespace ef1po

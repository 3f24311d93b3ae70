#include "ef1po/search.hpp"

#include "ef1po/checks.hpp"
#include "ef1po/error.hpp"
#include "ef1po/linear.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace ef1po {

bool ColorSet::all() const {
  return std::all_of(member.begin(), member.end(), [](bool b) { return b; });
}

bool ColorSet::empty() const {
  return std::none_of(member.begin(), member.end(), [](bool b) { return b; });
}

std::optional<Index> ColorSet::label(std::span<const Rat> w) const {
  for (Index i = 0; i < member.size(); ++i) {
    if (member[i] && w[i] > 0) return i;
  }
  return std::nullopt;
}

bool price_envy_free(const PriceVector& p, const Allocation& y, std::span<const Rat> alpha, Index agent) {
  std::vector<Rat> spent(y.agents(), Rat(0));
  for (Index j = 0; j < y.chores(); ++j) spent[y.owner(j)] += p[j];
  const Rat mine = spent[agent] / alpha[agent];
  for (Index k = 0; k < y.agents(); ++k) {
    if (mine > spent[k] / alpha[k]) return false;
  }
  return true;
}

ColorSet kkm_colors(const Instance& inst, const ShrunkWeights& sw, std::span<const Rat> alpha) {
  const std::size_t n = inst.agents();
  if (alpha.size() != n || sw.w.size() != n) throw InvalidInput("weights and entitlements need one entry per agent");
  const TightGraph g = tight_graph(inst, sw);
  if (!g.forest) throw InvalidInput("colors are only defined on forest tight graphs");
  ColorSet colors;
  colors.member.assign(n, false);
  colors.witness.assign(n, std::nullopt);
  enumerate_optima(g, [&](const Allocation& y) {
    std::vector<Rat> spent(n, Rat(0));
    for (Index j = 0; j < y.chores(); ++j) spent[y.owner(j)] += g.prices[j];
    Rat least = spent[0] / alpha[0];
    for (Index k = 1; k < n; ++k) least = std::min(least, spent[k] / alpha[k]);
    for (Index i = 0; i < n; ++i) {
      if (!colors.member[i] && spent[i] / alpha[i] == least) {
        colors.member[i] = true;
        colors.witness[i] = y;
      }
    }
    colors.optima.push_back(y);
    return true;
  });
  return colors;
}

ColorSet kkm_colors(const Instance& inst, std::span<const Rat> w, const Rat& tau, std::span<const Rat> alpha) {
  return kkm_colors(inst, shrink(inst, w, tau), alpha);
}

std::vector<Rat> unshrink(const ShrunkWeights& sw) {
  const Rat scale = 1 - sw.tau * Rat(sw.w.size());
  std::vector<Rat> w;
  w.reserve(sw.w.size());
  for (const auto& wi : sw.w) w.push_back((wi - sw.tau) / scale);
  return w;
}

namespace {

// One equation of the arrangement: w'_a c_aj = w'_b c_bj, or w'_a = tau
// when `chore` is empty (b is then the ground node n).
struct Equation {
  Index a;
  Index b;
  std::optional<Index> chore;
};

std::vector<Equation> arrangement_equations(const Instance& inst) {
  const std::size_t n = inst.agents();
  std::vector<Equation> eqs;
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      for (Index j = 0; j < inst.chores(); ++j) eqs.push_back({a, b, j});
    }
  }
  for (Index i = 0; i < n; ++i) eqs.push_back({i, n, std::nullopt});
  return eqs;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

// Solves the chosen forest of equations for w', or nothing when the point
// leaves the shrunk simplex or an equation is not at the per-chore minimum.
std::optional<std::vector<Rat>> solve_forest(const Instance& inst, const Rat& tau,
                                             const std::vector<Equation>& eqs,
                                             const std::vector<std::size_t>& chosen) {
  const std::size_t n = inst.agents();
  std::vector<std::vector<std::pair<Index, Index>>> adj(n);  // (neighbour, equation index)
  std::vector<bool> pinned(n, false);
  for (std::size_t e : chosen) {
    const Equation& eq = eqs[e];
    if (!eq.chore) {
      pinned[eq.a] = true;
      continue;
    }
    adj[eq.a].push_back({eq.b, e});
    adj[eq.b].push_back({eq.a, e});
  }
  std::vector<Rat> rel(n, Rat(0));
  std::vector<bool> seen(n, false);
  std::vector<Rat> value(n, Rat(0));
  std::vector<Index> free_members;
  Rat fixed_total = 0;
  for (Index root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<Index> members{root};
    seen[root] = true;
    rel[root] = 1;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const Index u = members[head];
      for (const auto& [v, e] : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        const Index j = *eqs[e].chore;
        rel[v] = rel[u] * inst.cost(u, j) / inst.cost(v, j);
        members.push_back(v);
      }
    }
    std::optional<Index> pin;
    for (Index u : members) {
      if (pinned[u]) pin = u;
    }
    if (!pin) {
      free_members = members;
      continue;
    }
    const Rat scale = tau / rel[*pin];
    for (Index u : members) {
      value[u] = rel[u] * scale;
      fixed_total += value[u];
    }
  }
  Rat free_rel = 0;
  for (Index u : free_members) free_rel += rel[u];
  if (free_members.empty() || fixed_total >= 1) return std::nullopt;
  const Rat scale = (1 - fixed_total) / free_rel;
  for (Index u : free_members) value[u] = rel[u] * scale;
  for (const auto& v : value) {
    if (v < tau) return std::nullopt;
  }
  for (std::size_t e : chosen) {
    const Equation& eq = eqs[e];
    if (!eq.chore) continue;
    const Index j = *eq.chore;
    const Rat level = value[eq.a] * inst.cost(eq.a, j);
    for (Index k = 0; k < n; ++k) {
      if (value[k] * inst.cost(k, j) < level) return std::nullopt;
    }
  }
  return value;
}

class Clock {
 public:
  explicit Clock(std::chrono::milliseconds cap) : cap_(cap), start_(std::chrono::steady_clock::now()) {}
  bool expired() const {
    return cap_.count() > 0 && std::chrono::steady_clock::now() - start_ > cap_;
  }

 private:
  std::chrono::milliseconds cap_;
  std::chrono::steady_clock::time_point start_;
};

// Grid points of the simplex with `segments` segments per edge, in the
// coordinates x_1 >= ... >= x_{n-1} of the Freudenthal triangulation.
using GridPoint = std::vector<int>;

std::vector<int> composition(const GridPoint& x, int segments) {
  const std::size_t n = x.size() + 1;
  std::vector<int> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int hi = k == 0 ? segments : x[k - 1];
    const int lo = k + 1 == n ? 0 : x[k];
    g[k] = hi - lo;
  }
  return g;
}

void grid_points(std::size_t dims, int segments, GridPoint& prefix, std::vector<GridPoint>& out) {
  if (prefix.size() == dims) {
    out.push_back(prefix);
    return;
  }
  const int top = prefix.empty() ? segments : prefix.back();
  for (int v = top; v >= 0; --v) {
    prefix.push_back(v);
    grid_points(dims, segments, prefix, out);
    prefix.pop_back();
  }
}

bool on_grid(const GridPoint& x, int segments) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int hi = k == 0 ? segments : x[k - 1];
    if (x[k] < 0 || x[k] > hi) return false;
  }
  return true;
}

class WeightSearch {
 public:
  WeightSearch(const Instance& inst, const Rat& tau, std::span<const Rat> alpha, const SearchBudget& budget)
      : inst_(inst), tau_(tau), alpha_(alpha), budget_(budget), clock_(budget.wall) {}

  std::optional<WeightSearchResult> run() {
    if (auto found = grid_stage()) return found;
    if (auto found = vertex_stage()) return found;
    if (auto found = balanced_stage()) return found;
    return mixed_stage();
  }

 private:
  bool exhausted() const { return tested_ >= budget_.max_candidates || clock_.expired(); }

  // Tests one shrunk weight vector; records the optima met on the way.
  std::optional<WeightSearchResult> test(const std::vector<Rat>& wprime, const char* stage,
                                         ColorSet* colors_out = nullptr) {
    ++tested_;
    ShrunkWeights sw{wprime, tau_};
    ColorSet colors = kkm_colors(inst_, sw, alpha_);
    for (const auto& y : colors.optima) seen_.insert(y);
    if (colors_out) *colors_out = colors;
    if (!colors.all()) return std::nullopt;
    WeightSearchResult result;
    result.shrunk = sw;
    result.w = unshrink(sw);
    for (auto& wit : colors.witness) result.witnesses.push_back(std::move(*wit));
    result.stage = stage;
    result.candidates = tested_;
    return result;
  }

  std::optional<WeightSearchResult> grid_stage() {
    const std::size_t n = inst_.agents();
    segments_ = 1 << std::min<std::size_t>(budget_.depth, 20);
    std::vector<GridPoint> points;
    GridPoint prefix;
    grid_points(n - 1, segments_, prefix, points);
    for (const auto& x : points) {
      if (exhausted()) return std::nullopt;
      const auto g = composition(x, segments_);
      std::vector<Rat> w;
      for (int gi : g) w.push_back(Rat(gi) / segments_);
      ColorSet colors;
      auto sw = shrink(inst_, w, tau_);
      if (auto found = test(sw.w, "grid", &colors)) return found;
      const auto lab = colors.label(w);
      labels_[x] = lab ? static_cast<int>(*lab) : -1;
    }
    collect_labeled_cells();
    return std::nullopt;
  }

  void collect_labeled_cells() {
    const std::size_t dims = inst_.agents() - 1;
    if (dims == 0) return;
    std::vector<std::size_t> perm(dims);
    for (const auto& [base, label] : labels_) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        GridPoint v = base;
        std::vector<int> seen_labels{label};
        std::vector<double> centroid(dims + 1, 0.0);
        bool valid = true;
        auto add = [&](const GridPoint& p) {
          const auto g = composition(p, segments_);
          for (std::size_t k = 0; k <= dims; ++k) centroid[k] += static_cast<double>(g[k]) / segments_;
        };
        add(v);
        for (std::size_t step = 0; step < dims && valid; ++step) {
          ++v[perm[step]];
          auto it = on_grid(v, segments_) ? labels_.find(v) : labels_.end();
          if (it == labels_.end()) {
            valid = false;
            break;
          }
          seen_labels.push_back(it->second);
          add(v);
        }
        if (!valid) continue;
        std::sort(seen_labels.begin(), seen_labels.end());
        bool full = seen_labels.front() >= 0 &&
                    std::adjacent_find(seen_labels.begin(), seen_labels.end()) == seen_labels.end();
        if (!full) continue;
        for (auto& c : centroid) c /= static_cast<double>(dims + 1);
        labeled_cells_.push_back(std::move(centroid));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }

  // Squared distance to the nearest fully labeled cell; ordering only.
  double guide_distance(const std::vector<Rat>& wprime) const {
    if (labeled_cells_.empty()) return 0.0;
    const double scale = (1 - tau_ * Rat(inst_.agents())).convert_to<double>();
    const double tau = tau_.convert_to<double>();
    std::vector<double> w;
    for (const auto& v : wprime) w.push_back((v.convert_to<double>() - tau) / scale);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : labeled_cells_) {
      double d = 0;
      for (std::size_t k = 0; k < w.size(); ++k) d += (w[k] - c[k]) * (w[k] - c[k]);
      best = std::min(best, d);
    }
    return best;
  }

  std::optional<WeightSearchResult> vertex_stage() {
    vertices_ = arrangement_vertices(inst_, tau_);
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t v = 0; v < vertices_.size(); ++v) order.push_back({guide_distance(vertices_[v]), v});
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [dist, v] : order) {
      if (exhausted()) return std::nullopt;
      if (auto found = test(vertices_[v], "vertex")) return found;
    }
    return std::nullopt;
  }

  std::optional<WeightSearchResult> balanced_stage() {
    const std::size_t n = inst_.agents();
    const std::vector<Allocation> pool(seen_.begin(), seen_.end());
    for (const auto& x : pool) {
      if (exhausted()) return std::nullopt;
      std::vector<Rat> wprime(n);
      Rat total = 0;
      bool usable = true;
      for (Index i = 0; i < n && usable; ++i) {
        const Rat c = bundle_cost(inst_, i, x.bundle(i));
        if (c == 0) usable = false;
        else {
          wprime[i] = alpha_[i] / c;
          total += wprime[i];
        }
      }
      if (!usable) continue;
      bool inside = true;
      for (auto& v : wprime) {
        v /= total;
        inside = inside && v >= tau_;
      }
      if (!inside) continue;
      if (auto found = test(wprime, "balanced")) return found;
    }
    return std::nullopt;
  }

  // Systems mixing price equalities p(x_a)/a_a = p(x_b)/a_b of an allocation
  // x with arrangement equations.
  std::optional<WeightSearchResult> mixed_stage() {
    const std::size_t n = inst_.agents();
    if (n < 3) return std::nullopt;
    const auto eqs = arrangement_equations(inst_);
    const std::vector<Allocation> pool(seen_.begin(), seen_.end());
    std::set<std::vector<Rat>> tried;
    for (const auto& x : pool) {
      std::vector<Rat> own(n);
      for (Index i = 0; i < n; ++i) own[i] = bundle_cost(inst_, i, x.bundle(i));
      std::vector<std::pair<Index, Index>> pairs;
      for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) pairs.push_back({a, b});
      }
      for (std::size_t k = 1; k + 1 < n; ++k) {
        std::vector<std::size_t> pick_pairs;
        std::vector<std::size_t> pick_eqs;
        std::optional<WeightSearchResult> found;
        auto rows_for = [&]() {
          std::vector<std::vector<Rat>> a;
          std::vector<Rat> b;
          for (std::size_t pi : pick_pairs) {
            auto [u, v] = pairs[pi];
            std::vector<Rat> row(n, Rat(0));
            row[u] = own[u] * alpha_[v];
            row[v] = -own[v] * alpha_[u];
            a.push_back(std::move(row));
            b.push_back(0);
          }
          for (std::size_t e : pick_eqs) {
            std::vector<Rat> row(n, Rat(0));
            if (eqs[e].chore) {
              row[eqs[e].a] = inst_.cost(eqs[e].a, *eqs[e].chore);
              row[eqs[e].b] = -inst_.cost(eqs[e].b, *eqs[e].chore);
              b.push_back(0);
            } else {
              row[eqs[e].a] = 1;
              b.push_back(tau_);
            }
            a.push_back(std::move(row));
          }
          a.push_back(std::vector<Rat>(n, Rat(1)));
          b.push_back(1);
          return std::make_pair(std::move(a), std::move(b));
        };
        auto try_system = [&]() -> bool {
          if (exhausted()) return true;
          auto [a, b] = rows_for();
          auto sol = solve_linear(std::move(a), std::move(b));
          if (!sol) return false;
          for (const auto& v : *sol) {
            if (v < tau_) return false;
          }
          if (!tried.insert(*sol).second) return false;
          found = test(*sol, "mixed");
          return found.has_value();
        };
        auto choose_eqs = [&](auto&& self, std::size_t from) -> bool {
          if (pick_eqs.size() + k + 1 == n) return try_system();
          for (std::size_t e = from; e < eqs.size(); ++e) {
            pick_eqs.push_back(e);
            const bool stop = self(self, e + 1);
            pick_eqs.pop_back();
            if (stop) return true;
          }
          return false;
        };
        auto choose_pairs = [&](auto&& self, std::size_t from) -> bool {
          if (pick_pairs.size() == k) return choose_eqs(choose_eqs, 0);
          for (std::size_t p = from; p < pairs.size(); ++p) {
            pick_pairs.push_back(p);
            const bool stop = self(self, p + 1);
            pick_pairs.pop_back();
            if (stop) return true;
          }
          return false;
        };
        choose_pairs(choose_pairs, 0);
        if (found) return found;
        if (exhausted()) return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const Instance& inst_;
  Rat tau_;
  std::span<const Rat> alpha_;
  SearchBudget budget_;
  Clock clock_;
  std::uint64_t tested_ = 0;
  int segments_ = 1;
  std::map<GridPoint, int> labels_;
  std::vector<std::vector<double>> labeled_cells_;
  std::vector<std::vector<Rat>> vertices_;
  std::set<Allocation> seen_;
};

}  // namespace

std::vector<std::vector<Rat>> arrangement_vertices(const Instance& inst, const Rat& tau, std::uint64_t budget) {
  inst.require_positive();
  const std::size_t n = inst.agents();
  const auto eqs = arrangement_equations(inst);
  std::vector<std::vector<Rat>> out;
  std::set<std::vector<Rat>> seen;
  std::vector<std::size_t> chosen;
  std::uint64_t visited = 0;

  auto dfs = [&](auto&& self, std::size_t from, std::vector<std::size_t> parent) -> void {
    if (chosen.size() + 1 == n) {
      if (++visited > budget) throw BudgetExceeded("arrangement vertex enumeration exceeded its budget");
      auto point = solve_forest(inst, tau, eqs, chosen);
      if (point && seen.insert(*point).second) out.push_back(std::move(*point));
      return;
    }
    for (std::size_t e = from; e < eqs.size(); ++e) {
      // Skip equations closing a cycle; they are dependent or inconsistent.
      std::vector<std::size_t> next = parent;
      const std::size_t ra = find_root(next, eqs[e].a);
      const std::size_t rb = find_root(next, eqs[e].b);
      if (ra == rb) continue;
      next[ra] = rb;
      chosen.push_back(e);
      self(self, e + 1, std::move(next));
      chosen.pop_back();
    }
  };
  std::vector<std::size_t> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  dfs(dfs, 0, parent);
  return out;
}

std::optional<WeightSearchResult> find_weights(const Instance& inst, const Rat& tau, std::span<const Rat> alpha,
                                               const SearchBudget& budget) {
  inst.require_positive();
  require_admissible_tau(inst, tau);
  if (alpha.size() != inst.agents()) throw InvalidInput("entitlements must have one entry per agent");
  return WeightSearch(inst, tau, alpha, budget).run();
}

Allocation solve_bruteforce(const Instance& inst, std::uint64_t budget) {
  inst.require_positive();
  const std::size_t n = inst.agents();
  const std::size_t m = inst.chores();
  if (allocation_count(n, m) > budget) {
    throw BudgetExceeded("brute-force solve needs " + std::to_string(n) + "^" + std::to_string(m) +
                         " allocations, above the budget of " + std::to_string(budget));
  }
  std::vector<Index> owner(m, 0);
  while (true) {
    const Allocation x = Allocation::from_owners(n, owner);
    if (check_wef1(inst, x) && check_fpo(inst, x)) return x;
    std::size_t j = m;
    while (j > 0 && owner[j - 1] + 1 == n) owner[--j] = 0;
    if (j == 0) break;
    ++owner[j - 1];
  }
  throw InvariantViolation("no allocation is both weighted EF1 and fPO");
}

}  // namespace ef1po

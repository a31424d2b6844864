#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <vector>

#include "mwm/contracted.hpp"
#include "mwm/graph.hpp"

namespace mwm {

struct OracleResult {
  Weight opt = 0;
  std::vector<EdgeId> matching;
  const char* method = "subset-dp";
};

// Exact maximum weight matching by dynamic programming over vertex subsets.
inline OracleResult exact_mwm(const WeightedGraph& g) {
  MWM_REQUIRE(g.n() <= 22, "exact_mwm oracle is capped at n <= 22");
  int n = g.n();
  size_t size = size_t{1} << n;
  std::vector<Weight> best(size, 0);
  std::vector<int> choice(size, -1);  // edge picked for the lowest vertex, or -1
  for (size_t s = 1; s < size; ++s) {
    int v = std::countr_zero(s);
    size_t rest = s & (s - 1);  // s without v
    best[s] = best[rest];
    choice[s] = -1;
    for (EdgeId e : g.incident(v)) {
      VertexId u = g.edge(e).other(v);
      if (!(s >> u & 1)) continue;
      Weight cand = g.edge(e).w + best[rest & ~(size_t{1} << u)];
      if (cand > best[s]) {
        best[s] = cand;
        choice[s] = e;
      }
    }
  }
  OracleResult res;
  res.opt = best[size - 1];
  size_t s = size - 1;
  while (s) {
    int v = std::countr_zero(s);
    if (choice[s] == -1) {
      s &= s - 1;
    } else {
      EdgeId e = choice[s];
      res.matching.push_back(e);
      VertexId u = g.edge(e).other(v);
      s &= s - 1;
      s &= ~(size_t{1} << u);
    }
  }
  return res;
}

// Independent cross-check oracle: branch and bound over edges sorted by weight.
inline Weight exact_mwm_branch_bound(const WeightedGraph& g) {
  std::vector<EdgeId> order(g.m());
  for (int i = 0; i < g.m(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return g.edge(a).w != g.edge(b).w ? g.edge(a).w > g.edge(b).w : a < b;
  });
  std::vector<Weight> suffix_best(g.m() + 1, 0);  // upper bound: sum of top weights left
  for (int i = g.m() - 1; i >= 0; --i) suffix_best[i] = suffix_best[i + 1] + g.edge(order[i]).w;
  std::vector<char> used(g.n(), 0);
  Weight best = 0;
  std::function<void(int, Weight)> go = [&](int idx, Weight acc) {
    best = std::max(best, acc);
    if (idx >= g.m() || acc + suffix_best[idx] <= best) return;
    const Edge& e = g.edge(order[idx]);
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      go(idx + 1, acc + e.w);
      used[e.u] = used[e.v] = 0;
    }
    go(idx + 1, acc);
  };
  go(0, 0);
  return best;
}

// Exhaustive check for an augmenting path of matched-edge count <= bound in a
// plain graph. DFS over simple alternating paths from every free vertex.
inline bool short_aug_path_exists(const WeightedGraph& g, const Matching& m, Weight bound) {
  std::vector<char> used(g.n(), 0);
  std::function<bool(VertexId, Weight)> from_outer = [&](VertexId v, Weight matched_used) -> bool {
    // v is "outer": the path so far ends at v expecting an unmatched edge next.
    for (EdgeId e : g.incident(v)) {
      if (m.contains(e)) continue;
      VertexId x = g.edge(e).other(v);
      if (used[x]) continue;
      if (m.is_free(x)) return true;  // augmenting
      EdgeId me = m.matched_edge_at(x);
      VertexId y = g.edge(me).other(x);
      if (used[y]) continue;
      if (matched_used + 1 > bound) continue;
      used[x] = used[y] = 1;
      if (from_outer(y, matched_used + 1)) return true;
      used[x] = used[y] = 0;
    }
    return false;
  };
  for (VertexId f = 0; f < g.n(); ++f) {
    if (!m.is_free(f)) continue;
    std::fill(used.begin(), used.end(), 0);
    used[f] = 1;
    if (from_outer(f, 0)) return true;
  }
  return false;
}

// Exhaustive check for an augmenting path of matching length <= bound in a
// contracted view (weighted ||.||_M semantics, including endpoint weights).
inline bool short_aug_path_exists(const ContractedView& view, Weight bound) {
  int n = view.n();
  std::vector<char> used(n, 0);
  auto vnorm = [&](SuperId s) { return (view.vertex(s).norm - 1) / 2; };
  std::function<bool(SuperId, Weight)> from_outer = [&](SuperId v, Weight cost) -> bool {
    for (int ei : view.incident(v)) {
      const SuperEdge& se = view.edge(ei);
      if (se.matched) continue;
      SuperId x = se.other(v);
      if (used[x]) continue;
      if (view.vertex(x).free) {
        if (cost + vnorm(x) <= bound) return true;
        continue;
      }
      int me = view.matched_at(x);
      if (me < 0) continue;  // matched outside the view; dead end
      SuperId y = view.edge(me).other(x);
      if (used[y]) continue;
      Weight ncost = cost + vnorm(x) + 1 + vnorm(y);
      if (ncost > bound) continue;
      used[x] = used[y] = 1;
      if (from_outer(y, ncost)) return true;
      used[x] = used[y] = 0;
    }
    return false;
  };
  for (SuperId f = 0; f < n; ++f) {
    if (!view.vertex(f).free) continue;
    std::fill(used.begin(), used.end(), 0);
    used[f] = 1;
    if (from_outer(f, vnorm(f))) return true;
  }
  return false;
}

// Like the bounded check, but returns one augmenting path (lexicographically
// first in DFS order) when it exists.
inline std::optional<SuperPath> find_short_aug_path(const ContractedView& view, Weight bound) {
  int n = view.n();
  std::vector<char> used(n, 0);
  std::vector<int> edges;
  auto vnorm = [&](SuperId s) { return (view.vertex(s).norm - 1) / 2; };
  std::function<bool(SuperId, Weight)> from_outer = [&](SuperId v, Weight cost) -> bool {
    for (int ei : view.incident(v)) {
      const SuperEdge& se = view.edge(ei);
      if (se.matched) continue;
      SuperId x = se.other(v);
      if (used[x]) continue;
      if (view.vertex(x).free) {
        if (cost + vnorm(x) <= bound) {
          edges.push_back(ei);
          return true;
        }
        continue;
      }
      int me = view.matched_at(x);
      if (me < 0) continue;
      SuperId y = view.edge(me).other(x);
      if (used[y]) continue;
      Weight ncost = cost + vnorm(x) + 1 + vnorm(y);
      if (ncost > bound) continue;
      used[x] = used[y] = 1;
      edges.push_back(ei);
      edges.push_back(me);
      if (from_outer(y, ncost)) return true;
      edges.pop_back();
      edges.pop_back();
      used[x] = used[y] = 0;
    }
    return false;
  };
  for (SuperId f = 0; f < n; ++f) {
    if (!view.vertex(f).free) continue;
    std::fill(used.begin(), used.end(), 0);
    edges.clear();
    used[f] = 1;
    if (from_outer(f, vnorm(f))) return SuperPath{f, edges};
  }
  return std::nullopt;
}

// Any augmenting path at all (no length bound) in a contracted view.
inline bool aug_path_exists(const ContractedView& view) {
  Weight total = view.total_norm() + 1;
  return short_aug_path_exists(view, total);
}

// Alternating BFS over the view from its free vertices; returns outer/inner marks.
struct ReachMarks {
  std::vector<char> outer;
  std::vector<char> inner;
};

inline ReachMarks alternating_reach(const ContractedView& view) {
  int n = view.n();
  ReachMarks marks{std::vector<char>(n, 0), std::vector<char>(n, 0)};
  std::vector<SuperId> queue;
  for (SuperId s = 0; s < n; ++s)
    if (view.vertex(s).free) {
      marks.outer[s] = 1;
      queue.push_back(s);
    }
  // queue holds newly-outer vertices; expand outer -(unmatched)-> inner -(matched)-> outer
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    SuperId v = queue[qi];
    for (int ei : view.incident(v)) {
      const SuperEdge& se = view.edge(ei);
      if (se.matched) continue;
      SuperId x = se.other(v);
      if (marks.inner[x]) continue;
      marks.inner[x] = 1;
      int me = view.matched_at(x);
      if (me < 0) continue;
      SuperId y = view.edge(me).other(x);
      if (!marks.outer[y]) {
        marks.outer[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return marks;
}

// True iff an alternating search from some free vertex can reach a full blossom.
// Exhaustive: a blossom is reachable from f exactly when some vertex can be
// reached from f at both parities along simple alternating paths (bipartite
// graphs never trigger this). Intended for small instances.
inline bool reachable_full_blossom_exists(const ContractedView& view) {
  int n = view.n();
  std::vector<char> used(n, 0);
  std::vector<std::array<char, 2>> seen(n);  // [inner, outer] reached from this source
  bool found = false;
  std::function<void(SuperId)> from_outer = [&](SuperId v) {
    if (found) return;
    for (int ei : view.incident(v)) {
      const SuperEdge& se = view.edge(ei);
      if (se.matched) continue;
      SuperId x = se.other(v);
      if (used[x]) continue;
      seen[x][0] = 1;
      if (seen[x][1]) {
        found = true;
        return;
      }
      int me = view.matched_at(x);
      if (me < 0) continue;  // free or matched-outside vertices end the walk
      SuperId y = view.edge(me).other(x);
      if (used[y]) continue;
      seen[y][1] = 1;
      if (seen[y][0]) {
        found = true;
        return;
      }
      used[x] = used[y] = 1;
      from_outer(y);
      used[x] = used[y] = 0;
      if (found) return;
    }
  };
  for (SuperId f = 0; f < n && !found; ++f) {
    if (!view.vertex(f).free) continue;
    for (auto& s : seen) s = {0, 0};
    std::fill(used.begin(), used.end(), 0);
    used[f] = 1;
    seen[f][1] = 1;
    from_outer(f);
  }
  return found;
}

}  // namespace mwm

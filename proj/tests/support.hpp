#pragma once

// Shared instance builders and independent mini-oracles for the test suite.

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "mwm/blossom.hpp"
#include "mwm/contracted.hpp"
#include "mwm/core.hpp"
#include "mwm/graph.hpp"

namespace testsupport {

using namespace mwm;

struct EdgeSpec {
  int u, v;
  Weight w = 1;
};

inline WeightedGraph build(int n, const std::vector<EdgeSpec>& edges) {
  WeightedGraph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.w);
  return g;
}

inline Matching match(const WeightedGraph& g, const std::vector<EdgeId>& ids) {
  Matching m(g);
  for (EdgeId e : ids) m.add(g, e);
  return m;
}

inline WeightedGraph random_graph(Rng& rng, int n, int p_num, int p_den, Weight wmax) {
  WeightedGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p_num, p_den)) g.add_edge(u, v, rng.range(1, wmax));
  return g;
}

inline Matching random_matching(Rng& rng, const WeightedGraph& g) {
  Matching m(g);
  std::vector<EdgeId> order(g.m());
  for (int i = 0; i < g.m(); ++i) order[i] = i;
  for (int i = g.m() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  for (EdgeId e : order) {
    const Edge& ed = g.edge(e);
    if (m.is_free(ed.u) && m.is_free(ed.v) && rng.chance(2, 3)) m.add(g, e);
  }
  return m;
}

// A graph composed of full blossoms (odd alternating cycles, possibly nested),
// matched pairs, free vertices and random connecting edges, together with the
// matching and the blossom forest. Used for property tests over G/Omega.
struct BlossomInstance {
  WeightedGraph graph;
  Matching matching;
  BlossomForest forest;
};

inline BlossomInstance make_blossom_instance(Rng& rng, int flowers = 2, int pairs = 2,
                                             int frees = 2, int extra_edges = 6,
                                             Weight wmax = 1) {
  // vertex budget: flowers up to 7 vertices each (nested), pairs 2, frees 1
  std::vector<EdgeSpec> edges;
  int n = 0;
  struct Flower {
    std::vector<int> verts;
    int kind;  // 0 = C3, 1 = C5, 2 = nested C3-in-C5 shape
  };
  std::vector<Flower> fl;
  for (int i = 0; i < flowers; ++i) {
    int kind = static_cast<int>(rng.below(3));
    int size = kind == 0 ? 3 : kind == 1 ? 5 : 7;
    Flower f;
    f.kind = kind;
    for (int j = 0; j < size; ++j) f.verts.push_back(n + j);
    n += size;
    fl.push_back(f);
  }
  std::vector<std::pair<int, int>> matched_pairs;
  for (int i = 0; i < pairs; ++i) {
    matched_pairs.push_back({n, n + 1});
    n += 2;
  }
  std::vector<int> free_verts;
  for (int i = 0; i < frees; ++i) free_verts.push_back(n++);

  WeightedGraph g(n);
  Matching m;
  BlossomForest forest(n);
  std::vector<EdgeId> to_match;

  struct PendingBlossom {
    std::vector<BlossomChild> children;
    std::vector<EdgeId> cycle;
    VertexId base;
  };
  std::vector<PendingBlossom> pend;
  std::vector<PendingBlossom> pend_outer;

  for (const Flower& f : fl) {
    const auto& v = f.verts;
    if (f.kind == 0 || f.kind == 1) {
      int k = static_cast<int>(v.size());
      std::vector<EdgeId> cyc;
      for (int j = 0; j < k; ++j) {
        EdgeId e = g.add_edge(v[j], v[(j + 1) % k], rng.range(1, wmax));
        cyc.push_back(e);
        if (j % 2 == 1) to_match.push_back(e);
      }
      PendingBlossom pb;
      for (int j = 0; j < k; ++j) pb.children.push_back(BlossomChild::of_vertex(v[j]));
      pb.cycle = cyc;
      pb.base = v[0];
      pend.push_back(pb);
    } else {
      // inner triangle v0 v1 v2 (base v0), then outer cycle [inner, v3, v4, v5, v6]
      EdgeId i0 = g.add_edge(v[0], v[1], rng.range(1, wmax));
      EdgeId i1 = g.add_edge(v[1], v[2], rng.range(1, wmax));
      EdgeId i2 = g.add_edge(v[2], v[0], rng.range(1, wmax));
      to_match.push_back(i1);
      PendingBlossom inner;
      inner.children = {BlossomChild::of_vertex(v[0]), BlossomChild::of_vertex(v[1]),
                        BlossomChild::of_vertex(v[2])};
      inner.cycle = {i0, i1, i2};
      inner.base = v[0];
      pend.push_back(inner);
      // outer cycle edges: inner(v1) - v3 (unm), v3 = v4, v4 - v5 (unm), v5 = v6, v6 - v0 (unm)
      EdgeId o0 = g.add_edge(v[1], v[3], rng.range(1, wmax));
      EdgeId o1 = g.add_edge(v[3], v[4], rng.range(1, wmax));
      EdgeId o2 = g.add_edge(v[4], v[5], rng.range(1, wmax));
      EdgeId o3 = g.add_edge(v[5], v[6], rng.range(1, wmax));
      EdgeId o4 = g.add_edge(v[6], v[0], rng.range(1, wmax));
      to_match.push_back(o1);
      to_match.push_back(o3);
      PendingBlossom outer;
      outer.children = {BlossomChild(), BlossomChild::of_vertex(v[3]),
                        BlossomChild::of_vertex(v[4]), BlossomChild::of_vertex(v[5]),
                        BlossomChild::of_vertex(v[6])};
      outer.cycle = {o0, o1, o2, o3, o4};
      outer.base = v[0];
      pend_outer.push_back(outer);
    }
  }
  for (auto [a, b] : matched_pairs) to_match.push_back(g.add_edge(a, b, rng.range(1, wmax)));

  // sprinkle extra unmatched edges
  for (int i = 0; i < extra_edges; ++i) {
    int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n));
    if (a == b || g.has_edge(a, b)) continue;
    g.add_edge(a, b, rng.range(1, wmax));
  }

  m = Matching(g);
  for (EdgeId e : to_match) m.add(g, e);

  // register blossoms: plain ones first, then nested outers referencing them
  std::vector<BlossomId> created;
  for (const auto& pb : pend) created.push_back(forest.add_blossom(pb.children, pb.cycle, pb.base));
  for (auto pb : pend_outer) {
    // the placeholder first child is the inner triangle of the same flower,
    // identified by its base vertex
    BlossomId inner = kNoBlossom;
    for (BlossomId b : created)
      if (forest.is_root(b) && forest.blossom(b).base == pb.base) inner = b;
    MWM_CHECK(inner != kNoBlossom, "test builder: inner blossom not found");
    pb.children[0] = BlossomChild::of_blossom(inner);
    forest.add_blossom(pb.children, pb.cycle, pb.base);
  }

  BlossomInstance inst{std::move(g), std::move(m), std::move(forest)};
  return inst;
}

// Independent contraction oracle: quotient graph as plain sets.
struct NaiveQuotient {
  std::vector<std::vector<int>> groups;          // vertex sets per super id
  std::set<std::pair<int, int>> edges;           // super pairs (a < b)
  std::set<std::pair<int, int>> matched_edges;   // super pairs with a matched G-edge
};

inline NaiveQuotient naive_contract(const WeightedGraph& g, const Matching& m,
                                    const BlossomForest& forest) {
  NaiveQuotient q;
  std::map<int, int> key_to_group;  // root blossom id or -(v+1) for bare vertices
  std::vector<int> super_of(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    BlossomId r = forest.root_of(v);
    int key = r == kNoBlossom ? -(v + 1) : r;
    auto [it, fresh] = key_to_group.try_emplace(key, static_cast<int>(q.groups.size()));
    if (fresh) q.groups.push_back({});
    q.groups[it->second].push_back(v);
    super_of[v] = it->second;
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    int a = super_of[g.edge(e).u], b = super_of[g.edge(e).v];
    if (a == b) continue;
    auto key = std::minmax(a, b);
    q.edges.insert(key);
    if (m.contains(e)) q.matched_edges.insert(key);
  }
  return q;
}

}  // namespace testsupport

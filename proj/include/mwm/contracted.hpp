#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "mwm/blossom.hpp"
#include "mwm/graph.hpp"

namespace mwm {

using SuperId = int;
constexpr SuperId kNoSuper = -1;

struct SuperVertex {
  SuperId id = kNoSuper;
  BlossomId blossom = kNoBlossom;  // kNoBlossom for a bare vertex
  VertexId single = kNoVertex;     // the vertex, when bare
  Weight norm = 1;                 // ||v|| = number of G-vertices represented
  bool free = false;
  VertexId free_vertex = kNoVertex;  // the unique free G-vertex when free
  VertexId base = kNoVertex;         // base vertex (the bare vertex itself if trivial)
};

struct SuperEdge {
  SuperId a = kNoSuper;
  SuperId b = kNoSuper;
  bool matched = false;              // carries the (unique) matched G-edge of the pair
  EdgeId rep_matched = kNoEdge;      // representative matched G-edge, if any
  EdgeId rep_unmatched = kNoEdge;    // lexicographically least unmatched G-edge, if any

  SuperId other(SuperId x) const { return x == a ? b : a; }
};

// G/Omega: the root blossoms of a laminar full family contracted to weighted
// super-vertices, parallel edges collapsed with role representatives.
class ContractedView {
 public:
  int n() const { return static_cast<int>(verts_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }
  const SuperVertex& vertex(SuperId s) const { return verts_[s]; }
  const SuperEdge& edge(int i) const { return edges_[i]; }
  const std::vector<SuperVertex>& vertices() const { return verts_; }
  const std::vector<SuperEdge>& edges() const { return edges_; }
  const std::vector<int>& incident(SuperId s) const { return adj_[s]; }
  SuperId super_of(VertexId v) const { return vertex_to_super_[v]; }
  // Matched super-edge index at s, or -1.
  int matched_at(SuperId s) const { return matched_at_[s]; }

  Weight total_norm() const {
    Weight t = 0;
    for (const auto& sv : verts_) t += sv.norm;
    return t;
  }

  friend ContractedView contract(const WeightedGraph&, const Matching&, const BlossomForest&,
                                 const std::function<bool(EdgeId)>&);

 private:
  std::vector<SuperVertex> verts_;
  std::vector<SuperEdge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<SuperId> vertex_to_super_;
  std::vector<int> matched_at_;
};

// Contracts G by the root blossoms of `forest`, keeping only edges passing
// `edge_filter` (plus checking structural invariants). M/Omega must be a matching.
inline ContractedView contract(
    const WeightedGraph& g, const Matching& m, const BlossomForest& forest,
    const std::function<bool(EdgeId)>& edge_filter = {}) {
  {
    auto violations = validate_laminar_full(g, m, forest);
    if (!violations.empty())
      throw StructuralError("contract: invalid blossom forest: " + violations.front());
  }
  ContractedView view;
  view.vertex_to_super_.assign(g.n(), kNoSuper);

  // Super-vertices: one per live root, one per bare vertex.
  std::vector<char> root_done(forest.total_count(), 0);
  for (VertexId v = 0; v < g.n(); ++v) {
    BlossomId r = forest.root_of(v);
    if (r == kNoBlossom) {
      SuperId s = static_cast<SuperId>(view.verts_.size());
      SuperVertex sv;
      sv.id = s;
      sv.single = v;
      sv.norm = 1;
      sv.free = m.is_free(v);
      sv.free_vertex = sv.free ? v : kNoVertex;
      sv.base = v;
      view.verts_.push_back(sv);
      view.vertex_to_super_[v] = s;
    } else if (!root_done[r]) {
      root_done[r] = 1;
      SuperId s = static_cast<SuperId>(view.verts_.size());
      SuperVertex sv;
      sv.id = s;
      sv.blossom = r;
      sv.norm = static_cast<Weight>(forest.vertices_of(r).size());
      sv.base = forest.blossom(r).base;
      sv.free = m.is_free(sv.base);
      sv.free_vertex = sv.free ? sv.base : kNoVertex;
      view.verts_.push_back(sv);
      for (VertexId u : forest.vertices_of(r)) view.vertex_to_super_[u] = s;
    }
  }

  // Super-edges, deduplicated per root pair.
  std::map<std::pair<SuperId, SuperId>, int> index;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    SuperId a = view.vertex_to_super_[ed.u];
    SuperId b = view.vertex_to_super_[ed.v];
    if (a == b) continue;
    if (edge_filter && !edge_filter(e)) continue;
    auto key = std::minmax(a, b);
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(view.edges_.size()));
    if (inserted) view.edges_.push_back(SuperEdge{key.first, key.second, false, kNoEdge, kNoEdge});
    SuperEdge& se = view.edges_[it->second];
    if (m.contains(e)) {
      MWM_CHECK(se.rep_matched == kNoEdge, "two matched G-edges between one root pair");
      se.rep_matched = e;
      se.matched = true;
    } else if (se.rep_unmatched == kNoEdge) {
      se.rep_unmatched = e;
    } else {
      // keep the (u, v, id)-lexicographically least representative
      const Edge& cur = g.edge(se.rep_unmatched);
      auto keyof = [](const Edge& x, EdgeId id) {
        auto [lo, hi] = std::minmax(x.u, x.v);
        return std::make_tuple(lo, hi, id);
      };
      if (keyof(ed, e) < keyof(cur, se.rep_unmatched)) se.rep_unmatched = e;
    }
  }

  view.adj_.assign(view.verts_.size(), {});
  view.matched_at_.assign(view.verts_.size(), -1);
  for (int i = 0; i < static_cast<int>(view.edges_.size()); ++i) {
    const SuperEdge& se = view.edges_[i];
    view.adj_[se.a].push_back(i);
    view.adj_[se.b].push_back(i);
    if (se.matched) {
      MWM_CHECK(view.matched_at_[se.a] == -1 && view.matched_at_[se.b] == -1,
                "M/Omega is not a matching");
      view.matched_at_[se.a] = i;
      view.matched_at_[se.b] = i;
    }
  }
  return view;
}

// Alternating path in a contracted view, as super-edge indices from a start super-vertex.
struct SuperPath {
  SuperId start = kNoSuper;
  std::vector<int> edges;  // indices into view.edges()
};

inline Weight super_edge_norm(const ContractedView& view, int edge_index) {
  const SuperEdge& se = view.edge(edge_index);
  MWM_CHECK(se.matched, "||e||_M is defined for matched super-edges");
  return (view.vertex(se.a).norm + view.vertex(se.b).norm) / 2;
}

// ||P||_M = |P cap M~| + sum over traversed super-vertices of (||u||-1)/2.
inline Weight matching_length(const ContractedView& view, const SuperPath& path) {
  Weight len = 0;
  SuperId at = path.start;
  len += (view.vertex(at).norm - 1) / 2;
  for (int ei : path.edges) {
    const SuperEdge& se = view.edge(ei);
    MWM_CHECK(se.a == at || se.b == at, "path edge does not continue from current vertex");
    if (se.matched) ++len;
    at = se.other(at);
    len += (view.vertex(at).norm - 1) / 2;
  }
  return len;
}

// Lifts an augmenting path in G/Omega to an augmenting path in G, crossing each
// blossom by its internal even alternating route so blossoms stay full after
// augmentation.
inline AlternatingPath lift_augmenting_path(const WeightedGraph& g, const Matching& m,
                                            const BlossomForest& forest,
                                            const ContractedView& view, const SuperPath& sp) {
  MWM_REQUIRE(!sp.edges.empty(), "augmenting path needs at least one edge");
  MWM_REQUIRE(view.vertex(sp.start).free, "augmenting path must start at a free super-vertex");

  AlternatingPath out;
  // Walk super-edges; inside each super-vertex, connect the G-level entry point
  // to the G-level exit point. Internal blossom routes have even length, so the
  // role of each super-edge equals the parity expected on entry.
  SuperId at = sp.start;
  VertexId g_at = view.vertex(at).free_vertex;  // free super: entry point is its free vertex
  out.start = g_at;
  bool need_matched = false;  // parity of the next G-edge to append
  for (size_t step = 0; step < sp.edges.size(); ++step) {
    const SuperEdge& se = view.edge(sp.edges[step]);
    MWM_CHECK(se.a == at || se.b == at, "super path is not contiguous");
    MWM_CHECK(se.matched == need_matched, "super path does not alternate");
    EdgeId rep = se.matched ? se.rep_matched : se.rep_unmatched;
    MWM_CHECK(rep != kNoEdge, "super edge lacks a representative for its role");
    const Edge& re = g.edge(rep);
    SuperId nxt = se.other(at);
    VertexId exit_vertex = view.super_of(re.u) == at ? re.u : re.v;
    VertexId entry_next = re.other(exit_vertex);

    if (g_at != exit_vertex) {
      BlossomId blossom = view.vertex(at).blossom;
      MWM_CHECK(blossom != kNoBlossom, "distinct entry/exit inside a bare vertex");
      VertexId base = forest.blossom(blossom).base;
      std::vector<EdgeId> seg;
      if (need_matched) {
        // entered off-base via an unmatched edge; leave via the base's matched edge
        MWM_CHECK(exit_vertex == base, "matched super-edge must attach at the blossom base");
        blossom_route_to_base(g, m, forest, blossom, g_at, seg);
      } else {
        // at the base (matched arrival or free start); leave via an unmatched edge
        MWM_CHECK(g_at == base, "unmatched exit requires standing at the base");
        blossom_route_to_base(g, m, forest, blossom, exit_vertex, seg);
        std::reverse(seg.begin(), seg.end());
      }
      out.edges.insert(out.edges.end(), seg.begin(), seg.end());
    }
    out.edges.push_back(rep);
    need_matched = !se.matched;
    at = nxt;
    g_at = entry_next;
  }
  // Last super-vertex: route from the entry point to its free vertex.
  const SuperVertex& last = view.vertex(at);
  MWM_CHECK(last.free, "augmenting path must end at a free super-vertex");
  MWM_CHECK(need_matched, "augmenting path must end with an unmatched edge");
  if (g_at != last.free_vertex) {
    std::vector<EdgeId> seg;
    MWM_CHECK(last.blossom != kNoBlossom, "distinct entry/free vertex inside a bare vertex");
    blossom_route_to_base(g, m, forest, last.blossom, g_at, seg);
    out.edges.insert(out.edges.end(), seg.begin(), seg.end());
  }
  MWM_CHECK(is_augmenting_path(g, m, out), "lifted path is not augmenting");
  return out;
}

// Flips an augmenting path and restores blossom bases along it.
inline void augment(const WeightedGraph& g, Matching& m, BlossomForest& forest,
                    const AlternatingPath& path) {
  MWM_REQUIRE(is_augmenting_path(g, m, path), "augment requires an augmenting path");
  std::vector<EdgeId> to_add, to_remove;
  bool expect_matched = false;
  for (EdgeId e : path.edges) {
    (m.contains(e) ? to_remove : to_add).push_back(e);
    expect_matched = !expect_matched;
  }
  for (EdgeId e : to_remove) m.remove(g, e);
  for (EdgeId e : to_add) m.add(g, e);
  // Bases of touched root blossoms may have moved.
  std::vector<char> done(forest.total_count(), 0);
  VertexId at = path.start;
  auto touch = [&](VertexId v) {
    BlossomId r = forest.root_of(v);
    if (r != kNoBlossom && !done[r]) {
      done[r] = 1;
      recompute_bases(g, m, forest, r);
    }
  };
  touch(at);
  for (EdgeId e : path.edges) {
    at = g.edge(e).other(at);
    touch(at);
  }
}

}  // namespace mwm

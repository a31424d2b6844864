#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "mwm/core.hpp"

namespace mwm {

struct Edge {
  VertexId u = kNoVertex;
  VertexId v = kNoVertex;
  Weight w = 1;  // original integer weight, 1..W

  VertexId other(VertexId x) const { return x == u ? v : u; }
  bool touches(VertexId x) const { return x == u || x == v; }
};

// Simple undirected graph with positive integer edge weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n) : n_(n), adj_(n) {}

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }

  EdgeId add_edge(VertexId u, VertexId v, Weight w) {
    MWM_REQUIRE(u >= 0 && u < n_ && v >= 0 && v < n_, "edge endpoint out of range");
    MWM_REQUIRE(u != v, "self-loops not allowed");
    MWM_REQUIRE(w >= 1, "edge weight must be positive");
    auto key = std::minmax(u, v);
    MWM_REQUIRE(pairs_.insert(key).second, "parallel edge not allowed");
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{u, v, w});
    adj_[u].push_back(id);
    adj_[v].push_back(id);
    return id;
  }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& incident(VertexId v) const { return adj_[v]; }

  bool has_edge(VertexId u, VertexId v) const {
    return pairs_.count(std::minmax(u, v)) > 0;
  }
  EdgeId find_edge(VertexId u, VertexId v) const {
    for (EdgeId e : adj_[u])
      if (edges_[e].touches(v)) return e;
    return kNoEdge;
  }

  Weight max_weight() const {
    Weight w = 0;
    for (const Edge& e : edges_) w = std::max(w, e.w);
    return w;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adj_;
  std::set<std::pair<VertexId, VertexId>> pairs_;
};

// Matching as an edge set plus per-vertex mate lookup.
class Matching {
 public:
  Matching() = default;
  explicit Matching(const WeightedGraph& g)
      : in_matching_(g.m(), false), mate_edge_(g.n(), kNoEdge) {}

  bool contains(EdgeId e) const { return in_matching_[e]; }
  // Edge id of the matched edge at v, or kNoEdge.
  EdgeId matched_edge_at(VertexId v) const { return mate_edge_[v]; }
  bool is_free(VertexId v) const { return mate_edge_[v] == kNoEdge; }

  VertexId mate(const WeightedGraph& g, VertexId v) const {
    EdgeId e = mate_edge_[v];
    return e == kNoEdge ? kNoVertex : g.edge(e).other(v);
  }

  void add(const WeightedGraph& g, EdgeId e) {
    const Edge& ed = g.edge(e);
    MWM_REQUIRE(!in_matching_[e], "edge already matched");
    MWM_REQUIRE(is_free(ed.u) && is_free(ed.v), "matched edges must not share endpoints");
    in_matching_[e] = true;
    mate_edge_[ed.u] = e;
    mate_edge_[ed.v] = e;
    ++size_;
  }

  void remove(const WeightedGraph& g, EdgeId e) {
    const Edge& ed = g.edge(e);
    MWM_REQUIRE(in_matching_[e], "edge not matched");
    in_matching_[e] = false;
    mate_edge_[ed.u] = kNoEdge;
    mate_edge_[ed.v] = kNoEdge;
    --size_;
  }

  int size() const { return size_; }

  Weight weight(const WeightedGraph& g) const {
    Weight total = 0;
    for (EdgeId e = 0; e < g.m(); ++e)
      if (in_matching_[e]) total += g.edge(e).w;
    return total;
  }

  std::vector<EdgeId> edge_ids(const WeightedGraph& g) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.m(); ++e)
      if (in_matching_[e]) out.push_back(e);
    return out;
  }

  std::vector<VertexId> free_vertices(const WeightedGraph& g) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < g.n(); ++v)
      if (is_free(v)) out.push_back(v);
    return out;
  }

 private:
  std::vector<bool> in_matching_;
  std::vector<EdgeId> mate_edge_;
  int size_ = 0;
};

// Alternating path as an edge sequence; tags derived against a matching.
struct AlternatingPath {
  VertexId start = kNoVertex;
  std::vector<EdgeId> edges;

  VertexId end(const WeightedGraph& g) const {
    VertexId at = start;
    for (EdgeId e : edges) at = g.edge(e).other(at);
    return at;
  }
};

// Validates simplicity and alternation; returns true iff the path is augmenting.
inline bool is_augmenting_path(const WeightedGraph& g, const Matching& m,
                               const AlternatingPath& p) {
  if (p.edges.empty()) return false;
  std::vector<char> seen(g.n(), 0);
  VertexId at = p.start;
  seen[at] = 1;
  bool expect_matched = false;  // augmenting paths begin with an unmatched edge
  for (EdgeId e : p.edges) {
    if (!g.edge(e).touches(at)) return false;
    if (m.contains(e) != expect_matched) return false;
    at = g.edge(e).other(at);
    if (seen[at]) return false;
    seen[at] = 1;
    expect_matched = !expect_matched;
  }
  return m.is_free(p.start) && m.is_free(at) && !m.contains(p.edges.back());
}

}  // namespace mwm

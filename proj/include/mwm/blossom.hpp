#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mwm/graph.hpp"

namespace mwm {

// A child of a non-trivial blossom: either a bare vertex or a nested blossom.
struct BlossomChild {
  bool is_vertex = true;
  VertexId vertex = kNoVertex;
  BlossomId blossom = kNoBlossom;

  static BlossomChild of_vertex(VertexId v) { return BlossomChild{true, v, kNoBlossom}; }
  static BlossomChild of_blossom(BlossomId b) { return BlossomChild{false, kNoVertex, b}; }
};

// Non-trivial full blossom: odd cycle of children connected by cycle_edges.
// cycle_edges[j] joins children[j] and children[(j+1) % k]; the base lives in
// children[0], so odd-indexed cycle edges are matched and even-indexed are not.
struct Blossom {
  BlossomId id = kNoBlossom;
  std::vector<BlossomChild> children;
  std::vector<EdgeId> cycle_edges;
  VertexId base = kNoVertex;
  BlossomId parent = kNoBlossom;
};

// Laminar family of active blossoms. Trivial blossoms are implicit.
class BlossomForest {
 public:
  BlossomForest() = default;
  explicit BlossomForest(int n)
      : vertex_leaf_(n, kNoBlossom), vertex_root_(n, kNoBlossom) {}

  int n() const { return static_cast<int>(vertex_leaf_.size()); }
  bool empty() const { return live_count_ == 0; }
  int live_count() const { return live_count_; }
  int total_count() const { return static_cast<int>(blossoms_.size()); }

  bool is_live(BlossomId b) const {
    return b >= 0 && b < static_cast<int>(blossoms_.size()) && live_[b];
  }
  const Blossom& blossom(BlossomId b) const { return blossoms_[b]; }
  bool is_root(BlossomId b) const { return is_live(b) && blossoms_[b].parent == kNoBlossom; }

  // Innermost live blossom directly containing v, or kNoBlossom.
  BlossomId leaf_of(VertexId v) const { return vertex_leaf_[v]; }
  // Live root blossom containing v, or kNoBlossom for vertices outside every blossom.
  BlossomId root_of(VertexId v) const { return vertex_root_[v]; }

  std::vector<BlossomId> roots() const {
    std::vector<BlossomId> out;
    for (BlossomId b = 0; b < static_cast<int>(blossoms_.size()); ++b)
      if (is_root(b)) out.push_back(b);
    return out;
  }

  // Bottom-up chain of live blossoms containing v, innermost first.
  std::vector<BlossomId> chain_of(VertexId v) const {
    std::vector<BlossomId> out;
    for (BlossomId b = vertex_leaf_[v]; b != kNoBlossom; b = blossoms_[b].parent) out.push_back(b);
    return out;
  }

  const std::vector<VertexId>& vertices_of(BlossomId b) const { return vertex_sets_[b]; }

  bool contains(BlossomId b, VertexId v) const {
    const auto& verts = vertex_sets_[b];
    return std::find(verts.begin(), verts.end(), v) != verts.end();
  }

  // Adds a blossom whose children are bare vertices and/or current live roots.
  BlossomId add_blossom(std::vector<BlossomChild> children, std::vector<EdgeId> cycle_edges,
                        VertexId base) {
    MWM_REQUIRE(children.size() >= 3 && children.size() % 2 == 1,
                "blossom needs an odd number (>= 3) of children");
    MWM_REQUIRE(children.size() == cycle_edges.size(), "one cycle edge per child");
    BlossomId id = static_cast<BlossomId>(blossoms_.size());
    std::vector<VertexId> verts;
    for (const BlossomChild& c : children) {
      if (c.is_vertex) {
        MWM_REQUIRE(vertex_leaf_[c.vertex] == kNoBlossom, "vertex already inside a blossom");
        verts.push_back(c.vertex);
      } else {
        MWM_REQUIRE(is_root(c.blossom), "child blossom must be a live root");
        const auto& sub = vertex_sets_[c.blossom];
        verts.insert(verts.end(), sub.begin(), sub.end());
      }
    }
    blossoms_.push_back(Blossom{id, std::move(children), std::move(cycle_edges), base, kNoBlossom});
    live_.push_back(true);
    vertex_sets_.push_back(verts);
    ++live_count_;
    for (const BlossomChild& c : blossoms_[id].children) {
      if (c.is_vertex)
        vertex_leaf_[c.vertex] = id;
      else
        blossoms_[c.blossom].parent = id;
    }
    for (VertexId v : vertex_sets_[id]) vertex_root_[v] = id;
    return id;
  }

  // Dissolves a root; its children become roots.
  void dissolve_root(BlossomId b) {
    MWM_REQUIRE(is_root(b), "dissolve_root: not a live root blossom");
    live_[b] = false;
    --live_count_;
    for (const BlossomChild& c : blossoms_[b].children) {
      if (c.is_vertex) {
        vertex_leaf_[c.vertex] = kNoBlossom;
        vertex_root_[c.vertex] = kNoBlossom;
      } else {
        blossoms_[c.blossom].parent = kNoBlossom;
        for (VertexId v : vertex_sets_[c.blossom]) vertex_root_[v] = c.blossom;
      }
    }
  }

  void set_base(BlossomId b, VertexId base) { blossoms_[b].base = base; }

  // Rotates children/cycle_edges left so the child at `idx` lands at index 0.
  void rotate_children(BlossomId b, int idx) {
    Blossom& bl = blossoms_[b];
    if (idx == 0) return;
    std::rotate(bl.children.begin(), bl.children.begin() + idx, bl.children.end());
    std::rotate(bl.cycle_edges.begin(), bl.cycle_edges.begin() + idx, bl.cycle_edges.end());
  }

  // Base vertex of the root-level unit containing v (v itself if outside blossoms).
  VertexId root_base(VertexId v) const {
    BlossomId r = vertex_root_[v];
    return r == kNoBlossom ? v : blossoms_[r].base;
  }

 private:
  std::vector<Blossom> blossoms_;
  std::vector<bool> live_;
  std::vector<std::vector<VertexId>> vertex_sets_;
  std::vector<BlossomId> vertex_leaf_;
  std::vector<BlossomId> vertex_root_;
  int live_count_ = 0;
};

// Reports every violation of laminarity, fullness, base placement and cycle
// alternation (empty result = valid).
inline std::vector<std::string> validate_laminar_full(const WeightedGraph& g, const Matching& m,
                                                      const BlossomForest& forest) {
  std::vector<std::string> out;
  for (BlossomId b = 0; b < forest.total_count(); ++b) {
    if (!forest.is_live(b)) continue;
    const Blossom& bl = forest.blossom(b);
    const auto& verts = forest.vertices_of(b);
    if (verts.size() % 2 == 0)
      out.push_back("blossom " + std::to_string(b) + ": even vertex count");
    std::vector<char> inside(g.n(), 0);
    size_t total = 0;
    for (const BlossomChild& c : bl.children) {
      if (c.is_vertex) {
        if (inside[c.vertex]++) out.push_back("blossom " + std::to_string(b) + ": overlapping children");
        ++total;
      } else {
        for (VertexId v : forest.vertices_of(c.blossom)) {
          if (inside[v]++) out.push_back("blossom " + std::to_string(b) + ": overlapping children");
          ++total;
        }
      }
    }
    if (total != verts.size())
      out.push_back("blossom " + std::to_string(b) + ": vertex set mismatch");
    int matched_inside = 0;
    for (VertexId v : verts) {
      EdgeId e = m.matched_edge_at(v);
      if (e != kNoEdge && inside[g.edge(e).other(v)]) ++matched_inside;
    }
    matched_inside /= 2;  // counted from both endpoints
    if (matched_inside != static_cast<int>(verts.size() - 1) / 2)
      out.push_back("blossom " + std::to_string(b) + ": not full (" +
                    std::to_string(matched_inside) + " matched inside, " +
                    std::to_string(verts.size()) + " vertices)");
    bool base_is_member = inside[bl.base] != 0;
    EdgeId be = base_is_member ? m.matched_edge_at(bl.base) : kNoEdge;
    bool base_unmatched_inside = base_is_member && (be == kNoEdge || !inside[g.edge(be).other(bl.base)]);
    if (!base_unmatched_inside)
      out.push_back("blossom " + std::to_string(b) + ": wrong base");
    int k = static_cast<int>(bl.children.size());
    for (int j = 0; j < k; ++j) {
      const Edge& e = g.edge(bl.cycle_edges[j]);
      auto in_child = [&](const BlossomChild& c, VertexId v) {
        return c.is_vertex ? c.vertex == v : forest.contains(c.blossom, v);
      };
      const BlossomChild& a = bl.children[j];
      const BlossomChild& nx = bl.children[(j + 1) % k];
      if (!((in_child(a, e.u) && in_child(nx, e.v)) || (in_child(a, e.v) && in_child(nx, e.u))))
        out.push_back("blossom " + std::to_string(b) + ": cycle edge " + std::to_string(j) + " misplaced");
      bool want_matched = (j % 2 == 1);
      if (m.contains(bl.cycle_edges[j]) != want_matched)
        out.push_back("blossom " + std::to_string(b) + ": cycle edge " + std::to_string(j) +
                      (want_matched ? " should be matched" : " should be unmatched"));
    }
  }
  return out;
}

namespace detail {

inline int child_index_of(const BlossomForest& f, const Blossom& b, VertexId v) {
  for (int j = 0; j < static_cast<int>(b.children.size()); ++j) {
    const BlossomChild& c = b.children[j];
    if (c.is_vertex ? c.vertex == v : f.contains(c.blossom, v)) return j;
  }
  throw StructuralError("vertex not found among blossom children");
}

inline VertexId child_base(const BlossomForest& f, const BlossomChild& c) {
  return c.is_vertex ? c.vertex : f.blossom(c.blossom).base;
}

inline VertexId endpoint_in_child(const BlossomForest& f, const Blossom& b, int child_idx,
                                  const Edge& e) {
  const BlossomChild& c = b.children[child_idx];
  if (c.is_vertex) return c.vertex;
  return f.contains(c.blossom, e.u) ? e.u : e.v;
}

}  // namespace detail

// Even-length alternating route inside blossom `bid` from `from` to the blossom base,
// starting with a matched edge (empty iff from == base). Appends G-edge ids to `out`.
inline void blossom_route_to_base(const WeightedGraph& g, const Matching& m,
                                  const BlossomForest& f, BlossomId bid, VertexId from,
                                  std::vector<EdgeId>& out) {
  const Blossom& b = f.blossom(bid);
  if (from == b.base) return;
  int k = static_cast<int>(b.children.size());
  int j = detail::child_index_of(f, b, from);

  // Descend inside the entry child first.
  const BlossomChild& cj = b.children[j];
  if (!cj.is_vertex && from != f.blossom(cj.blossom).base)
    blossom_route_to_base(g, m, f, cj.blossom, from, out);
  if (j == 0) return;

  // Walk the cycle toward child 0. From an odd child the walk moves forward
  // (cur, cur+2, ...), from an even child backward (cur, cur-2, ...); matched
  // cycle edges join the bases of their two children.
  int cur = j;
  while (cur != 0) {
    bool fwd = (cur % 2 == 1);
    int em = fwd ? cur : cur - 1;            // matched cycle edge at base(C_cur)
    int ncur = fwd ? cur + 1 : cur - 1;      // neighbor child reached by it
    int eu = fwd ? ncur : ncur - 1;          // that child's unmatched cycle edge
    int fcur = (fwd ? ncur + 1 : ncur - 1) % k;

    const Edge& medge = g.edge(b.cycle_edges[em]);
    MWM_CHECK(m.contains(b.cycle_edges[em]), "expected matched cycle edge");
    out.push_back(b.cycle_edges[em]);

    // Inside C_ncur: from its base to the attachment of edge eu (reversed canonical route).
    VertexId att = detail::endpoint_in_child(f, b, ncur, g.edge(b.cycle_edges[eu]));
    const BlossomChild& cn = b.children[ncur];
    if (!cn.is_vertex && att != f.blossom(cn.blossom).base) {
      std::vector<EdgeId> seg;
      blossom_route_to_base(g, m, f, cn.blossom, att, seg);
      std::reverse(seg.begin(), seg.end());
      out.insert(out.end(), seg.begin(), seg.end());
    }
    (void)medge;

    MWM_CHECK(!m.contains(b.cycle_edges[eu]), "expected unmatched cycle edge");
    out.push_back(b.cycle_edges[eu]);

    // Entered C_fcur via an unmatched edge: descend to its base.
    VertexId arrive = detail::endpoint_in_child(f, b, fcur, g.edge(b.cycle_edges[eu]));
    const BlossomChild& cf = b.children[fcur];
    if (!cf.is_vertex && arrive != f.blossom(cf.blossom).base)
      blossom_route_to_base(g, m, f, cf.blossom, arrive, out);
    cur = fcur;
  }
}

// Recomputes the base of blossom `bid` and of every nested blossom from the
// current matching, rotating children so the base child sits at index 0 (which
// restores the odd-edges-matched cycle pattern). Used after augmenting through
// a blossom.
inline void recompute_bases(const WeightedGraph& g, const Matching& m, BlossomForest& f,
                            BlossomId bid) {
  const auto& verts = f.vertices_of(bid);
  std::vector<char> inside(g.n(), 0);
  for (VertexId v : verts) inside[v] = 1;
  VertexId base = kNoVertex;
  for (VertexId v : verts) {
    EdgeId e = m.matched_edge_at(v);
    if (e == kNoEdge || !inside[g.edge(e).other(v)]) {
      MWM_CHECK(base == kNoVertex, "blossom has two candidate bases; not full");
      base = v;
    }
  }
  MWM_CHECK(base != kNoVertex, "blossom has no base; not full");
  f.set_base(bid, base);
  f.rotate_children(bid, detail::child_index_of(f, f.blossom(bid), base));
  for (const BlossomChild& c : f.blossom(bid).children)
    if (!c.is_vertex) recompute_bases(g, m, f, c.blossom);
}

}  // namespace mwm

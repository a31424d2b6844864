#pragma once

#include <algorithm>
#include <vector>

#include "mwm/contracted.hpp"
#include "mwm/fmu.hpp"

namespace mwm {

// Vertex origin kinds in the expanded (blossom-to-path) graph.
enum class ExpandedKind { Super, EdgeInternal, TailInternal, TailFree };

struct ExpandedOrigin {
  ExpandedKind kind = ExpandedKind::Super;
  int index = -1;  // super id, or view edge index for EdgeInternal; super id for tails
};

enum class ExpandedEdgeKind { SuperEdge, Tail };

struct ExpandedEdgeOrigin {
  ExpandedEdgeKind kind = ExpandedEdgeKind::SuperEdge;
  int index = -1;  // view edge index, or super id of the tail's free vertex
};

// Alg. 2 reduction: matched super-edges become alternating paths with exactly
// ||e||_M matched edges (beginning and ending matched), weighted free vertices
// get an alternating tail whose new endpoint is the free vertex. Matched edges
// with ||e||_M > ell_max and free vertices with (||a||-1)/2 > ell_max are
// dropped, together with the vertices they represent.
struct Expansion {
  WeightedGraph graph;
  Matching matching;
  std::vector<ExpandedOrigin> vertex_origin;
  std::vector<ExpandedEdgeOrigin> edge_origin;
  std::vector<char> super_dropped;        // super id -> dropped by the weight caps
  std::vector<VertexId> super_to_vertex;  // identity layout: super id == expanded id
};

inline Expansion expand(const ContractedView& view, const PhaseParams& params) {
  for (const SuperVertex& sv : view.vertices())
    MWM_REQUIRE(sv.norm <= params.c_max, "expand: super-vertex weight exceeds C_max");

  Expansion ex;
  int n = view.n();
  ex.super_dropped.assign(n, 0);
  // cap checks
  std::vector<char> edge_dropped(view.m(), 0);
  for (int i = 0; i < view.m(); ++i) {
    const SuperEdge& se = view.edge(i);
    if (!se.matched) continue;
    if (super_edge_norm(view, i) > params.ell_max) {
      edge_dropped[i] = 1;
      ex.super_dropped[se.a] = 1;
      ex.super_dropped[se.b] = 1;
    }
  }
  for (SuperId s = 0; s < n; ++s) {
    const SuperVertex& sv = view.vertex(s);
    if (sv.free && (sv.norm - 1) / 2 > params.ell_max) ex.super_dropped[s] = 1;
  }

  // vertex layout: supers first (identity), then per-edge internals, then tails
  std::vector<int> edge_base(view.m(), -1);
  std::vector<int> tail_base(n, -1);
  int next = n;
  for (int i = 0; i < view.m(); ++i) {
    const SuperEdge& se = view.edge(i);
    if (!se.matched || edge_dropped[i]) continue;
    if (ex.super_dropped[se.a] || ex.super_dropped[se.b]) continue;
    Weight k = super_edge_norm(view, i);
    edge_base[i] = next;
    next += static_cast<int>(2 * k - 2);
  }
  for (SuperId s = 0; s < n; ++s) {
    const SuperVertex& sv = view.vertex(s);
    if (!sv.free || ex.super_dropped[s]) continue;
    Weight t = (sv.norm - 1) / 2;
    if (t == 0) continue;
    tail_base[s] = next;
    next += static_cast<int>(2 * t);  // x_1..x_{2t-1} plus the new free vertex
  }

  ex.graph = WeightedGraph(next);
  ex.vertex_origin.assign(next, ExpandedOrigin{});
  ex.super_to_vertex.resize(n);
  for (SuperId s = 0; s < n; ++s) {
    ex.vertex_origin[s] = ExpandedOrigin{ExpandedKind::Super, s};
    ex.super_to_vertex[s] = s;
  }

  std::vector<EdgeId> to_match;
  auto add_edge = [&](VertexId u, VertexId v, ExpandedEdgeOrigin origin, bool matched) {
    EdgeId id = ex.graph.add_edge(u, v, 1);
    ex.edge_origin.push_back(origin);
    if (matched) to_match.push_back(id);
    return id;
  };

  // unmatched super-edges between live supers
  for (int i = 0; i < view.m(); ++i) {
    const SuperEdge& se = view.edge(i);
    if (se.matched) continue;
    if (ex.super_dropped[se.a] || ex.super_dropped[se.b]) continue;
    add_edge(se.a, se.b, ExpandedEdgeOrigin{ExpandedEdgeKind::SuperEdge, i}, false);
  }
  // matched super-edges as alternating paths u = i1 - i2 = i3 ... = v
  for (int i = 0; i < view.m(); ++i) {
    const SuperEdge& se = view.edge(i);
    if (!se.matched || edge_base[i] == -1) {
      continue;
    }
    Weight k = super_edge_norm(view, i);
    ExpandedEdgeOrigin orig{ExpandedEdgeKind::SuperEdge, i};
    if (k == 1) {
      add_edge(se.a, se.b, orig, true);
      continue;
    }
    int base = edge_base[i];
    for (int j = 0; j < 2 * static_cast<int>(k) - 2; ++j)
      ex.vertex_origin[base + j] = ExpandedOrigin{ExpandedKind::EdgeInternal, i};
    add_edge(se.a, base, orig, true);
    for (int j = 0; j + 1 < 2 * static_cast<int>(k) - 2; ++j)
      add_edge(base + j, base + j + 1, orig, j % 2 == 1);
    add_edge(base + 2 * static_cast<int>(k) - 3, se.b, orig, true);
  }
  // free-vertex tails f - x1 = x2 - ... - x_{2t-1} = s
  for (SuperId s = 0; s < n; ++s) {
    if (tail_base[s] == -1) continue;
    Weight t = (view.vertex(s).norm - 1) / 2;
    int base = tail_base[s];
    int free_id = base + 2 * static_cast<int>(t) - 1;
    for (int j = 0; j + 1 < 2 * static_cast<int>(t); ++j)
      ex.vertex_origin[base + j] = ExpandedOrigin{ExpandedKind::TailInternal, s};
    ex.vertex_origin[free_id] = ExpandedOrigin{ExpandedKind::TailFree, s};
    ExpandedEdgeOrigin orig{ExpandedEdgeKind::Tail, s};
    add_edge(free_id, base, orig, false);
    for (int j = 0; j + 1 < 2 * static_cast<int>(t) - 1; ++j)
      add_edge(base + j, base + j + 1, orig, j % 2 == 0);
    add_edge(base + 2 * static_cast<int>(t) - 2, s, orig, true);
  }

  ex.matching = Matching(ex.graph);
  for (EdgeId e : to_match) ex.matching.add(ex.graph, e);
  return ex;
}

struct VwStructureArc {
  int edge_index = -1;  // index into view.edges()
  SuperId tail = kNoSuper;
  SuperId head = kNoSuper;
};

struct VwStructure {
  SuperId root = kNoSuper;
  bool active = false;
  std::vector<SuperId> vertices;
  std::vector<VwStructureArc> arcs;
  std::vector<int> unmatched_edges;  // view edge indices with both endpoints covered
};

struct VwPhaseResult {
  std::vector<SuperPath> paths;
  std::vector<SuperId> removed;  // V'
  std::vector<SuperId> active;   // V_A
  std::vector<VwStructure> structures;
  std::int64_t passes = 0;
};

// Vertex-weighted Alg-Phase on a contracted view, by reduction to the
// unweighted phase on the expanded graph and recovery of the outputs.
inline VwPhaseResult vertex_weighted_alg_phase(const ContractedView& view,
                                               const PhaseParams& params,
                                               const PhaseOptions& opts = {}) {
  Expansion ex = expand(view, params);
  UPhaseResult inner = alg_phase(ex.graph, ex.matching, params, opts);

  VwPhaseResult res;
  res.passes = inner.passes;

  // paths: collapse expanded edges back to super-edges
  for (const AlternatingPath& p : inner.paths) {
    SuperPath sp;
    const ExpandedOrigin& so = ex.vertex_origin[p.start];
    sp.start = so.index;  // Super or TailFree both carry the super id
    int last = -1;
    for (EdgeId e : p.edges) {
      const ExpandedEdgeOrigin& eo = ex.edge_origin[e];
      if (eo.kind != ExpandedEdgeKind::SuperEdge) continue;
      if (eo.index != last) {
        sp.edges.push_back(eo.index);
        last = eo.index;
      }
    }
    res.paths.push_back(std::move(sp));
  }

  // V' and V_A: supers directly; edge internals contribute both endpoints;
  // tail vertices contribute their super.
  auto recover_set = [&](const std::vector<VertexId>& in) {
    std::vector<SuperId> out;
    for (VertexId v : in) {
      const ExpandedOrigin& o = ex.vertex_origin[v];
      switch (o.kind) {
        case ExpandedKind::Super:
          if (!ex.super_dropped[o.index]) out.push_back(o.index);
          break;
        case ExpandedKind::EdgeInternal: {
          const SuperEdge& se = view.edge(o.index);
          out.push_back(se.a);
          out.push_back(se.b);
          break;
        }
        case ExpandedKind::TailInternal:
        case ExpandedKind::TailFree:
          out.push_back(o.index);
          break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  res.removed = recover_set(inner.removed);
  res.active = recover_set(inner.active);

  // structures: keep a matched super-arc only when the entire expanded path
  // P_e lies inside the structure.
  for (const StructureOut& so : inner.structures) {
    const ExpandedOrigin& ro = ex.vertex_origin[so.root];
    if (ro.kind == ExpandedKind::Super && ex.super_dropped[ro.index]) continue;  // isolated artifact
    VwStructure vs;
    vs.root = ro.index;
    vs.active = so.active;
    std::vector<char> member(ex.graph.n(), 0);
    for (VertexId v : so.vertices) member[v] = 1;

    std::vector<char> covered(view.n(), 0);
    covered[vs.root] = 1;
    // an expansion path is only kept when every internal vertex is a member
    std::vector<char> internal_missing(view.m(), 0);
    for (VertexId v = 0; v < ex.graph.n(); ++v) {
      const ExpandedOrigin& vo = ex.vertex_origin[v];
      if (vo.kind == ExpandedKind::EdgeInternal && !member[v]) internal_missing[vo.index] = 1;
    }
    // orientation of each traversed expansion path: internals ascend from the
    // a-side, so positions order the two directions
    std::vector<char> has_fwd(view.m(), 0), has_rev(view.m(), 0);
    for (const StructureArc& arc : so.arcs) {
      const ExpandedEdgeOrigin& eo = ex.edge_origin[arc.edge];
      if (eo.kind != ExpandedEdgeKind::SuperEdge) continue;
      const SuperEdge& se = view.edge(eo.index);
      if (!se.matched) continue;
      auto pos = [&](VertexId v) -> long {
        if (v == se.a) return -1;
        if (v == se.b) return 1L << 40;
        return v;
      };
      (pos(arc.head) > pos(arc.tail) ? has_fwd : has_rev)[eo.index] = 1;
    }
    for (int idx = 0; idx < view.m(); ++idx) {
      if (!has_fwd[idx] && !has_rev[idx]) continue;
      const SuperEdge& se = view.edge(idx);
      if (!member[se.a] || !member[se.b] || internal_missing[idx]) continue;
      if (has_fwd[idx]) vs.arcs.push_back(VwStructureArc{idx, se.a, se.b});
      if (has_rev[idx]) vs.arcs.push_back(VwStructureArc{idx, se.b, se.a});
      covered[se.a] = 1;
      covered[se.b] = 1;
    }
    for (SuperId s = 0; s < view.n(); ++s)
      if (covered[s]) vs.vertices.push_back(s);
    for (int i = 0; i < view.m(); ++i) {
      const SuperEdge& se = view.edge(i);
      if (!se.matched && covered[se.a] && covered[se.b]) vs.unmatched_edges.push_back(i);
    }
    res.structures.push_back(std::move(vs));
  }
  return res;
}

}  // namespace mwm

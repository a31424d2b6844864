#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "mwm/core.hpp"
#include "mwm/graph.hpp"

namespace mwm {

// DFS parameters derived from lambda = 1 / lambda_den. Values that blow up at
// small lambda saturate at int64 max; they are only ever compared against
// desk-scale quantities.
struct PhaseParams {
  std::int64_t lambda_den = 2;  // lambda = 1 / lambda_den
  std::int64_t ell_max = 2;     // 1/lambda
  std::int64_t limit = 4;       // 1/lambda^2
  std::int64_t tau_max = 16;    // 1/lambda^4
  std::int64_t c_max = 192;     // tau_max * (ell_max + 1) * limit

  static PhaseParams from_lambda_den(std::int64_t den) {
    PhaseParams p;
    p.lambda_den = std::max<std::int64_t>(den, 1);
    p.ell_max = std::max<std::int64_t>(p.lambda_den, 1);
    p.limit = std::max<std::int64_t>(sat_mul(p.ell_max, p.ell_max), 1);
    p.tau_max = std::max<std::int64_t>(sat_mul(p.limit, p.limit), 1);
    p.c_max = sat_mul(sat_mul(p.tau_max, p.ell_max + 1), p.limit);
    return p;
  }

  // h(lambda) = (4 + 2/lambda) / (lambda * tau_max) + 2 / LIMIT, as an exact fraction.
  Frac h() const {
    Frac first(sat_mul(lambda_den, 4 + 2 * lambda_den), tau_max);
    Frac second(2, limit);
    return first + second;
  }

  // True iff |M_H| < lambda^32 * |M| / 2 (the pass-bundle prune threshold).
  bool prune_fires(std::int64_t matched_h, std::int64_t matching_size) const {
    if (prune_threshold_num >= 0)
      return Frac(matched_h) < Frac(prune_threshold_num, prune_threshold_den) * Frac(matching_size);
    // compare matched_h * 2 * D^32 < |M| with saturation
    std::int64_t lhs = 2 * matched_h;
    for (int i = 0; i < 32 && lhs != 0; ++i) lhs = sat_mul(lhs, lambda_den);
    if (matched_h == 0) return matching_size > 0;
    return lhs < matching_size;
  }

  // Config override for the prune threshold (fraction of |M|); negative = default.
  std::int64_t prune_threshold_num = -1;
  std::int64_t prune_threshold_den = 1;
};

enum class PhaseEvent { Extend, Retreat, Augment, Overtake, Flip, Rewalk, BlockedSkip, SizeFreeze, Exhaust };

struct StructureArc {
  EdgeId edge = kNoEdge;
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;
  std::int64_t label = 0;
};

struct StructureOut {
  VertexId root = kNoVertex;
  bool active = false;  // still active (or size-frozen) at finalize
  std::vector<VertexId> vertices;
  std::vector<StructureArc> arcs;
  std::vector<EdgeId> entry_edges;       // unmatched edges used by the DFS tree
  std::vector<VertexId> active_path;     // vertices on the final active path (root first)
};

struct UPhaseResult {
  std::vector<AlternatingPath> paths;   // P: vertex-disjoint augmenting paths
  std::vector<VertexId> removed;        // V'
  std::vector<VertexId> active;         // V_A
  std::vector<StructureOut> structures; // S
  std::int64_t passes = 0;
};

struct PhaseOptions {
  std::ostream* trace = nullptr;
  bool check_invariants = false;
};

namespace fmu_detail {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

constexpr int kEqualRelinkBudget = 4;

struct Node {
  EdgeId edge = kNoEdge;
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;
  EdgeId entry = kNoEdge;  // unmatched edge that reached `tail`
  int parent = -1;         // node index, -1 = hangs off the root
  std::vector<int> children;
  int strct = -1;
  size_t iter = 0;  // next incident-edge index to examine at `head`
  bool dead = false;
  // relinks at unchanged depth re-explore alternative routes; the budget keeps
  // mutually-relinking nodes from cycling within an epoch
  int equal_budget = kEqualRelinkBudget;
};

enum class Status { Active, Frozen, Exhausted, Removed };

struct Struct {
  VertexId root = kNoVertex;
  Status status = Status::Active;
  std::vector<int> spine;  // node indices, root-to-head
  size_t root_iter = 0;
  std::int64_t claimed = 1;  // |V_alpha| including the root
};

class Engine {
 public:
  Engine(const WeightedGraph& g, const Matching& m, const PhaseParams& params,
         const PhaseOptions& opts)
      : g_(g), m_(m), p_(params), o_(opts) {
    owner_.assign(g.n(), -1);
    removed_.assign(g.n(), 0);
    on_spine_.assign(g.n(), 0);
    node_of_dir_.assign(g.m(), {-1, -1});
    label_.assign(g.m(), {kInf, kInf});
    // at most one node per (matched edge, direction) ever exists; reserving keeps
    // references into the arena stable across new_node()
    nodes_.reserve(static_cast<size_t>(g.m()) * 2 + 1);
    for (VertexId v = 0; v < g.n(); ++v) {
      if (!m.is_free(v)) continue;
      int idx = static_cast<int>(structs_.size());
      structs_.push_back(Struct{v, Status::Active, {}, 0, 1});
      owner_[v] = idx;
    }
  }

  UPhaseResult run() {
    bool epoch_changed = true;
    while (passes_ < p_.tau_max) {
      bool any_active = false;
      for (const Struct& s : structs_) any_active |= s.status == Status::Active;
      if (!any_active) {
        if (!epoch_changed) break;
        bool reactivated = false;
        for (int i = 0; i < static_cast<int>(structs_.size()); ++i) {
          if (structs_[i].status != Status::Exhausted) continue;
          structs_[i].status = Status::Active;
          structs_[i].root_iter = 0;
          reset_iterators(i);
          reactivated = true;
        }
        if (!reactivated) break;
        epoch_changed = false;
        continue;
      }
      ++passes_;
      for (int i = 0; i < static_cast<int>(structs_.size()); ++i)
        if (structs_[i].status == Status::Active) epoch_changed |= step(i);
      if (o_.check_invariants) check_invariants();
      if (passes_ % p_.tau_max == 0) prune();
    }
    return finalize();
  }

 private:
  int slot(EdgeId e, VertexId head) const { return g_.edge(e).v == head ? 1 : 0; }
  std::int64_t& label_ref(EdgeId e, VertexId head) { return label_[e][slot(e, head)]; }
  int& node_ref(EdgeId e, VertexId head) { return node_of_dir_[e][slot(e, head)]; }

  VertexId head_of(int s) const {
    const Struct& st = structs_[s];
    return st.spine.empty() ? st.root : nodes_[st.spine.back()].head;
  }

  size_t& iter_of(int s) {
    Struct& st = structs_[s];
    return st.spine.empty() ? st.root_iter : nodes_[st.spine.back()].iter;
  }

  void trace(int s, PhaseEvent ev, EdgeId via, VertexId x) {
    if (!o_.trace) return;
    static const char* names[] = {"EXTEND", "RETREAT", "AUGMENT",      "OVERTAKE", "FLIP",
                                  "REWALK", "SKIP",    "SIZE-FREEZE", "EXHAUST"};
    *o_.trace << "pass=" << passes_ << " alpha=" << structs_[s].root << " event="
              << names[static_cast<int>(ev)];
    if (via != kNoEdge) *o_.trace << " edge=(" << g_.edge(via).u << "," << g_.edge(via).v << ")";
    if (x != kNoVertex) *o_.trace << " to=" << x;
    *o_.trace << "\n";
  }

  // One DFS step of structure s. Returns true if global state changed.
  bool step(int s) {
    Struct& st = structs_[s];
    VertexId h = head_of(s);
    size_t& it = iter_of(s);
    const auto& inc = g_.incident(h);
    while (it < inc.size()) {
      EdgeId e = inc[it];
      if (m_.contains(e)) {
        ++it;
        continue;
      }
      VertexId x = g_.edge(e).other(h);
      if (removed_[x] || x == st.root) {
        ++it;
        continue;
      }
      if (m_.is_free(x)) {
        // root of another live structure: direct augmenting path
        MWM_CHECK(owner_[x] >= 0 && structs_[owner_[x]].status != Status::Removed,
                  "live free vertex must own a live structure");
        augment_and_clean(s, owner_[x], e, -1);
        trace(s, PhaseEvent::Augment, e, x);
        return true;
      }
      EdgeId me = m_.matched_edge_at(x);
      VertexId y = g_.edge(me).other(x);
      int other = owner_[x];
      MWM_CHECK(other == -1 || owner_[y] == other, "matched pair split across structures");
      // contact with an outer vertex of another structure: combined augmenting path
      if (other != -1 && other != s) {
        int n_head = node_ref(me, x);
        if (n_head != -1 && !nodes_[n_head].dead && nodes_[n_head].strct == other) {
          augment_and_clean(s, other, e, n_head);
          trace(s, PhaseEvent::Augment, e, x);
          return true;
        }
        record_collision(s, other);
      }
      if (other == s && (on_spine_[x] || on_spine_[y])) {
        ++it;
        trace(s, PhaseEvent::BlockedSkip, e, x);
        continue;
      }
      std::int64_t d = static_cast<std::int64_t>(st.spine.size()) + 1;
      if (d > p_.ell_max) {
        ++it;
        trace(s, PhaseEvent::BlockedSkip, e, x);
        continue;
      }
      std::int64_t& lab = label_ref(me, y);
      if (other == -1) {
        if (st.claimed >= p_.limit) {
          st.status = Status::Frozen;
          trace(s, PhaseEvent::SizeFreeze, e, x);
          return false;
        }
        // extend into unclaimed territory
        int nid = new_node(e, x, y, s, st.spine.empty() ? -1 : st.spine.back());
        owner_[x] = owner_[y] = s;
        st.claimed += 2;
        lab = std::min(lab, d);
        push_spine(s, nid);
        ++it;
        trace(s, PhaseEvent::Extend, e, x);
        return true;
      }
      if (other == s) {
        int n_same = node_ref(me, y);
        if (n_same != -1 && !nodes_[n_same].dead) {
          Node& n = nodes_[n_same];
          int want_parent = st.spine.empty() ? -1 : st.spine.back();
          if (d < lab) {
            relink(n_same, want_parent, e, d);
            push_spine(s, n_same);
            ++it;
            trace(s, PhaseEvent::Overtake, e, x);
            return true;
          }
          if (d == lab && n.parent == want_parent && n.entry == e) {
            push_spine(s, n_same);
            ++it;
            trace(s, PhaseEvent::Rewalk, e, x);
            return false;  // re-descending own tree is not a state change
          }
          if (d == lab && e < n.entry) {
            // equal-depth alternative route; the strictly decreasing entry id
            // bounds these relinks, so re-exploration terminates
            relink(n_same, want_parent, e, d);
            push_spine(s, n_same);
            ++it;
            trace(s, PhaseEvent::Overtake, e, x);
            return true;
          }
          ++it;
          trace(s, PhaseEvent::BlockedSkip, e, x);
          continue;
        }
        // no node in this direction; x is the head of the reverse node (flip)
        if (d < lab) {
          int nid = new_node(e, x, y, s, st.spine.empty() ? -1 : st.spine.back());
          lab = d;
          push_spine(s, nid);
          ++it;
          trace(s, PhaseEvent::Flip, e, x);
          return true;
        }
        ++it;
        trace(s, PhaseEvent::BlockedSkip, e, x);
        continue;
      }
      // x is an inner (tail) vertex of another structure: overtake or skip
      {
        int n_same = node_ref(me, y);
        MWM_CHECK(n_same != -1 && !nodes_[n_same].dead && nodes_[n_same].strct == other,
                  "claimed matched pair must carry a tail-direction node");
        bool may_steal = d < lab || (d == lab && structs_[other].status != Status::Active);
        if (may_steal && subtree_transferable(n_same)) {
          steal(n_same, s, e, d);
          push_spine(s, n_same);
          ++it;
          trace(s, PhaseEvent::Overtake, e, x);
          return true;
        }
        ++it;
        trace(s, PhaseEvent::BlockedSkip, e, x);
        continue;
      }
    }
    // no candidates left at this position
    if (!st.spine.empty()) {
      pop_spine(s);
      trace(s, PhaseEvent::Retreat, kNoEdge, head_of(s));
      return false;
    }
    st.status = Status::Exhausted;
    trace(s, PhaseEvent::Exhaust, kNoEdge, kNoVertex);
    return false;
  }

  int new_node(EdgeId entry, VertexId tail, VertexId head, int s, int parent) {
    EdgeId me = m_.matched_edge_at(tail);
    int nid = static_cast<int>(nodes_.size());
    MWM_CHECK(nodes_.size() < nodes_.capacity(), "node arena exceeded its reserve");
    nodes_.push_back(Node{me, tail, head, entry, parent, {}, s, 0, false});
    if (parent >= 0) nodes_[parent].children.push_back(nid);
    node_ref(me, head) = nid;
    return nid;
  }

  void push_spine(int s, int nid) {
    structs_[s].spine.push_back(nid);
    on_spine_[nodes_[nid].tail] = 1;
    on_spine_[nodes_[nid].head] = 1;
  }

  void pop_spine(int s) {
    int nid = structs_[s].spine.back();
    structs_[s].spine.pop_back();
    on_spine_[nodes_[nid].tail] = 0;
    on_spine_[nodes_[nid].head] = 0;
  }

  void relink(int nid, int new_parent, EdgeId entry, std::int64_t d) {
    Node& n = nodes_[nid];
    if (n.parent >= 0) {
      auto& ch = nodes_[n.parent].children;
      ch.erase(std::find(ch.begin(), ch.end(), nid));
    }
    n.parent = new_parent;
    if (new_parent >= 0) nodes_[new_parent].children.push_back(nid);
    n.entry = entry;
    n.iter = 0;
    label_ref(n.edge, n.head) = d;
  }

  void collect_subtree(int nid, std::vector<int>& out) const {
    out.push_back(nid);
    for (int c : nodes_[nid].children) collect_subtree(c, out);
  }

  // A subtree transfers cleanly only if it contains both or neither node of
  // every matched-edge direction pair it touches.
  bool subtree_transferable(int nid) const {
    std::vector<int> sub;
    collect_subtree(nid, sub);
    std::set<int> in(sub.begin(), sub.end());
    for (int id : sub) {
      const Node& n = nodes_[id];
      int twin = node_of_dir_[n.edge][1 - slot(n.edge, n.head)];
      if (twin != -1 && !nodes_[twin].dead && !in.count(twin)) return false;
    }
    return true;
  }

  void steal(int nid, int thief, EdgeId entry, std::int64_t d) {
    int victim = nodes_[nid].strct;
    std::vector<int> sub;
    collect_subtree(nid, sub);
    std::set<int> in(sub.begin(), sub.end());
    // truncate the victim's spine above the first stolen node
    Struct& vs = structs_[victim];
    for (size_t i = 0; i < vs.spine.size(); ++i) {
      if (in.count(vs.spine[i])) {
        while (vs.spine.size() > i) pop_spine(victim);
        break;
      }
    }
    std::int64_t moved = 0;
    for (int id : sub) {
      Node& n = nodes_[id];
      n.strct = thief;
      owner_[n.tail] = thief;
      owner_[n.head] = thief;
      moved += 2;
    }
    vs.claimed -= moved;
    structs_[thief].claimed += moved;
    relink(nid, structs_[thief].spine.empty() ? -1 : structs_[thief].spine.back(), entry, d);
    record_collision(thief, victim);
  }

  // Edges of the alternating tree path from the structure root down to `nid`.
  std::vector<EdgeId> tree_path_edges(int nid) const {
    std::vector<EdgeId> rev;
    for (int cur = nid; cur >= 0; cur = nodes_[cur].parent) {
      rev.push_back(nodes_[cur].edge);
      rev.push_back(nodes_[cur].entry);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

  void augment_and_clean(int sa, int sb, EdgeId closing, int contact_node) {
    MWM_CHECK(sa != sb, "augmenting path needs two distinct structures");
    AlternatingPath path;
    path.start = structs_[sa].root;
    if (!structs_[sa].spine.empty()) {
      auto pre = tree_path_edges(structs_[sa].spine.back());
      path.edges.insert(path.edges.end(), pre.begin(), pre.end());
    }
    path.edges.push_back(closing);
    if (contact_node >= 0) {
      auto post = tree_path_edges(contact_node);
      std::reverse(post.begin(), post.end());
      path.edges.insert(path.edges.end(), post.begin(), post.end());
    }
    MWM_CHECK(is_augmenting_path(g_, m_, path), "phase built a non-augmenting path");
    result_paths_.push_back(path);
    std::vector<char> on_path(g_.n(), 0);
    VertexId at = path.start;
    on_path[at] = 1;
    for (EdgeId e : path.edges) {
      at = g_.edge(e).other(at);
      on_path[at] = 1;
    }
    remove_structure(sa, &on_path);
    remove_structure(sb, &on_path);
  }

  // Kills a structure; vertices not on `keep` go to V'.
  void remove_structure(int s, const std::vector<char>* keep) {
    Struct& st = structs_[s];
    while (!st.spine.empty()) pop_spine(s);
    for (VertexId v = 0; v < g_.n(); ++v) {
      if (owner_[v] != s) continue;
      owner_[v] = -1;
      removed_[v] = 1;
      if (!keep || !(*keep)[v]) result_removed_.push_back(v);
    }
    for (Node& n : nodes_) {
      if (n.strct != s || n.dead) continue;
      n.dead = true;
      node_ref(n.edge, n.head) = -1;
    }
    st.status = Status::Removed;
    st.claimed = 0;
  }

  void record_collision(int a, int b) {
    bundle_collisions_.insert(std::minmax(a, b));
  }

  void prune() {
    std::vector<std::pair<int, int>> hedges(bundle_collisions_.begin(), bundle_collisions_.end());
    bundle_collisions_.clear();
    std::vector<char> used(structs_.size(), 0);
    std::vector<int> matched_structs;
    std::int64_t mh = 0;
    for (auto [a, b] : hedges) {
      if (used[a] || used[b]) continue;
      if (structs_[a].status == Status::Removed || structs_[b].status == Status::Removed) continue;
      used[a] = used[b] = 1;
      ++mh;
      matched_structs.push_back(a);
      matched_structs.push_back(b);
    }
    if (!p_.prune_fires(mh, m_.size())) return;
    for (int s : matched_structs)
      if (structs_[s].status != Status::Removed) remove_structure(s, nullptr);
  }

  void reset_iterators(int s) {
    for (Node& n : nodes_)
      if (n.strct == s && !n.dead) n.iter = 0;
  }

  void check_invariants() const {
    // structures pairwise vertex-disjoint (owner map enforces it); spot-check spine depth
    for (const Struct& st : structs_) {
      MWM_CHECK(static_cast<std::int64_t>(st.spine.size()) <= p_.ell_max,
                "active path exceeds depth limit");
      int prev = -1;
      for (int nid : st.spine) {
        MWM_CHECK(nodes_[nid].parent == prev, "spine must be a root path of the DFS tree");
        prev = nid;
      }
    }
  }

  UPhaseResult finalize() {
    UPhaseResult res;
    res.paths = std::move(result_paths_);
    res.removed = std::move(result_removed_);
    res.passes = passes_;
    for (int s = 0; s < static_cast<int>(structs_.size()); ++s) {
      Struct& st = structs_[s];
      if (st.status == Status::Removed) continue;
      StructureOut out;
      out.root = st.root;
      out.active = st.status == Status::Active || st.status == Status::Frozen;
      for (VertexId v = 0; v < g_.n(); ++v)
        if (owner_[v] == s) out.vertices.push_back(v);
      for (const Node& n : nodes_) {
        if (n.strct != s || n.dead) continue;
        out.arcs.push_back(StructureArc{n.edge, n.tail, n.head,
                                        label_[n.edge][g_.edge(n.edge).v == n.head ? 1 : 0]});
        out.entry_edges.push_back(n.entry);
      }
      if (out.active) {
        out.active_path.push_back(st.root);
        for (int nid : st.spine) {
          out.active_path.push_back(nodes_[nid].tail);
          out.active_path.push_back(nodes_[nid].head);
        }
        for (VertexId v : out.active_path) res.active.push_back(v);
      }
      res.structures.push_back(std::move(out));
    }
    std::sort(res.active.begin(), res.active.end());
    res.active.erase(std::unique(res.active.begin(), res.active.end()), res.active.end());
    std::sort(res.removed.begin(), res.removed.end());
    return res;
  }

  const WeightedGraph& g_;
  const Matching& m_;
  PhaseParams p_;
  PhaseOptions o_;

  std::vector<int> owner_;
  std::vector<char> removed_;
  std::vector<char> on_spine_;
  std::vector<std::array<int, 2>> node_of_dir_;
  std::vector<std::array<std::int64_t, 2>> label_;
  std::vector<Node> nodes_;
  std::vector<Struct> structs_;
  std::set<std::pair<int, int>> bundle_collisions_;
  std::vector<AlternatingPath> result_paths_;
  std::vector<VertexId> result_removed_;
  std::int64_t passes_ = 0;
};

}  // namespace fmu_detail

// The unweighted bounded parallel-DFS phase. Returns disjoint augmenting paths,
// removed vertices V', active-path vertices V_A and the surviving structures.
// Deterministic for identical inputs; does not modify the matching.
inline UPhaseResult alg_phase(const WeightedGraph& g, const Matching& m, const PhaseParams& params,
                              const PhaseOptions& opts = {}) {
  fmu_detail::Engine engine(g, m, params, opts);
  return engine.run();
}

}  // namespace mwm

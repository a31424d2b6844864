#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwm/blossom.hpp"
#include "mwm/graph.hpp"

namespace mwm {

// All dual quantities are exact integers counted in quanta of delta_L / 2, where
// delta_L = eps' * W / 2^L and both W and eps' are powers of two. One integer
// weight unit is then 2^(t+1) quanta for eps' = 2^-t.
struct DualConfig {
  Weight W = 1;       // rounded up to a power of two
  int L = 0;          // log2 W
  int t = 0;          // eps' = 2^-t
  int c_removed = 40; // surfaced constant for the |M'|,|F'| <= c*lambda*|M| bound

  static DualConfig from(Weight max_weight, int eps_prime_log2) {
    DualConfig cfg;
    cfg.t = eps_prime_log2;
    Weight w = 1;
    int L = 0;
    while (w < std::max<Weight>(max_weight, 1)) {
      w <<= 1;
      ++L;
    }
    cfg.W = w;
    cfg.L = L;
    return cfg;
  }

  Weight quanta(Weight weight_units) const { return weight_units << (t + 1); }
  Weight delta(int scale) const { return Weight{1} << (L - scale + 1); }
  Weight tau_start() const { return (W << t) - (Weight{1} << L); }  // W/2 - delta_0/2
  // Per-scale target: W/2^(i+2) - delta_i/2 for i < L, else 0.
  Weight tau_target(int scale) const {
    if (scale == L) return 0;
    return (W << (t + 1)) / (Weight{1} << (scale + 2)) - delta(scale) / 2;
  }
};

class DualState {
 public:
  DualState() = default;
  DualState(const WeightedGraph& g, DualConfig cfg)
      : cfg_(cfg),
        scale_(0),
        tau_(cfg.tau_start()),
        y_(g.n(), cfg.tau_start()),
        dw_(g.m(), 0),
        type_(g.m(), -1) {}

  const DualConfig& config() const { return cfg_; }
  int scale() const { return scale_; }
  Weight delta() const { return cfg_.delta(scale_); }
  Weight tau() const { return tau_; }
  Weight y(VertexId v) const { return y_[v]; }
  Weight z(BlossomId b) const {
    auto it = z_.find(b);
    return it == z_.end() ? 0 : it->second;
  }
  Weight dw(EdgeId e) const { return dw_[e]; }
  int edge_type(EdgeId e) const { return type_[e]; }
  const std::map<BlossomId, Weight>& z_map() const { return z_; }

  Weight sum_dw() const {
    Weight s = 0;
    for (Weight d : dw_) s += d;
    return s;
  }

  void set_edge_type(EdgeId e, int scale) { type_[e] = scale; }
  void set_z(BlossomId b, Weight value) { z_[b] = value; }
  void erase_z(BlossomId b) { z_.erase(b); }

  // w(e) = w_hat(e) + dw(e), in quanta.
  Weight effective_weight(const WeightedGraph& g, EdgeId e) const {
    return cfg_.quanta(g.edge(e).w) + dw_[e];
  }

  // w_i(e) = delta_i * floor(w(e) / delta_i), in quanta.
  Weight truncated_weight(const WeightedGraph& g, EdgeId e) const {
    Weight d = delta();
    return effective_weight(g, e) / d * d;
  }

  // yz(e) = y(u) + y(v) + sum of z over blossoms containing both endpoints.
  Weight yz(const WeightedGraph& g, const BlossomForest& forest, EdgeId e) const {
    const Edge& ed = g.edge(e);
    Weight total = y_[ed.u] + y_[ed.v];
    // blossoms containing both endpoints = common part of the two chains
    BlossomId a = forest.leaf_of(ed.u);
    while (a != kNoBlossom && !forest.contains(a, ed.v)) a = forest.blossom(a).parent;
    for (; a != kNoBlossom; a = forest.blossom(a).parent) total += z(a);
    return total;
  }

  // Definition 3.1 eligibility.
  bool is_eligible(const WeightedGraph& g, const Matching& m, const BlossomForest& forest,
                   EdgeId e) const {
    const Edge& ed = g.edge(e);
    BlossomId la = forest.leaf_of(ed.u);
    if (la != kNoBlossom && forest.contains(la, ed.v)) {
      // blossom-internal edge: eligible iff it is a cycle edge of some blossom
      for (BlossomId b = la; b != kNoBlossom; b = forest.blossom(b).parent) {
        const Blossom& bl = forest.blossom(b);
        for (EdgeId ce : bl.cycle_edges)
          if (ce == e) return true;
      }
      return false;
    }
    Weight lhs = yz(g, forest, e);
    Weight wi = truncated_weight(g, e);
    if (!m.contains(e)) return lhs == wi - delta();
    int j = type_[e];
    MWM_CHECK(j >= 0, "matched edge without a type tag");
    return lhs == wi + 2 * (cfg_.delta(j) - delta());
  }

  std::vector<EdgeId> eligible_subgraph(const WeightedGraph& g, const Matching& m,
                                        const BlossomForest& forest) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.m(); ++e)
      if (is_eligible(g, m, forest, e)) out.push_back(e);
    return out;
  }

  // Fig. 1 matched-edge removal: Delta-w(e) += delta_i.
  void remove_matched_edge(const WeightedGraph& g, const Matching& m, const BlossomForest& forest,
                           EdgeId e) {
    MWM_REQUIRE(m.contains(e), "remove_matched_edge: edge not matched");
    MWM_REQUIRE(is_eligible(g, m, forest, e), "remove_matched_edge: edge not eligible");
    dw_[e] += delta();
  }

  // Fig. 1 free-vertex removal: y += delta_i on the root unit, z(root) -= 2*delta_i.
  void remove_free_vertex(const WeightedGraph& g, const Matching& m, const BlossomForest& forest,
                          VertexId f) {
    MWM_REQUIRE(m.is_free(f), "remove_free_vertex: vertex not free");
    BlossomId root = forest.root_of(f);
    if (root == kNoBlossom) {
      y_[f] += delta();
      return;
    }
    for (VertexId u : forest.vertices_of(root)) y_[u] += delta();
    z_[root] -= 2 * delta();
  }

  // Fig. 1 dual adjustment. `outer`/`inner` mark G-vertices (hat-V sets).
  void dual_adjust(const std::vector<char>& outer, const std::vector<char>& inner,
                   const BlossomForest& forest) {
    int n = static_cast<int>(y_.size());
    for (VertexId v = 0; v < n; ++v)
      MWM_REQUIRE(!(outer[v] && inner[v]), "dual_adjust: overlapping inner/outer sets");
    Weight half = delta() / 2;
    tau_ -= half;
    for (VertexId v = 0; v < n; ++v) {
      if (outer[v]) y_[v] -= half;
      if (inner[v]) y_[v] += half;
    }
    for (BlossomId b : forest.roots()) {
      const auto& verts = forest.vertices_of(b);
      int out_count = 0, in_count = 0;
      for (VertexId v : verts) {
        out_count += outer[v] ? 1 : 0;
        in_count += inner[v] ? 1 : 0;
      }
      MWM_REQUIRE(out_count == 0 || out_count == static_cast<int>(verts.size()),
                  "dual_adjust: root blossom straddles the outer set");
      MWM_REQUIRE(in_count == 0 || in_count == static_cast<int>(verts.size()),
                  "dual_adjust: root blossom straddles the inner set");
      if (out_count) z_[b] += delta();
      if (in_count) z_[b] -= delta();
    }
  }

  // Fig. 1 scale transition.
  void end_of_scale() {
    MWM_REQUIRE(scale_ < cfg_.L, "end_of_scale: already at the last scale");
    Weight next_delta = delta() / 2;
    ++scale_;
    tau_ += next_delta;
    for (Weight& v : y_) v += next_delta;
  }

 private:
  DualConfig cfg_;
  int scale_ = 0;
  Weight tau_ = 0;
  std::vector<Weight> y_;
  std::map<BlossomId, Weight> z_;
  std::vector<Weight> dw_;
  std::vector<int> type_;
};

struct RcsReport {
  std::vector<std::string> violations;
  bool items56_checked = false;
  bool ok() const { return violations.empty(); }
};

// Property 3.2, all six items; items 5-6 need the exact optimum and are skipped
// (with items56_checked = false) when it is not supplied. `allow_negative_z`
// loosens the z-sign checks for mid-iteration (paranoid) validation.
inline RcsReport validate_rcs(const DualState& st, const WeightedGraph& g, const Matching& m,
                              const BlossomForest& forest,
                              std::optional<Weight> opt_weight = std::nullopt,
                              bool allow_negative_z = false) {
  RcsReport rep;
  auto fail = [&](const std::string& s) { rep.violations.push_back(s); };
  Weight d = st.delta();
  Weight half = d / 2;

  // 1. Granularity
  for (VertexId v = 0; v < g.n(); ++v) {
    if (st.y(v) < 0 || st.y(v) % half != 0)
      fail("granularity: y(" + std::to_string(v) + ") = " + std::to_string(st.y(v)));
  }
  for (const auto& [b, zv] : st.z_map()) {
    if (zv % d != 0 || (zv < 0 && !allow_negative_z))
      fail("granularity: z(" + std::to_string(b) + ") = " + std::to_string(zv));
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (st.dw(e) < 0 || st.dw(e) % d != 0)
      fail("granularity: dw(" + std::to_string(e) + ") = " + std::to_string(st.dw(e)));
  }

  // 2. Active blossoms
  for (const std::string& s : validate_laminar_full(g, m, forest)) fail("blossoms: " + s);
  for (BlossomId b : forest.roots()) {
    if (!allow_negative_z && st.z(b) <= 0)
      fail("blossoms: root " + std::to_string(b) + " has z = " + std::to_string(st.z(b)));
  }
  for (const auto& [b, zv] : st.z_map()) {
    if (!forest.is_live(b) && zv != 0)
      fail("blossoms: dissolved blossom " + std::to_string(b) + " has z != 0");
  }

  // 3. Near domination
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (st.yz(g, forest, e) < st.truncated_weight(g, e) - d)
      fail("domination: edge " + std::to_string(e));
  }

  // 4. Near tightness on matched and active-blossom-cycle edges
  auto check_tight = [&](EdgeId e) {
    int j = st.edge_type(e);
    if (j < 0) {
      fail("tightness: edge " + std::to_string(e) + " lacks a type tag");
      return;
    }
    if (st.yz(g, forest, e) > st.truncated_weight(g, e) + 2 * (st.config().delta(j) - d))
      fail("tightness: edge " + std::to_string(e) + " (type " + std::to_string(j) + ")");
  };
  for (EdgeId e = 0; e < g.m(); ++e)
    if (m.contains(e)) check_tight(e);
  for (BlossomId b = 0; b < forest.total_count(); ++b)
    if (forest.is_live(b))
      for (EdgeId e : forest.blossom(b).cycle_edges)
        if (!m.contains(e)) check_tight(e);

  // 5. Accumulated free vertex duals
  std::optional<Weight> parity;
  Weight free_sum = 0;
  Weight free_count = 0;
  for (VertexId v = 0; v < g.n(); ++v) {
    if (st.y(v) < st.tau()) fail("free duals: y(" + std::to_string(v) + ") < tau");
    if (!m.is_free(v)) continue;
    ++free_count;
    free_sum += st.y(v);
    Weight p = (st.y(v) / half) % 2;
    if (!parity)
      parity = p;
    else if (*parity != p)
      fail("free duals: mixed parity at vertex " + std::to_string(v));
  }
  if (opt_weight) {
    rep.items56_checked = true;
    // eps' * w(M*) in quanta equals 2 * w(M*) for any eps' = 2^-t.
    if (free_sum > st.tau() * free_count + 2 * *opt_weight)
      fail("free duals: accumulated sum exceeds tau*|F| + eps'*OPT");
    // 6. Bounded weight change
    if (st.sum_dw() > 2 * *opt_weight) fail("bounded weight change: sum dw exceeds eps'*OPT");
  }
  return rep;
}

}  // namespace mwm

#include <catch2/catch_amalgamated.hpp>

#include "mwm/duals.hpp"
#include "mwm/oracle.hpp"
#include "support.hpp"

using namespace mwm;
using namespace testsupport;

namespace {

// Naive floor-to-multiple oracle by repeated subtraction.
Weight naive_truncate(Weight w, Weight d) {
  Weight r = 0;
  while (r + d <= w) r += d;
  return r;
}

}  // namespace

TEST_CASE("DualConfig derived quantities") {
  // W=8, eps'=1/2: L=3, delta_0 = eps'*W = 4
  auto cfg = DualConfig::from(8, 1);
  CHECK(cfg.W == 8);
  CHECK(cfg.L == 3);
  CHECK(cfg.quanta(1) == 4);            // one weight unit = 2^(t+1) quanta
  CHECK(cfg.delta(0) == cfg.quanta(4)); // delta_0 = 4 weight units
  CHECK(cfg.delta(3) == 2);             // delta_L = two quanta by definition
  for (int i = 0; i < 3; ++i) CHECK(cfg.delta(i + 1) * 2 == cfg.delta(i));
  // tau_0 = W/2 - delta_0/2 = 4 - 2 = 2 weight units
  CHECK(cfg.tau_start() == cfg.quanta(2));
}

TEST_CASE("effective and truncated weight") {
  auto g = build(2, {{0, 1, 7}});
  auto cfg = DualConfig::from(8, 1);
  DualState st(g, cfg);

  SECTION("dw = 0 gives w-hat") {
    CHECK(st.effective_weight(g, 0) == cfg.quanta(7));
  }
  SECTION("W=8 eps'=1/2 scale 0: w=7 truncates to 4") {
    CHECK(st.truncated_weight(g, 0) == cfg.quanta(4));
  }
  SECTION("multiples of delta_i are fixed points") {
    auto g2 = build(2, {{0, 1, 4}});
    DualState st2(g2, cfg);
    CHECK(st2.truncated_weight(g2, 0) == cfg.quanta(4));
  }
  SECTION("randomized truncation vs naive subtraction oracle") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
      Weight w = rng.range(1, 64);
      auto gg = build(2, {{0, 1, w}});
      auto c2 = DualConfig::from(64, 2);
      DualState s2(gg, c2);
      int scale = static_cast<int>(rng.below(c2.L + 1));
      for (int j = 0; j < scale; ++j) s2.end_of_scale();
      CHECK(s2.truncated_weight(gg, 0) == naive_truncate(c2.quanta(w), c2.delta(scale)));
    }
  }
}

TEST_CASE("yz over nested blossoms vs brute force") {
  Rng rng(7);
  auto inst = make_blossom_instance(rng, 3, 2, 2, 10, 4);
  auto cfg = DualConfig::from(4, 1);
  DualState st(inst.graph, cfg);
  for (BlossomId b = 0; b < inst.forest.total_count(); ++b)
    if (inst.forest.is_live(b)) st.set_z(b, cfg.delta(0) * (1 + b % 3));

  for (EdgeId e = 0; e < inst.graph.m(); ++e) {
    const Edge& ed = inst.graph.edge(e);
    Weight want = st.y(ed.u) + st.y(ed.v);
    for (BlossomId b = 0; b < inst.forest.total_count(); ++b)
      if (inst.forest.is_live(b) && inst.forest.contains(b, ed.u) && inst.forest.contains(b, ed.v))
        want += st.z(b);
    CHECK(st.yz(inst.graph, inst.forest, e) == want);
  }
}

TEST_CASE("eligibility clauses") {
  auto cfg = DualConfig::from(8, 1);

  SECTION("blossom cycle edges are always eligible") {
    auto g = build(3, {{0, 1, 8}, {1, 2, 8}, {2, 0, 8}});
    auto m = match(g, {1});
    BlossomForest f(3);
    f.add_blossom({BlossomChild::of_vertex(0), BlossomChild::of_vertex(1), BlossomChild::of_vertex(2)},
                  {0, 1, 2}, 0);
    DualState st(g, cfg);
    st.set_edge_type(1, 0);
    for (EdgeId e = 0; e < 3; ++e) CHECK(st.is_eligible(g, m, f, e));
  }

  SECTION("unmatched edge eligible exactly at yz = w_i - delta_i") {
    // initial duals y = W/2 - delta_0/2 make full-weight edges exactly eligible
    auto g = build(2, {{0, 1, 8}});
    Matching m(g);
    BlossomForest f(2);
    DualState st(g, cfg);
    CHECK(st.yz(g, f, 0) == cfg.quanta(4));
    CHECK(st.truncated_weight(g, 0) == cfg.quanta(8));
    CHECK(st.yz(g, f, 0) == st.truncated_weight(g, 0) - st.delta());
    CHECK(st.is_eligible(g, m, f, 0));
    // after an outer-outer dual adjustment yz drops below the threshold
    std::vector<char> outer(2, 1), inner(2, 0);
    st.dual_adjust(outer, inner, f);
    CHECK(!st.is_eligible(g, m, f, 0));
  }

  SECTION("matched edge without tag is a structural error") {
    auto g = build(2, {{0, 1, 8}});
    auto m = match(g, {0});
    BlossomForest f(2);
    DualState st(g, cfg);
    CHECK_THROWS_AS(st.is_eligible(g, m, f, 0), StructuralError);
  }

  SECTION("empty matching leaves clauses 1 and 3 vacuous") {
    Rng rng(11);
    auto g = random_graph(rng, 6, 1, 2, 8);
    Matching m(g);
    BlossomForest f(6);
    DualState st(g, cfg);
    auto elig = st.eligible_subgraph(g, m, f);
    for (EdgeId e : elig) CHECK(st.yz(g, f, e) == st.truncated_weight(g, e) - st.delta());
  }
}

TEST_CASE("remove_matched_edge makes the edge ineligible, keeps domination") {
  auto cfg = DualConfig::from(8, 1);
  auto g = build(2, {{0, 1, 4}});
  auto m = match(g, {0});
  BlossomForest f(2);
  DualState st(g, cfg);
  st.set_edge_type(0, 0);
  REQUIRE(st.yz(g, f, 0) == cfg.quanta(4));
  REQUIRE(st.is_eligible(g, m, f, 0));
  st.remove_matched_edge(g, m, f, 0);
  CHECK(st.dw(0) == cfg.delta(0));
  CHECK(!st.is_eligible(g, m, f, 0));
  CHECK(st.yz(g, f, 0) >= st.truncated_weight(g, 0) - st.delta());
  CHECK(st.yz(g, f, 0) <= st.truncated_weight(g, 0) + 2 * (cfg.delta(0) - st.delta()));
  CHECK_THROWS_AS(st.remove_matched_edge(g, m, f, 0), PreconditionError);
}

TEST_CASE("remove_free_vertex") {
  auto cfg = DualConfig::from(8, 1);

  SECTION("trivial root bumps only y(f)") {
    auto g = build(2, {{0, 1, 8}});
    Matching m(g);
    BlossomForest f(2);
    DualState st(g, cfg);
    Weight y0 = st.y(0);
    st.remove_free_vertex(g, m, f, 0);
    CHECK(st.y(0) == y0 + st.delta());
    CHECK(st.y(1) == y0);
  }

  SECTION("3-blossom root: three y bumps, z -= 2 delta, internal yz unchanged") {
    auto g = build(4, {{0, 1, 8}, {1, 2, 8}, {2, 0, 8}, {1, 3, 8}});
    auto m = match(g, {1});
    BlossomForest f(4);
    BlossomId b = f.add_blossom(
        {BlossomChild::of_vertex(0), BlossomChild::of_vertex(1), BlossomChild::of_vertex(2)},
        {0, 1, 2}, 0);
    DualState st(g, cfg);
    st.set_z(b, 4 * st.delta());
    Weight yz_internal_before[3] = {st.yz(g, f, 0), st.yz(g, f, 1), st.yz(g, f, 2)};
    Weight yz_leaving_before = st.yz(g, f, 3);
    st.remove_free_vertex(g, m, f, 0);
    CHECK(st.z(b) == 2 * st.delta());
    for (EdgeId e = 0; e < 3; ++e) CHECK(st.yz(g, f, e) == yz_internal_before[e]);
    CHECK(st.yz(g, f, 3) == yz_leaving_before + st.delta());
  }

  SECTION("isolation: incident eligible unmatched edges fail clause 2 afterwards") {
    auto g = build(2, {{0, 1, 8}});
    Matching m(g);
    BlossomForest f(2);
    DualState st(g, cfg);
    REQUIRE(st.is_eligible(g, m, f, 0));
    st.remove_free_vertex(g, m, f, 0);
    CHECK(!st.is_eligible(g, m, f, 0));
  }
}

TEST_CASE("dual_adjust") {
  auto cfg = DualConfig::from(8, 1);

  SECTION("single free outer vertex drops by delta/2") {
    auto g = build(1, {});
    BlossomForest f(1);
    DualState st(g, cfg);
    Weight y0 = st.y(0);
    Weight tau0 = st.tau();
    st.dual_adjust({1}, {0}, f);
    CHECK(st.y(0) == y0 - cfg.delta(0) / 2);
    CHECK(st.tau() == tau0 - cfg.delta(0) / 2);
  }

  SECTION("matched eligible edge with one inner one outer endpoint keeps yz") {
    auto g = build(2, {{0, 1, 8}});
    BlossomForest f(2);
    DualState st(g, cfg);
    Weight before = st.yz(g, f, 0);
    st.dual_adjust({1, 0}, {0, 1}, f);
    CHECK(st.yz(g, f, 0) == before);
  }

  SECTION("overlap rejected") {
    auto g = build(1, {});
    BlossomForest f(1);
    DualState st(g, DualConfig::from(2, 1));
    CHECK_THROWS_AS(st.dual_adjust({1}, {1}, f), PreconditionError);
  }

  SECTION("straddling root blossom rejected") {
    auto g = build(3, {{0, 1, 2}, {1, 2, 2}, {2, 0, 2}});
    auto m = match(g, {1});
    BlossomForest f(3);
    f.add_blossom({BlossomChild::of_vertex(0), BlossomChild::of_vertex(1), BlossomChild::of_vertex(2)},
                  {0, 1, 2}, 0);
    DualState st(g, DualConfig::from(2, 1));
    CHECK_THROWS_AS(st.dual_adjust({1, 0, 0}, {0, 0, 0}, f), PreconditionError);
  }

  SECTION("hand-computed full adjustment on a 6-vertex instance") {
    auto g = build(6, {{0, 1, 8}, {1, 2, 8}, {2, 3, 8}, {3, 4, 8}, {4, 5, 8}});
    auto m = match(g, {1, 3});
    BlossomForest f(6);
    DualState st(g, cfg);
    std::vector<char> outer = {1, 0, 1, 0, 1, 1};
    std::vector<char> inner = {0, 1, 0, 1, 0, 0};
    Weight y0 = st.y(0);
    st.dual_adjust(outer, inner, f);
    Weight h = cfg.delta(0) / 2;
    CHECK(st.y(0) == y0 - h);
    CHECK(st.y(1) == y0 + h);
    CHECK(st.y(2) == y0 - h);
    CHECK(st.y(3) == y0 + h);
    CHECK(st.y(4) == y0 - h);
    CHECK(st.y(5) == y0 - h);
    CHECK(st.yz(g, f, 1) == 2 * y0);
    CHECK(st.yz(g, f, 3) == 2 * y0);
  }
}

TEST_CASE("end_of_scale") {
  auto cfg = DualConfig::from(8, 1);
  auto g = build(2, {{0, 1, 5}});
  BlossomForest f(2);
  DualState st(g, cfg);

  SECTION("delta halves down to eps'") {
    CHECK(st.delta() == cfg.quanta(4));
    st.end_of_scale();
    CHECK(st.delta() == cfg.quanta(2));
    st.end_of_scale();
    CHECK(st.delta() == cfg.quanta(1));
    st.end_of_scale();
    CHECK(st.scale() == cfg.L);
    CHECK(st.delta() == 2);  // eps' = half a weight unit = 2 quanta
    CHECK_THROWS_AS(st.end_of_scale(), PreconditionError);
  }

  SECTION("y parity preserved across the transition") {
    Weight y0 = st.y(0);
    st.end_of_scale();
    CHECK(st.y(0) == y0 + st.delta());
    CHECK(st.y(0) % (st.delta() / 2) == 0);
  }
}

TEST_CASE("validate_rcs") {
  auto cfg = DualConfig::from(8, 1);
  auto g = build(4, {{0, 1, 8}, {1, 2, 6}, {2, 3, 8}});
  Matching m(g);
  BlossomForest f(4);

  SECTION("fresh initialization passes") {
    DualState st(g, cfg);
    auto rep = validate_rcs(st, g, m, f);
    CHECK(rep.ok());
    CHECK(!rep.items56_checked);
  }

  SECTION("items 5-6 checked with oracle OPT") {
    DualState st(g, cfg);
    auto opt = exact_mwm(g);
    auto rep = validate_rcs(st, g, m, f, opt.opt);
    CHECK(rep.ok());
    CHECK(rep.items56_checked);
  }

  SECTION("granularity violation reported for sub-granular z") {
    DualState st(g, cfg);
    auto mm = match(g, {0, 2});
    BlossomForest f2(4);
    st.set_z(0, 1);  // one quantum; not a multiple of delta_0
    // the blossom does not even exist; both granularity and blossom bookkeeping complain
    auto rep = validate_rcs(st, g, m, f2);
    CHECK(!rep.ok());
  }

  SECTION("RCS stays green across a scale transition") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
      auto gg = random_graph(rng, 8, 1, 2, 16);
      Matching mm(gg);
      BlossomForest ff(8);
      DualState st(gg, DualConfig::from(16, 2));
      CHECK(validate_rcs(st, gg, mm, ff).ok());
      st.end_of_scale();
      CHECK(validate_rcs(st, gg, mm, ff).ok());
    }
  }
}

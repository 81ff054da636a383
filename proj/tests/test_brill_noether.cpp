#include "cactus/brill_noether.hpp"
#include "cactus/errors.hpp"
#include "cactus/random_cactus.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cactus;
using namespace test_support;

TEST_CASE("rho spot values") {
  CHECK(rho(4, 1, 3) == 0);
  CHECK(rho(6, 1, 3) == -2);
  CHECK(rho(5, 1, 3) == -1);
  for (int g = 1; g <= 8; ++g) CHECK(rho(g, 0, 0) == 0);
}

TEST_CASE("scan: star stratum {A, B, free central chip} is fully marked") {
  auto star = graph("star.graph");
  ScanOptions opts;
  opts.grid = 64;
  opts.max_free = 1;
  auto rep = stratified_scan(star, 1, 3, opts);
  CHECK(rep.found_positive_dimensional);
  const PointRef a{0, q("1/4")}, b{0, q("3/4")};
  bool seen = false;
  for (const Stratum& s : rep.strata) {
    if (s.free_loops == std::vector<LoopIndex>{0} && s.fixed == std::vector<std::pair<PointRef, Multiplicity>>{{a, 1}, {b, 1}}) {
      seen = true;
      CHECK(s.rows.size() == 64);
      for (const ScanRow& row : s.rows) CHECK(row.marked);
      CHECK(s.longest_run == 64);
    }
  }
  CHECK(seen);
  // Marked points re-verify independently of the scan.
  RankEngine fresh(star);
  int rechecked = 0;
  for (const Stratum& s : rep.strata) {
    for (std::size_t k = 0; k < s.rows.size(); k += 7) {
      const Divisor d = stratum_divisor(star, s, s.rows[k].grid_point, rep.grid);
      CHECK(fresh.has_rank_at_least(d, 1) == s.rows[k].marked);
      ++rechecked;
    }
  }
  CHECK(rechecked > 0);
}

TEST_CASE("scan: generic chain of four loops has no marked run") {
  ScanOptions opts;
  opts.grid = 16;
  opts.max_free = 3;
  opts.budget = 1000000;
  CHECK_FALSE(stratified_scan(graph("path4.graph"), 1, 3, opts).found_positive_dimensional);
}

TEST_CASE("scan: r = 0, d = 1 marks everything; caps are enforced") {
  auto g = graph("chain.graph");
  ScanOptions opts;
  opts.grid = 8;
  auto rep = stratified_scan(g, 0, 1, opts);
  for (const Stratum& s : rep.strata)
    for (const ScanRow& row : s.rows) CHECK(row.marked);
  opts.budget = 3;
  CHECK_THROWS_AS(stratified_scan(g, 0, 1, opts), ResourceCapError);
  opts.max_free = 4;
  CHECK_THROWS_AS(stratified_scan(g, 0, 1, opts), InputError);
}

TEST_CASE("scan CSV layout") {
  ScanOptions opts;
  opts.grid = 4;
  auto g = graph("circle.graph");
  auto csv = scan_csv(*g, stratified_scan(g, 1, 2, opts));
  CHECK(csv.rfind("stratum_id,pattern,coord_names,grid_point,rank,marked\n", 0) == 0);
  CHECK(csv.find("0,L1:0*2,,,1,1\n") != std::string::npos);
  CHECK(csv.find(",free:L1,L1,1/2,") == std::string::npos);
  CHECK(csv.find("L1:0*1 free:L1,L1,1/2,1,1\n") != std::string::npos);
}

TEST_CASE("probe: star family is one-dimensional") {
  auto star = graph("star.graph");
  auto d = star_family_divisor(star, q("1/8"));
  CHECK(d == load_divisor(star, data_path("dtheta.div")));
  auto probe = local_dim_probe(d, 1);
  CHECK(probe.estimated_local_dim == 1);
  CHECK(probe.persistent_directions == std::vector<LoopIndex>{0});
  CHECK(probe.rows.size() == 10 * 16);
}

TEST_CASE("probe: circle degree 2 fills the torus") {
  auto circle = graph("circle.graph");
  auto probe = local_dim_probe(div(circle, "chip L1 1/5 1\nchip L1 2/3 1\n"), 1);
  CHECK(probe.estimated_local_dim == 1);
  CHECK_THROWS_AS(local_dim_probe(div(circle, "chip L1 1/5 1\n"), 1), InputError);
}

TEST_CASE("probe: star plus a glued loop reaches dimension 2") {
  auto star = graph("star.graph");
  auto g = wedge_with_loop(*star, PointRef{1, q("1/3")}, q("4/7"));
  Divisor d(g);
  const Divisor family = star_family_divisor(star, q("1/8"));
  for (const auto& [p, m] : family.chips()) d.add(p.loop, p.offset, m);
  d.add(4, q("2/7"), 1);
  ProbeOptions opts;
  opts.subset_limit = 3;
  CHECK(local_dim_probe(d, 1, opts).estimated_local_dim == 2);
}

TEST_CASE("probe: persistent subsets are downward closed") {
  Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    auto g = random_cactus(rng, 2 + trial % 2);
    auto d = random_effective_divisor(rng, g, 2 + trial % 2);
    RankEngine engine(g);
    const int r = engine.rank(d).rank;
    if (r < 1) continue;
    ProbeOptions opts;
    opts.subset_limit = 3;
    auto probe = local_dim_probe(engine, d, r, opts);
    for (const auto& s : probe.persistent_subsets) {
      for (std::size_t drop = 0; drop < s.size() && s.size() > 1; ++drop) {
        std::vector<LoopIndex> sub = s;
        sub.erase(sub.begin() + drop);
        CHECK(std::find(probe.persistent_subsets.begin(), probe.persistent_subsets.end(), sub) !=
              probe.persistent_subsets.end());
      }
    }
  }
}

TEST_CASE("Brill-Noether rank bounds") {
  auto circle = graph("circle.graph");
  auto b = bn_rank_bounds(circle, 1, 2);
  CHECK(b.lower == 1);
  CHECK(b.upper == 1);
  auto empty = bn_rank_bounds(circle, 1, 1);
  CHECK(empty.lower == -1);
  CHECK(empty.upper == -1);
  REQUIRE(empty.counterexample_E);
  CHECK(empty.counterexample_E->degree() == 1 + empty.upper + 1);

  auto chain = bn_rank_bounds(graph("chain.graph"), 1, 3);
  CHECK(chain.lower >= 1);
  CHECK(chain.upper <= 2);
  CHECK(chain.lower <= chain.upper);

  BoundsOptions tiny;
  tiny.budget = 1;
  auto widened = bn_rank_bounds(graph("chain.graph"), 1, 3, tiny);
  CHECK(widened.widened);
  CHECK(widened.lower <= widened.upper);
}

TEST_CASE("Brill-Noether rank on the circle follows d - r") {
  auto circle = graph("circle.graph");
  for (int r = 0; r <= 2; ++r) {
    for (int d = 0; d <= 4; ++d) {
      auto b = bn_rank_bounds(circle, r, d);
      CAPTURE(r);
      CAPTURE(d);
      const int expected = (d >= r + 1 || (r == 0 && d == 0)) ? d - r : -1;
      CHECK(b.lower == expected);
      CHECK(b.upper == expected);
    }
  }
}

TEST_CASE("lemma verifier") {
  auto rep = verify_lemma_w13(graph("star.graph"), 64);
  CHECK(rep.verified());
  CHECK(rep.verdict == "not geometric Brill-Noether general");
  auto star = graph("star.graph");
  const Divisor degenerate = star_family_divisor(star, q("0"));
  CHECK(degenerate.at(PointRef{0, q("1/4")}) == 2);
  CHECK(RankEngine(star).has_rank_at_least(degenerate, 1));
  CHECK_THROWS_AS(verify_lemma_w13(graph("path4.graph")), InputError);
}

TEST_CASE("weak generality verifier, both parities") {
  auto even = verify_prop_weak(graph("g6tree.graph"));
  CHECK(even.verified());
  CHECK(std::find(even.facts.begin(), even.facts.end(), std::pair<std::string, std::string>{"rho", "-2"}) != even.facts.end());
  auto odd = verify_prop_weak(graph("g5tree.graph"));
  CHECK(odd.verified());
  CHECK(std::find(odd.facts.begin(), odd.facts.end(), std::pair<std::string, std::string>{"rho", "-1"}) != odd.facts.end());
  CHECK(odd.verdict == "not weakly geometric Brill-Noether general");
  CHECK_THROWS_AS(verify_prop_weak(graph("path4.graph")), InputError);
}

TEST_CASE("wedge and sandwich verifiers") {
  auto circle = graph("circle.graph");
  WedgeDimOptions opts;
  opts.samples = 20;
  auto w = verify_wedge_dim(circle, PointRef{0, q("1/3")}, q("1"), 1, 2, {div(circle, "chip L1 1/7 2\n")}, opts);
  CHECK(w.verified());
  auto found = verify_wedge_dim(circle, PointRef{0, q("0")}, q("3/4"), 1, 2, {}, opts);
  CHECK(found.verified());
  CHECK_THROWS_AS(verify_wedge_dim(circle, PointRef{0, q("0")}, q("1"), 1, 1, {}, opts), InputError);

  auto s = verify_rank_sandwich(circle, PointRef{0, q("0")}, q("1"), 1, 2);
  CHECK(s.verified());
  CHECK_THROWS_AS(verify_rank_sandwich(circle, PointRef{0, q("0")}, q("1"), 1, 1), InputError);
  CHECK(verify_rank_sandwich(graph("chain.graph"), PointRef{1, q("1/3")}, q("2/3"), 1, 3).verified());
}

TEST_CASE("tree chain verifier") {
  auto star = graph("star.graph");
  auto base = verify_tree_chain(star, 0);
  CHECK(base.verified());
  auto two = verify_tree_chain(star, 2);
  CHECK(two.verified());
  CHECK(two.checks.size() == 6);
  CHECK_THROWS_AS(verify_tree_chain(star, -1), InputError);
}

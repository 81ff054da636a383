#include "cactus/errors.hpp"
#include "cactus/random_cactus.hpp"
#include "cactus/reduction.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cactus;
using namespace test_support;

namespace {

// Random continuous PL function: on each loop a bump with slopes s1 on
// [0, a] and -s2 on [a, b], flat elsewhere, lifted by the value at the
// loop's attachment point.
Rational eval_loop(const PLFunction::Breakpoints& bp, const Rational& c, const Rational& x) {
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const auto& [xa, va] = bp[k];
    const Rational xb = k + 1 < bp.size() ? bp[k + 1].first : c;
    const Rational vb = k + 1 < bp.size() ? bp[k + 1].second : bp[0].second;
    if (x >= xa && x <= xb) return va + (vb - va) * (x - xa) / (xb - xa);
  }
  return bp[0].second;
}

PLFunction random_pl_function(Rng& rng, const GraphPtr& g) {
  std::vector<PLFunction::Breakpoints> loops(g->genus());
  std::vector<LoopIndex> order{g->root()};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (LoopIndex c : g->children(order[k])) order.push_back(c);
  std::uniform_int_distribution<int> pick(1, 2), flip(0, 1);
  for (LoopIndex i : order) {
    const Rational& c = g->circumference(i);
    Rational start = 0;
    if (i != g->root()) start = eval_loop(loops[g->parent(i)], g->circumference(g->parent(i)), g->attach_offset(i));
    Rational a = random_offset(rng, Rational(c / 4));
    if (a == 0) {
      loops[i] = {{Rational(0), start}};
      continue;
    }
    const int s1 = pick(rng) * (flip(rng) ? 1 : -1);
    const int s2 = pick(rng);
    const Rational b = a + a * std::abs(s1) / s2;
    loops[i] = {{Rational(0), start}, {a, start + s1 * a}, {b, start}};
  }
  return PLFunction(g, loops);
}

}  // namespace

TEST_CASE("divisor_combine") {
  auto g = graph("star.graph");
  auto a = div(g, "chip L1 1/4 1\nchip L1 3/4 1\n");
  auto b = div(g, "chip L1 1/4 1\n");
  CHECK(divisor_combine(a, b, 1, -1) == div(g, "chip L1 3/4 1\n"));
  CHECK(divisor_combine(a, a, 1, -1).empty());
  CHECK(a + Divisor(g) == a);
  CHECK(divisor_combine(a, b, 2, 3).degree() == 7);
  CHECK_THROWS_AS(divisor_combine(a, Divisor(graph("chain.graph")), 1, 1), InputError);
}

TEST_CASE("restrict") {
  auto g = graph("star.graph");
  auto d = load_divisor(g, data_path("dtheta.div"));
  CHECK(restrict(d, {g->loop_index("L1")}).degree() == 3);
  CHECK(restrict(d, {0, 1, 2, 3}) == d);
  auto c = graph("chain.graph");
  auto e = div(c, "chip L1 0 2\nchip L2 3/4 1\n");
  CHECK(restrict(e, {c->loop_index("L2")}) == div(c, "chip L2 3/4 1\n"));
  CHECK_THROWS_AS(restrict(e, {5}), InputError);
  CHECK_THROWS_AS(restrict(e, {}), InputError);
}

TEST_CASE("divisor of a tent and of a capped distance") {
  auto circle = graph("circle.graph");
  PLFunction tent(circle, {{{q("0"), q("0")}, {q("1/4"), q("1/4")}, {q("1/2"), q("0")}}});
  CHECK(divisor_of_function(tent) == div(circle, "chip L1 0 1\nchip L1 1/2 1\nchip L1 1/4 -2\n"));
  CHECK(divisor_of_function(PLFunction::constant(circle, q("3"))).empty());

  auto chain = graph("chain.graph");
  PLFunction capped(chain, {{{q("0"), q("0")}, {q("1/4"), q("1/4")}, {q("3/4"), q("1/4")}},
                            {{q("0"), q("1/4")}}});
  CHECK(divisor_of_function(capped) == div(chain, "chip L1 0 2\nchip L1 1/4 -1\nchip L1 3/4 -1\n"));
}

TEST_CASE("PL functions reject bad data") {
  auto circle = graph("circle.graph");
  CHECK_THROWS_AS(PLFunction(circle, {{{q("0"), q("0")}, {q("1/3"), q("1/2")}}}), InputError);
  auto chain = graph("chain.graph");
  CHECK_THROWS_AS(PLFunction(chain, {{{q("0"), q("0")}}, {{q("0"), q("1")}}}), InputError);
  CHECK_THROWS_AS(PLFunction(chain, {{{q("0"), q("0")}}}), InputError);
}

TEST_CASE("class coordinates") {
  auto chain = graph("chain.graph");
  auto d = load_divisor(chain, data_path("chain_d.div"));
  auto cls = class_coordinates(d);
  CHECK(cls.degree == 3);
  CHECK(cls.mu == std::vector<Rational>{q("1/2"), q("3/4")});
  auto zero = class_coordinates(Divisor(chain));
  CHECK(zero.degree == 0);
  CHECK(zero.mu == std::vector<Rational>{q("0"), q("0")});

  auto rep = representative_from_class(chain, cls);
  CHECK(class_coordinates(rep) == cls);
  CHECK(rep.at(chain->base_point()) >= 1);

  auto circle = graph("circle.graph");
  CHECK(representative_from_class(circle, class_coordinates(Divisor(circle))).empty());

  auto star = graph("star.graph");
  auto dt = load_divisor(star, data_path("dtheta.div"));
  CHECK(class_coordinates(representative_from_class(star, class_coordinates(dt))) == class_coordinates(dt));
}

TEST_CASE("canonical divisors") {
  auto star = graph("star.graph");
  CHECK(canonical_divisor(star) == div(star, "chip L1 1/4 2\nchip L1 3/4 2\nchip L1 1/2 2\n"));
  CHECK(canonical_divisor(graph("circle.graph")).empty());
  CHECK(canonical_divisor(graph("chain.graph")) == div(graph("chain.graph"), "chip L1 1/2 2\n"));
}

TEST_CASE("random: round trip, principal invariance, restrict partition, equivalence soundness") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const long grid = trial % 2 ? 0 : 24;
    auto g = random_cactus(rng, 1 + trial % 5, grid, trial % 3 == 0);
    auto d = random_divisor(rng, g, trial % 7 - 3, 2, grid);
    auto cls = class_coordinates(d);
    CHECK(class_coordinates(representative_from_class(g, cls)) == cls);

    auto f = random_pl_function(rng, g);
    auto principal = divisor_of_function(f);
    CHECK(principal.degree() == 0);
    CHECK(class_coordinates(d + principal) == cls);
    CHECK(q_reduce(d + principal, g->base_point()) == q_reduce(d, g->base_point()));

    std::set<LoopIndex> left, right;
    for (LoopIndex i = 0; i < g->genus(); ++i) (i % 2 ? left : right).insert(i);
    Multiplicity sum = restrict(d, right).degree();
    if (!left.empty()) sum += restrict(d, left).degree();
    CHECK(sum == d.degree());

    // Equivalence soundness in both directions.
    auto e = random_divisor(rng, g, d.degree(), 1, grid);
    const bool same_class = class_coordinates(e) == cls;
    const bool same_reduction = q_reduce(e, g->base_point()) == q_reduce(d, g->base_point());
    CHECK(same_class == same_reduction);
    auto e2 = representative_from_class(g, cls);
    CHECK(q_reduce(e2, g->base_point()) == q_reduce(d, g->base_point()));
  }
}

TEST_CASE("divisor file parsing") {
  auto chain = graph("chain.graph");
  auto d = div(chain, "chip L2 1/4 2\nchip L2 1/4 1 # repeated lines add\n");
  CHECK(d.at(PointRef{chain->loop_index("L2"), q("1/4")}) == 3);
  CHECK(parse_divisor(chain, format_divisor(d)) == d);
  CHECK_THROWS_AS(div(chain, "chip L9 0 1\n"), ParseError);
  CHECK_THROWS_AS(div(chain, "chip L1 1 1\n"), ParseError);
  CHECK_THROWS_AS(div(chain, "chip L1 0 0\n"), ParseError);
  CHECK_THROWS_AS(div(chain, "chip L1 0 x\n"), ParseError);
}

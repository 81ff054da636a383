#include "cactus/random_cactus.hpp"

namespace cactus {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

}  // namespace

Rational random_circumference(Rng& rng, long grid) {
  if (grid > 0) {
    Rational c(uniform(rng, 1, 2 * grid), grid);
    c.canonicalize();
    return c;
  }
  const long den = uniform(rng, 1000, 9999);
  Rational c(uniform(rng, den / 2, 2 * den), den);
  c.canonicalize();
  return c;
}

Rational random_offset(Rng& rng, const Rational& circumference, long grid) {
  const Integer den = grid > 0 ? Integer(grid) : Integer(uniform(rng, 1000, 9999));
  const Integer steps = -floor(Rational(-circumference * den));
  Rational x(Integer(uniform(rng, 0, steps.get_si() - 1)), den);
  x.canonicalize();
  return x;
}

GraphPtr random_cactus(Rng& rng, int genus, long grid, bool random_base) {
  GraphSpec spec;
  for (int k = 0; k < genus; ++k) {
    LoopSpec loop;
    loop.name = "L" + std::to_string(k + 1);
    loop.circumference = random_circumference(rng, grid);
    if (k > 0) {
      const auto& parent = spec.loops[uniform(rng, 0, k - 1)];
      loop.parent = parent.name;
      loop.parent_offset = random_offset(rng, parent.circumference, grid);
    }
    spec.loops.push_back(std::move(loop));
  }
  if (random_base) {
    const auto& loop = spec.loops[uniform(rng, 0, genus - 1)];
    spec.base_loop = loop.name;
    spec.base_offset = random_offset(rng, loop.circumference, grid);
  }
  return CactusGraph::build(spec);
}

PointRef random_point(Rng& rng, const CactusGraph& graph, long grid) {
  const LoopIndex i = static_cast<LoopIndex>(uniform(rng, 0, graph.genus() - 1));
  return graph.canonical_point(i, random_offset(rng, graph.circumference(i), grid));
}

Divisor random_divisor(Rng& rng, const GraphPtr& graph, long degree, int pairs, long grid) {
  Divisor d(graph);
  const Multiplicity sign = degree < 0 ? -1 : 1;
  for (long k = 0; k < (degree < 0 ? -degree : degree); ++k) d.add(random_point(rng, *graph, grid), sign);
  for (int k = 0; k < pairs; ++k) {
    d.add(random_point(rng, *graph, grid), 1);
    d.add(random_point(rng, *graph, grid), -1);
  }
  return d;
}

Divisor random_effective_divisor(Rng& rng, const GraphPtr& graph, long degree, long grid) {
  return random_divisor(rng, graph, degree, 0, grid);
}

}  // namespace cactus

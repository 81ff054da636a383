#pragma once

#include <random>

#include "cactus/divisor.hpp"

namespace cactus {

using Rng = std::mt19937_64;

/// Random data generators. With grid == 0 every rational gets an unrelated
/// four-digit denominator, which makes accidental coincidences unlikely;
/// with grid > 0 all lengths and offsets are multiples of 1/grid.
Rational random_circumference(Rng& rng, long grid = 0);
Rational random_offset(Rng& rng, const Rational& circumference, long grid = 0);

/// Random tree shape: loop k is glued to a uniformly chosen earlier loop.
/// The base point is the root origin or, when random_base is set, a random point.
GraphPtr random_cactus(Rng& rng, int genus, long grid = 0, bool random_base = false);

PointRef random_point(Rng& rng, const CactusGraph& graph, long grid = 0);

/// |degree| signed unit chips plus `pairs` cancelling (+1, -1) pairs, all at
/// random points.
Divisor random_divisor(Rng& rng, const GraphPtr& graph, long degree, int pairs, long grid = 0);

/// Random effective divisor of the given degree.
Divisor random_effective_divisor(Rng& rng, const GraphPtr& graph, long degree, long grid = 0);

}  // namespace cactus

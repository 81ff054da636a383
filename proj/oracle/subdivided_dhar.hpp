#pragma once

#include <cstddef>

#include "cactus/divisor.hpp"

namespace cactus::oracle {

/// Reference v-reduction through the discrete graph: all data is scaled by
/// the common denominator, every loop is cut into unit edges, the divisor is
/// made effective away from v by greedy borrowing (v never borrows), and
/// Dhar's integer burning algorithm fires unburnt sets one chip at a time.
/// Throws ResourceCapError when the subdivision exceeds `max_vertices`.
Divisor subdivided_reduce(const Divisor& d, const PointRef& v, std::size_t max_vertices = 200000);

}  // namespace cactus::oracle

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cactus/divisor.hpp"

namespace cactus {

/// Chips on a single circle, as (offset, multiplicity) pairs.
using CircleChips = std::vector<std::pair<Rational, Multiplicity>>;

/// v-reduced form of a divisor on one circle of circumference c: with degree
/// d and mu = sum(mult * offset) mod c, the result is d(v) when mu = d*v and
/// (d-1)(v) + (p) otherwise, p = mu - (d-1)v mod c. Sorted by offset.
CircleChips circle_reduce(const Rational& circumference, const CircleChips& chips, const Rational& v);

/// Closed-form v-reduction: loops are reduced toward their exit point (the
/// point nearest v) from the farthest loop inward, each exit collecting the
/// pile of the loop behind it.
Divisor q_reduce(const Divisor& d, const PointRef& v);

/// Closed arc on one loop starting at `start` and running `length` along the
/// loop orientation (length may equal the circumference).
struct Arc {
  LoopIndex loop = 0;
  Rational start;
  Rational length;
};

struct BlockingPoint {
  PointRef point;
  Multiplicity chips = 0;
  int burnt_directions = 0;
};

/// Outcome of Dhar's burning from v.
struct BurnReport {
  bool fully_burnt = true;
  /// Unburnt closed set: arcs between unburnt model vertices, plus unburnt
  /// points with no unburnt arc through them.
  std::vector<Arc> unburnt_arcs;
  std::vector<PointRef> unburnt_points;
  /// Every point that stopped the fire: its chips and burnt arrivals.
  std::vector<BlockingPoint> blocking_points;
  /// All model vertices with their chip count, burnt arrivals and state.
  struct Row {
    PointRef point;
    Multiplicity chips = 0;
    int burnt_directions = 0;
    bool burnt = false;
  };
  std::vector<Row> rows;
};

/// Requires d effective away from v; throws InputError otherwise.
BurnReport dhar_burn(const Divisor& d, const PointRef& v);

struct BurningOptions {
  /// Cap on firing steps; 0 means 10 * (chips + genus)^2.
  std::size_t max_firings = 0;
};

struct BurningReduction {
  Divisor divisor;
  std::size_t debt_moves = 0;
  std::size_t firings = 0;
};

/// Iterative reducer: first moves debt toward v loop by loop, then fires the
/// unburnt set by the largest step that reaches the next chip or wedge point,
/// until the fire consumes everything. Throws InternalError when the cap is hit.
BurningReduction reduce_by_burning(const Divisor& d, const PointRef& v, const BurningOptions& options = {});

}  // namespace cactus

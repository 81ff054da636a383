#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cactus/graph.hpp"

namespace cactus {

using Multiplicity = long;

/// Finite integer combination of canonical points of one graph.
class Divisor {
 public:
  using ChipMap = std::map<PointRef, Multiplicity>;

  explicit Divisor(GraphPtr graph) : graph_(std::move(graph)) {}

  const GraphPtr& graph() const { return graph_; }
  const ChipMap& chips() const { return chips_; }

  /// Adds m chips at the canonical form of (loop, offset).
  void add(LoopIndex loop, const Rational& offset, Multiplicity m);
  /// Adds m chips at an already canonical point.
  void add(const PointRef& p, Multiplicity m);

  Multiplicity at(const PointRef& p) const;
  Multiplicity degree() const;
  bool empty() const { return chips_.empty(); }
  bool is_effective() const;
  bool is_effective_away_from(const PointRef& v) const;

  Divisor& operator+=(const Divisor& other);
  Divisor& operator-=(const Divisor& other);
  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
  /// Chip maps equal (graphs are assumed to match).
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.chips_ == b.chips_; }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

 private:
  void require_same_graph(const Divisor& other) const;

  GraphPtr graph_;
  ChipMap chips_;
};

Divisor point_divisor(const GraphPtr& graph, const PointRef& p, Multiplicity m = 1);

/// s*a + t*b. Throws InputError when the divisors live on different graphs.
Divisor divisor_combine(const Divisor& a, const Divisor& b, Multiplicity s, Multiplicity t);

/// Chips whose canonical point lies on one of `loops` (a wedge point counts
/// for its most ancestral loop only).
Divisor restrict(const Divisor& d, const std::set<LoopIndex>& loops);

/// Degree of the part of d supported on the closed circle of loop i,
/// including its attachment point.
Multiplicity degree_on_closed_loop(const Divisor& d, LoopIndex i);

/// K = sum over wedge points of (valence - 2) chips.
Divisor canonical_divisor(const GraphPtr& graph);

/// Degree plus one circle coordinate per loop; equal classes are exactly the
/// linearly equivalent divisors.
struct DivisorClass {
  Multiplicity degree = 0;
  std::vector<Rational> mu;

  friend bool operator==(const DivisorClass& a, const DivisorClass& b) {
    return a.degree == b.degree && a.mu == b.mu;
  }
  friend bool operator!=(const DivisorClass& a, const DivisorClass& b) { return !(a == b); }
  /// Stable text key, e.g. for memo tables.
  std::string key() const;
};

DivisorClass class_coordinates(const Divisor& d);

/// sum_i (x_i) + (d - g)(q) with one chip x_i per loop solving the class
/// equations; class_coordinates(result) == cls exactly.
Divisor representative_from_class(const GraphPtr& graph, const DivisorClass& cls);

/// Positions x_i used by representative_from_class, as canonical points.
std::vector<PointRef> class_free_chips(const GraphPtr& graph, const DivisorClass& cls);

/// Continuous piecewise-linear function with integer slopes, given by
/// breakpoints (offset, value) on every loop and linear interpolation around
/// each circle.
class PLFunction {
 public:
  using Breakpoints = std::vector<std::pair<Rational, Rational>>;

  /// Throws InputError for a missing loop, out-of-range or duplicate offsets,
  /// non-integer slopes, or values that disagree at a wedge point.
  PLFunction(GraphPtr graph, std::vector<Breakpoints> per_loop);

  static PLFunction constant(const GraphPtr& graph, const Rational& value);

  const GraphPtr& graph() const { return graph_; }
  const Breakpoints& breakpoints(LoopIndex i) const { return loops_.at(i); }
  Rational value(LoopIndex loop, const Rational& offset) const;
  /// Slopes (as integers) of f leaving the point at `offset` on loop i in the
  /// forward and backward directions.
  std::pair<Multiplicity, Multiplicity> outgoing_slopes(LoopIndex loop, const Rational& offset) const;

 private:
  GraphPtr graph_;
  std::vector<Breakpoints> loops_;
};

/// div(f): at each point, the sum of the slopes of f along every outgoing direction.
Divisor divisor_of_function(const PLFunction& f);

/// Divisor file format: `chip <loop-id> <offset> <multiplicity>` lines,
/// repeated lines accumulate, `#` starts a comment.
Divisor parse_divisor(const GraphPtr& graph, std::string_view text);
Divisor load_divisor(const GraphPtr& graph, const std::string& path);
std::string format_divisor(const Divisor& d);

}  // namespace cactus

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cactus/rational.hpp"

namespace cactus {

using LoopIndex = int;

/// A point of a cactus: loop index plus an offset along that loop's orientation,
/// measured from the loop's attachment point. Only canonical PointRefs (as
/// returned by CactusGraph::canonical_point) are meaningful for comparison.
struct PointRef {
  LoopIndex loop = 0;
  Rational offset;

  friend bool operator==(const PointRef& a, const PointRef& b) {
    return a.loop == b.loop && a.offset == b.offset;
  }
  friend bool operator!=(const PointRef& a, const PointRef& b) { return !(a == b); }
  friend bool operator<(const PointRef& a, const PointRef& b) {
    if (a.loop != b.loop) return a.loop < b.loop;
    return a.offset < b.offset;
  }
};

/// Loop description used to build a graph. Attachment offsets are in the
/// parent's coordinates; the root has no parent.
struct LoopSpec {
  std::string name;
  Rational circumference;
  std::optional<std::string> parent;
  Rational parent_offset;
};

struct GraphSpec {
  std::vector<LoopSpec> loops;
  std::optional<std::string> base_loop;
  Rational base_offset;
};

/// Tree of oriented loops with exact rational circumferences.
///
/// Every point has one canonical representation: offsets lie in [0, c) and a
/// point shared by several loops is stored on the most ancestral of them.
/// Attachments at offset 0 of a non-root loop are re-parented upward at
/// construction, so all loops through a wedge point hang off the same
/// (parent, offset) pair.
class CactusGraph {
 public:
  /// Validates and builds. Throws InputError on duplicate names, unknown
  /// parents, cycles, multiple or missing roots, or out-of-range offsets.
  static std::shared_ptr<const CactusGraph> build(const GraphSpec& spec);

  int genus() const { return static_cast<int>(circumference_.size()); }
  LoopIndex root() const { return root_; }
  const std::string& name(LoopIndex i) const { return names_.at(i); }
  std::optional<LoopIndex> find_loop(std::string_view name) const;
  LoopIndex loop_index(std::string_view name) const;  // throws InputError

  const Rational& circumference(LoopIndex i) const { return circumference_.at(i); }
  /// -1 for the root.
  LoopIndex parent(LoopIndex i) const { return parent_.at(i); }
  /// Offset on parent(i) where loop i is attached; 0 for the root.
  const Rational& attach_offset(LoopIndex i) const { return attach_.at(i); }
  const std::vector<LoopIndex>& children(LoopIndex i) const { return children_.at(i); }

  const PointRef& base_point() const { return base_; }

  /// Tree distance between loops in the attachment tree.
  int loop_distance(LoopIndex a, LoopIndex b) const { return dist_[a][b]; }
  /// Neighbour of `from` on the tree path to `to` (from != to).
  LoopIndex next_hop(LoopIndex from, LoopIndex to) const { return next_[from][to]; }

  /// Reduces the offset modulo the circumference and moves attachment points
  /// to the most ancestral loop. Throws InputError for an unknown loop.
  PointRef canonical_point(LoopIndex loop, const Rational& offset) const;
  /// Canonical form of offset 0 on loop i.
  PointRef origin_point(LoopIndex i) const;

  /// Loops whose closed circle contains p, canonical loop first.
  std::vector<LoopIndex> loops_through(const PointRef& p) const;
  bool on_loop(const PointRef& p, LoopIndex i) const;
  bool is_wedge_point(const PointRef& p) const { return loops_through(p).size() >= 2; }
  /// Distinct wedge points in canonical order.
  std::vector<PointRef> wedge_points() const;

  /// Offset on loop `target` of the nearest-point projection of p. Every
  /// point off the target loop projects to the attachment point through which
  /// the tree path from `target` reaches it.
  Rational retract(const PointRef& p, LoopIndex target) const;
  /// Projection of all of loop `source` onto loop `target` (source != target).
  Rational loop_projection(LoopIndex source, LoopIndex target) const;

  /// Offsets on loop i of every wedge point lying on it, sorted, including 0
  /// when the loop has an attachment there.
  std::vector<Rational> wedge_offsets(LoopIndex i) const;

  /// Returns a copy with a new loop of the given circumference glued at `at`.
  std::shared_ptr<const CactusGraph> with_loop(const PointRef& at, const Rational& circumference,
                                               std::string name = {}) const;

  /// Equivalent spec (canonical attachments), used for serialisation.
  GraphSpec to_spec() const;

 private:
  CactusGraph() = default;
  void finish();

  std::vector<std::string> names_;
  std::vector<Rational> circumference_;
  std::vector<LoopIndex> parent_;
  std::vector<Rational> attach_;
  std::vector<std::vector<LoopIndex>> children_;
  LoopIndex root_ = 0;
  PointRef base_;
  std::vector<std::vector<int>> dist_;
  std::vector<std::vector<LoopIndex>> next_;
};

using GraphPtr = std::shared_ptr<const CactusGraph>;

struct GraphStats {
  int genus = 0;
  int longest_loop_path = 0;
  std::vector<std::vector<int>> loop_distances;
  std::map<PointRef, int> wedge_valences;
};

GraphStats graph_stats(const CactusGraph& graph);

PointRef canonical_point(const CactusGraph& graph, LoopIndex loop, const Rational& offset);
Rational retract_point(const CactusGraph& graph, const PointRef& p, LoopIndex target);
/// Wedge sum with a fresh loop glued at `at`; genus grows by one and existing
/// loop indices and points stay valid.
GraphPtr wedge_with_loop(const CactusGraph& graph, const PointRef& at, const Rational& circumference);

/// Loops of one longest simple path in the attachment tree, end to end.
std::vector<LoopIndex> longest_loop_path(const CactusGraph& graph);

/// Parses the line-oriented graph format (`loop`, `attach`, `basepoint`).
/// Errors carry the offending line number.
GraphPtr parse_graph(std::string_view text);
GraphPtr load_graph(const std::string& path);
std::string format_graph(const CactusGraph& graph);

/// `L1:1/2` style point reference.
PointRef parse_point(const CactusGraph& graph, std::string_view text);
std::string format_point(const CactusGraph& graph, const PointRef& p);

}  // namespace cactus

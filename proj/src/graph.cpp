#include "cactus/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "cactus/errors.hpp"

namespace cactus {

std::shared_ptr<const CactusGraph> CactusGraph::build(const GraphSpec& spec) {
  if (spec.loops.empty()) throw InputError("graph has no loops");

  std::shared_ptr<CactusGraph> g(new CactusGraph());
  std::unordered_map<std::string, LoopIndex> index;
  for (const LoopSpec& loop : spec.loops) {
    if (!index.emplace(loop.name, static_cast<LoopIndex>(g->names_.size())).second) {
      throw InputError("duplicate loop id '" + loop.name + "'");
    }
    if (sgn(loop.circumference) <= 0) {
      throw InputError("loop '" + loop.name + "' needs a positive circumference");
    }
    g->names_.push_back(loop.name);
    g->circumference_.push_back(loop.circumference);
  }

  const int n = g->genus();
  g->parent_.assign(n, -1);
  g->attach_.assign(n, Rational(0));
  std::vector<LoopIndex> roots;
  for (LoopIndex i = 0; i < n; ++i) {
    const LoopSpec& loop = spec.loops[i];
    if (!loop.parent) {
      roots.push_back(i);
      continue;
    }
    auto it = index.find(*loop.parent);
    if (it == index.end()) {
      throw InputError("loop '" + loop.name + "' attached to unknown loop '" + *loop.parent + "'");
    }
    if (it->second == i) throw InputError("loop '" + loop.name + "' attached to itself");
    const Rational& c = g->circumference_[it->second];
    if (sgn(loop.parent_offset) < 0 || loop.parent_offset >= c) {
      throw InputError("attachment offset " + to_string(loop.parent_offset) + " of '" + loop.name +
                       "' outside [0, " + to_string(c) + ")");
    }
    g->parent_[i] = it->second;
    g->attach_[i] = loop.parent_offset;
  }

  // Walking parents from any loop must reach a root without revisiting.
  for (LoopIndex i = 0; i < n; ++i) {
    std::vector<char> seen(n, 0);
    for (LoopIndex j = i; j != -1; j = g->parent_[j]) {
      if (seen[j]) throw InputError("attachment cycle through loop '" + g->names_[j] + "'");
      seen[j] = 1;
    }
  }
  if (roots.size() != 1) {
    throw InputError(roots.empty() ? "attachment cycle: no root loop"
                                   : "graph is disconnected: " + std::to_string(roots.size()) + " root loops");
  }
  g->root_ = roots.front();

  // Attachments at a non-root origin belong to the most ancestral loop.
  for (LoopIndex i = 0; i < n; ++i) {
    while (g->parent_[i] != -1 && g->parent_[g->parent_[i]] != -1 && sgn(g->attach_[i]) == 0) {
      const LoopIndex p = g->parent_[i];
      g->attach_[i] = g->attach_[p];
      g->parent_[i] = g->parent_[p];
    }
  }

  g->finish();

  if (spec.base_loop) {
    const LoopIndex b = g->loop_index(*spec.base_loop);
    if (sgn(spec.base_offset) < 0 || spec.base_offset >= g->circumference_[b]) {
      throw InputError("basepoint offset " + to_string(spec.base_offset) + " outside loop '" + *spec.base_loop + "'");
    }
    g->base_ = g->canonical_point(b, spec.base_offset);
  } else {
    g->base_ = PointRef{g->root_, Rational(0)};
  }
  return g;
}

void CactusGraph::finish() {
  const int n = genus();
  children_.assign(n, {});
  for (LoopIndex i = 0; i < n; ++i) {
    if (parent_[i] != -1) children_[parent_[i]].push_back(i);
  }
  dist_.assign(n, std::vector<int>(n, -1));
  next_.assign(n, std::vector<LoopIndex>(n, -1));
  for (LoopIndex s = 0; s < n; ++s) {
    std::deque<LoopIndex> queue{s};
    dist_[s][s] = 0;
    while (!queue.empty()) {
      const LoopIndex u = queue.front();
      queue.pop_front();
      auto visit = [&](LoopIndex w) {
        if (w == -1 || dist_[s][w] != -1) return;
        dist_[s][w] = dist_[s][u] + 1;
        next_[s][w] = u == s ? w : next_[s][u];
        queue.push_back(w);
      };
      visit(parent_[u]);
      for (LoopIndex c : children_[u]) visit(c);
    }
  }
}

std::optional<LoopIndex> CactusGraph::find_loop(std::string_view name) const {
  for (LoopIndex i = 0; i < genus(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

LoopIndex CactusGraph::loop_index(std::string_view name) const {
  if (auto i = find_loop(name)) return *i;
  throw InputError("unknown loop id '" + std::string(name) + "'");
}

PointRef CactusGraph::canonical_point(LoopIndex loop, const Rational& offset) const {
  if (loop < 0 || loop >= genus()) throw InputError("unknown loop index " + std::to_string(loop));
  PointRef p{loop, mod_positive(offset, circumference_[loop])};
  while (sgn(p.offset) == 0 && parent_[p.loop] != -1) {
    p = PointRef{parent_[p.loop], attach_[p.loop]};
  }
  return p;
}

PointRef CactusGraph::origin_point(LoopIndex i) const { return canonical_point(i, Rational(0)); }

std::vector<LoopIndex> CactusGraph::loops_through(const PointRef& p) const {
  std::vector<LoopIndex> out{p.loop};
  for (LoopIndex c : children_[p.loop]) {
    if (attach_[c] == p.offset) out.push_back(c);
  }
  return out;
}

bool CactusGraph::on_loop(const PointRef& p, LoopIndex i) const {
  if (p.loop == i) return true;
  return parent_[i] == p.loop && attach_[i] == p.offset;
}

std::vector<PointRef> CactusGraph::wedge_points() const {
  std::set<PointRef> points;
  for (LoopIndex i = 0; i < genus(); ++i) {
    if (parent_[i] != -1) points.insert(PointRef{parent_[i], attach_[i]});
  }
  return {points.begin(), points.end()};
}

Rational CactusGraph::loop_projection(LoopIndex source, LoopIndex target) const {
  const LoopIndex hop = next_[target][source];
  if (hop == parent_[target]) return Rational(0);
  return attach_[hop];
}

Rational CactusGraph::retract(const PointRef& p, LoopIndex target) const {
  if (p.loop == target) return p.offset;
  if (on_loop(p, target)) return Rational(0);
  return loop_projection(p.loop, target);
}

std::vector<Rational> CactusGraph::wedge_offsets(LoopIndex i) const {
  std::set<Rational> offs;
  if (parent_[i] != -1) offs.insert(Rational(0));
  for (LoopIndex c : children_[i]) offs.insert(attach_[c]);
  return {offs.begin(), offs.end()};
}

std::shared_ptr<const CactusGraph> CactusGraph::with_loop(const PointRef& at, const Rational& circumference,
                                                          std::string name) const {
  if (sgn(circumference) <= 0) throw InputError("glued loop needs a positive circumference");
  if (at.loop < 0 || at.loop >= genus()) throw InputError("invalid attachment point");
  const PointRef p = canonical_point(at.loop, at.offset);
  if (name.empty()) {
    int k = genus() + 1;
    do {
      name = "L" + std::to_string(k++);
    } while (find_loop(name));
  } else if (find_loop(name)) {
    throw InputError("duplicate loop id '" + name + "'");
  }
  std::shared_ptr<CactusGraph> g(new CactusGraph(*this));
  g->names_.push_back(name);
  g->circumference_.push_back(circumference);
  g->parent_.push_back(p.loop);
  g->attach_.push_back(p.offset);
  g->finish();
  return g;
}

GraphSpec CactusGraph::to_spec() const {
  GraphSpec spec;
  for (LoopIndex i = 0; i < genus(); ++i) {
    LoopSpec loop{names_[i], circumference_[i], std::nullopt, Rational(0)};
    if (parent_[i] != -1) {
      loop.parent = names_[parent_[i]];
      loop.parent_offset = attach_[i];
    }
    spec.loops.push_back(std::move(loop));
  }
  spec.base_loop = names_[base_.loop];
  spec.base_offset = base_.offset;
  return spec;
}

GraphStats graph_stats(const CactusGraph& graph) {
  GraphStats stats;
  stats.genus = graph.genus();
  stats.loop_distances.assign(graph.genus(), std::vector<int>(graph.genus(), 0));
  int longest = 0;
  for (LoopIndex a = 0; a < graph.genus(); ++a) {
    for (LoopIndex b = 0; b < graph.genus(); ++b) {
      stats.loop_distances[a][b] = graph.loop_distance(a, b);
      longest = std::max(longest, graph.loop_distance(a, b));
    }
  }
  stats.longest_loop_path = longest + 1;
  for (const PointRef& w : graph.wedge_points()) {
    stats.wedge_valences[w] = 2 * static_cast<int>(graph.loops_through(w).size());
  }
  return stats;
}

std::vector<LoopIndex> longest_loop_path(const CactusGraph& graph) {
  LoopIndex best_a = 0, best_b = 0;
  for (LoopIndex a = 0; a < graph.genus(); ++a) {
    for (LoopIndex b = 0; b < graph.genus(); ++b) {
      if (graph.loop_distance(a, b) > graph.loop_distance(best_a, best_b)) {
        best_a = a;
        best_b = b;
      }
    }
  }
  std::vector<LoopIndex> path{best_a};
  while (path.back() != best_b) path.push_back(graph.next_hop(path.back(), best_b));
  return path;
}

PointRef canonical_point(const CactusGraph& graph, LoopIndex loop, const Rational& offset) {
  return graph.canonical_point(loop, offset);
}

Rational retract_point(const CactusGraph& graph, const PointRef& p, LoopIndex target) {
  if (target < 0 || target >= graph.genus()) throw InputError("unknown target loop");
  return graph.retract(p, target);
}

GraphPtr wedge_with_loop(const CactusGraph& graph, const PointRef& at, const Rational& circumference) {
  return graph.with_loop(at, circumference);
}

}  // namespace cactus

#include <algorithm>
#include <deque>
#include <set>

#include "cactus/errors.hpp"
#include "cactus/reduction.hpp"

namespace cactus {

namespace {

// Finite model of the cactus: vertices at v, wedge points and chip sites,
// edges along each loop between consecutive vertices.
struct Model {
  struct Edge {
    LoopIndex loop;
    int from;
    int to;
    Rational start;  // offset of `from` on the loop
    Rational length;
  };
  std::vector<PointRef> vertices;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> incident;  // edge ids, self-loops listed twice
};

Model build_model(const Divisor& d, const PointRef& v) {
  const CactusGraph& g = *d.graph();
  std::set<PointRef> verts{v};
  for (const PointRef& w : g.wedge_points()) verts.insert(w);
  for (const auto& [p, m] : d.chips()) verts.insert(p);

  Model model;
  model.vertices.assign(verts.begin(), verts.end());
  model.incident.resize(model.vertices.size());
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    std::vector<std::pair<Rational, int>> on;
    for (int k = 0; k < static_cast<int>(model.vertices.size()); ++k) {
      if (g.on_loop(model.vertices[k], i)) on.emplace_back(g.retract(model.vertices[k], i), k);
    }
    std::sort(on.begin(), on.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t j = 0; j < on.size(); ++j) {
      const auto& a = on[j];
      const auto& b = on[(j + 1) % on.size()];
      Rational len = b.first - a.first;
      if (sgn(len) <= 0) len += g.circumference(i);
      const int id = static_cast<int>(model.edges.size());
      model.edges.push_back(Model::Edge{i, a.second, b.second, a.first, len});
      model.incident[a.second].push_back(id);
      model.incident[b.second].push_back(id);
    }
  }
  return model;
}

struct BurnState {
  std::vector<char> vertex_burnt;
  std::vector<char> edge_burnt;
  std::vector<int> arrivals;
  std::vector<Multiplicity> chips;
};

BurnState burn(const Model& model, const Divisor& d, const PointRef& v) {
  const std::size_t n = model.vertices.size();
  BurnState s{std::vector<char>(n, 0), std::vector<char>(model.edges.size(), 0), std::vector<int>(n, 0),
              std::vector<Multiplicity>(n, 0)};
  int source = -1;
  for (std::size_t k = 0; k < n; ++k) {
    s.chips[k] = d.at(model.vertices[k]);
    if (model.vertices[k] == v) source = static_cast<int>(k);
  }
  std::deque<int> queue{source};
  s.vertex_burnt[source] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int e : model.incident[u]) {
      if (s.edge_burnt[e]) continue;
      s.edge_burnt[e] = 1;
      for (int w : {model.edges[e].from, model.edges[e].to}) {
        if (s.vertex_burnt[w]) continue;
        if (++s.arrivals[w] > s.chips[w]) {
          s.vertex_burnt[w] = 1;
          queue.push_back(w);
        }
      }
    }
  }
  return s;
}

BurnReport make_report(const Model& model, const BurnState& s) {
  BurnReport report;
  for (std::size_t k = 0; k < model.vertices.size(); ++k) {
    const bool burnt = s.vertex_burnt[k];
    report.rows.push_back({model.vertices[k], s.chips[k], s.arrivals[k], burnt});
    if (burnt) continue;
    report.fully_burnt = false;
    if (s.arrivals[k] > 0) report.blocking_points.push_back({model.vertices[k], s.chips[k], s.arrivals[k]});
    const bool has_arc = std::any_of(model.incident[k].begin(), model.incident[k].end(),
                                     [&](int e) { return !s.edge_burnt[e]; });
    if (!has_arc) report.unburnt_points.push_back(model.vertices[k]);
  }
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    if (s.edge_burnt[e]) continue;
    const auto& edge = model.edges[e];
    report.unburnt_arcs.push_back(Arc{edge.loop, edge.start, edge.length});
  }
  return report;
}

void require_effective_away(const Divisor& d, const PointRef& v) {
  if (!d.is_effective_away_from(v)) throw InputError("burning needs a divisor that is effective away from the base point");
}

// Moves the debt at x one loop closer to v by adding m * ((x) + (x') - 2(e)),
// where e is the exit of the loop through x nearest v and x' mirrors x about e.
void move_debt(Divisor& d, const PointRef& x, const PointRef& v) {
  const CactusGraph& g = *d.graph();
  LoopIndex loop = x.loop;
  for (LoopIndex l : g.loops_through(x)) {
    if (g.loop_distance(l, v.loop) < g.loop_distance(loop, v.loop)) loop = l;
  }
  const Multiplicity m = -d.at(x);
  const Rational& c = g.circumference(loop);
  const Rational exit = g.retract(v, loop);
  const Rational pos = g.retract(x, loop);
  const Rational mirror = mod_positive(Rational(2) * exit - pos, c);
  d.add(x, m);
  d.add(loop, mirror, m);
  d.add(loop, exit, -2 * m);
}

int debt_rank(const CactusGraph& g, const PointRef& x, const PointRef& v) {
  int best = g.loop_distance(x.loop, v.loop);
  for (LoopIndex l : g.loops_through(x)) best = std::min(best, g.loop_distance(l, v.loop));
  return best;
}

}  // namespace

BurnReport dhar_burn(const Divisor& d, const PointRef& v_in) {
  const PointRef v = d.graph()->canonical_point(v_in.loop, v_in.offset);
  require_effective_away(d, v);
  const Model model = build_model(d, v);
  return make_report(model, burn(model, d, v));
}

BurningReduction reduce_by_burning(const Divisor& d_in, const PointRef& v_in, const BurningOptions& options) {
  const CactusGraph& g = *d_in.graph();
  const PointRef v = g.canonical_point(v_in.loop, v_in.offset);
  BurningReduction out{d_in, 0, 0};
  Divisor& d = out.divisor;

  for (;;) {
    const PointRef* worst = nullptr;
    int worst_rank = -1;
    for (const auto& [p, m] : d.chips()) {
      if (m >= 0 || p == v) continue;
      const int r = debt_rank(g, p, v);
      if (r > worst_rank) {
        worst_rank = r;
        worst = &p;
      }
    }
    if (!worst) break;
    const PointRef x = *worst;
    move_debt(d, x, v);
    ++out.debt_moves;
  }

  std::size_t cap = options.max_firings;
  if (cap == 0) {
    std::size_t chips = 0;
    for (const auto& [p, m] : d.chips()) chips += static_cast<std::size_t>(m < 0 ? -m : m);
    const std::size_t n = chips + static_cast<std::size_t>(g.genus());
    cap = 10 * n * n;
  }

  for (;;) {
    const Model model = build_model(d, v);
    const BurnState s = burn(model, d, v);
    struct Shot {
      int vertex;
      int edge;
    };
    std::vector<Shot> shots;
    std::optional<Rational> step;
    for (std::size_t k = 0; k < model.vertices.size(); ++k) {
      if (s.vertex_burnt[k]) continue;
      for (int e : model.incident[k]) {
        if (!s.edge_burnt[e]) continue;
        shots.push_back({static_cast<int>(k), e});
        if (!step || model.edges[e].length < *step) step = model.edges[e].length;
      }
    }
    if (shots.empty()) break;
    if (out.firings >= cap) {
      throw InternalError("reduce_by_burning exceeded " + std::to_string(cap) + " firing steps");
    }
    for (const Shot& shot : shots) {
      const auto& edge = model.edges[shot.edge];
      d.add(model.vertices[shot.vertex], -1);
      const Rational landing = shot.vertex == edge.from ? Rational(edge.start + *step) : Rational(edge.start + edge.length - *step);
      d.add(edge.loop, landing, 1);
    }
    ++out.firings;
  }
  return out;
}

}  // namespace cactus

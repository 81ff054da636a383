#include "subdivided_dhar.hpp"

#include <deque>
#include <map>

#include "cactus/errors.hpp"

namespace cactus::oracle {

namespace {

struct Subdivision {
  Integer scale;
  std::vector<PointRef> points;  // vertex id -> canonical point
  std::map<PointRef, int> ids;
  std::vector<std::vector<int>> adj;  // with multiplicity, no self-loops
};

Integer scaled(const Rational& x, const Integer& scale) {
  const Rational s = x * Rational(scale);
  if (s.get_den() != 1) throw InternalError("subdivision scale does not clear a denominator");
  return s.get_num();
}

Subdivision subdivide(const Divisor& d, const PointRef& v, std::size_t max_vertices) {
  const CactusGraph& g = *d.graph();
  std::vector<Rational> values;
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    values.push_back(g.circumference(i));
    values.push_back(g.attach_offset(i));
  }
  for (const auto& [p, m] : d.chips()) values.push_back(p.offset);
  values.push_back(v.offset);

  Subdivision sub;
  sub.scale = common_denominator(values);
  Integer total = 0;
  for (LoopIndex i = 0; i < g.genus(); ++i) total += scaled(g.circumference(i), sub.scale);
  if (total > Integer(static_cast<unsigned long>(max_vertices))) {
    throw ResourceCapError("subdivision needs " + total.get_str() + " vertices");
  }

  // Parents first, so a child's origin already has an id.
  std::vector<LoopIndex> order{g.root()};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (LoopIndex c : g.children(order[k])) order.push_back(c);
  }
  for (LoopIndex i : order) {
    const long n = scaled(g.circumference(i), sub.scale).get_si();
    std::vector<int> ring(n);
    for (long k = 0; k < n; ++k) {
      Rational x(Integer(k), sub.scale);
      x.canonicalize();
      const PointRef p = g.canonical_point(i, x);
      auto [it, inserted] = sub.ids.try_emplace(p, static_cast<int>(sub.points.size()));
      if (inserted) {
        sub.points.push_back(p);
        sub.adj.emplace_back();
      }
      ring[k] = it->second;
    }
    if (n == 1) continue;
    for (long k = 0; k < n; ++k) {
      const int a = ring[k];
      const int b = ring[(k + 1) % n];
      sub.adj[a].push_back(b);
      sub.adj[b].push_back(a);
    }
  }
  return sub;
}

}  // namespace

Divisor subdivided_reduce(const Divisor& d, const PointRef& v_in, std::size_t max_vertices) {
  const CactusGraph& g = *d.graph();
  const PointRef v = g.canonical_point(v_in.loop, v_in.offset);
  const Subdivision sub = subdivide(d, v, max_vertices);
  const int n = static_cast<int>(sub.points.size());
  const int sink = sub.ids.at(v);

  std::vector<long> chips(n, 0);
  for (const auto& [p, m] : d.chips()) chips[sub.ids.at(p)] += m;

  // Greedy borrowing; terminates because the sink never borrows.
  std::deque<int> debt;
  for (int u = 0; u < n; ++u) {
    if (u != sink && chips[u] < 0) debt.push_back(u);
  }
  while (!debt.empty()) {
    const int u = debt.front();
    debt.pop_front();
    if (chips[u] >= 0) continue;
    const long deg = static_cast<long>(sub.adj[u].size());
    const long times = (-chips[u] + deg - 1) / deg;
    chips[u] += times * deg;
    for (int w : sub.adj[u]) {
      chips[w] -= times;
      if (w != sink && chips[w] < 0) debt.push_back(w);
    }
  }

  for (;;) {
    std::vector<char> burnt(n, 0);
    std::vector<long> arrivals(n, 0);
    std::deque<int> queue{sink};
    burnt[sink] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : sub.adj[u]) {
        if (burnt[w]) continue;
        if (++arrivals[w] > chips[w]) {
          burnt[w] = 1;
          queue.push_back(w);
        }
      }
    }
    bool fired = false;
    for (int u = 0; u < n; ++u) {
      if (burnt[u]) continue;
      for (int w : sub.adj[u]) {
        if (!burnt[w]) continue;
        --chips[u];
        ++chips[w];
        fired = true;
      }
    }
    if (!fired) break;
  }

  Divisor out(d.graph());
  for (int u = 0; u < n; ++u) out.add(sub.points[u], chips[u]);
  return out;
}

}  // namespace cactus::oracle

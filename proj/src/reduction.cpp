#include "cactus/reduction.hpp"

#include <algorithm>
#include <numeric>

namespace cactus {

CircleChips circle_reduce(const Rational& circumference, const CircleChips& chips, const Rational& v) {
  Multiplicity d = 0;
  Rational mu(0);
  for (const auto& [x, m] : chips) {
    d += m;
    mu += Rational(m) * x;
  }
  mu = mod_positive(mu, circumference);
  const Rational base = mod_positive(v, circumference);
  CircleChips out;
  if (mod_positive(Rational(d) * base, circumference) == mu) {
    if (d != 0) out.emplace_back(base, d);
    return out;
  }
  const Rational p = mod_positive(mu - Rational(d - 1) * base, circumference);
  if (d - 1 != 0) out.emplace_back(base, d - 1);
  out.emplace_back(p, 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Divisor q_reduce(const Divisor& d, const PointRef& v_in) {
  const GraphPtr& graph = d.graph();
  const CactusGraph& g = *graph;
  const PointRef v = g.canonical_point(v_in.loop, v_in.offset);

  std::vector<LoopIndex> order(g.genus());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](LoopIndex a, LoopIndex b) {
    return g.loop_distance(a, v.loop) > g.loop_distance(b, v.loop);
  });

  Divisor::ChipMap work = d.chips();
  for (LoopIndex i : order) {
    const PointRef origin = g.origin_point(i);
    CircleChips gathered;
    for (auto it = work.begin(); it != work.end();) {
      if (it->first.loop == i) {
        gathered.emplace_back(it->first.offset, it->second);
        it = work.erase(it);
      } else if (it->first == origin) {
        gathered.emplace_back(Rational(0), it->second);
        it = work.erase(it);
      } else {
        ++it;
      }
    }
    if (gathered.empty()) continue;
    const Rational exit = g.retract(v, i);
    for (const auto& [x, m] : circle_reduce(g.circumference(i), gathered, exit)) {
      const PointRef p = g.canonical_point(i, x);
      auto [slot, inserted] = work.try_emplace(p, m);
      if (!inserted) {
        slot->second += m;
        if (slot->second == 0) work.erase(slot);
      }
    }
  }
  Divisor out(graph);
  for (const auto& [p, m] : work) out.add(p, m);
  return out;
}

}  // namespace cactus

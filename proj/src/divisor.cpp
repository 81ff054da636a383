#include "cactus/divisor.hpp"

#include <algorithm>

#include "cactus/errors.hpp"

namespace cactus {

void Divisor::add(LoopIndex loop, const Rational& offset, Multiplicity m) {
  add(graph_->canonical_point(loop, offset), m);
}

void Divisor::add(const PointRef& p, Multiplicity m) {
  if (m == 0) return;
  auto [it, inserted] = chips_.try_emplace(p, m);
  if (!inserted) {
    it->second += m;
    if (it->second == 0) chips_.erase(it);
  }
}

Multiplicity Divisor::at(const PointRef& p) const {
  auto it = chips_.find(p);
  return it == chips_.end() ? 0 : it->second;
}

Multiplicity Divisor::degree() const {
  Multiplicity d = 0;
  for (const auto& [p, m] : chips_) d += m;
  return d;
}

bool Divisor::is_effective() const {
  return std::all_of(chips_.begin(), chips_.end(), [](const auto& kv) { return kv.second >= 0; });
}

bool Divisor::is_effective_away_from(const PointRef& v) const {
  return std::all_of(chips_.begin(), chips_.end(), [&](const auto& kv) { return kv.second >= 0 || kv.first == v; });
}

void Divisor::require_same_graph(const Divisor& other) const {
  if (graph_ != other.graph_) throw InputError("divisors live on different graphs");
}

Divisor& Divisor::operator+=(const Divisor& other) {
  require_same_graph(other);
  for (const auto& [p, m] : other.chips_) add(p, m);
  return *this;
}

Divisor& Divisor::operator-=(const Divisor& other) {
  require_same_graph(other);
  for (const auto& [p, m] : other.chips_) add(p, -m);
  return *this;
}

Divisor point_divisor(const GraphPtr& graph, const PointRef& p, Multiplicity m) {
  Divisor d(graph);
  d.add(graph->canonical_point(p.loop, p.offset), m);
  return d;
}

Divisor divisor_combine(const Divisor& a, const Divisor& b, Multiplicity s, Multiplicity t) {
  if (a.graph() != b.graph()) throw InputError("divisors live on different graphs");
  Divisor out(a.graph());
  for (const auto& [p, m] : a.chips()) out.add(p, s * m);
  for (const auto& [p, m] : b.chips()) out.add(p, t * m);
  return out;
}

Divisor restrict(const Divisor& d, const std::set<LoopIndex>& loops) {
  if (loops.empty()) throw InputError("restrict needs at least one loop");
  for (LoopIndex i : loops) {
    if (i < 0 || i >= d.graph()->genus()) throw InputError("unknown loop index " + std::to_string(i));
  }
  Divisor out(d.graph());
  for (const auto& [p, m] : d.chips()) {
    if (loops.count(p.loop)) out.add(p, m);
  }
  return out;
}

Multiplicity degree_on_closed_loop(const Divisor& d, LoopIndex i) {
  Multiplicity total = 0;
  for (const auto& [p, m] : d.chips()) {
    if (d.graph()->on_loop(p, i)) total += m;
  }
  return total;
}

Divisor canonical_divisor(const GraphPtr& graph) {
  Divisor k(graph);
  for (const PointRef& w : graph->wedge_points()) {
    const auto m = static_cast<Multiplicity>(graph->loops_through(w).size());
    k.add(w, 2 * m - 2);
  }
  return k;
}

std::string DivisorClass::key() const {
  std::string out = std::to_string(degree);
  for (const Rational& x : mu) {
    out += '|';
    out += to_string(x);
  }
  return out;
}

DivisorClass class_coordinates(const Divisor& d) {
  const CactusGraph& g = *d.graph();
  DivisorClass cls;
  cls.degree = d.degree();
  cls.mu.assign(g.genus(), Rational(0));
  for (const auto& [p, m] : d.chips()) {
    const Rational mult(m);
    for (LoopIndex i = 0; i < g.genus(); ++i) cls.mu[i] += mult * g.retract(p, i);
  }
  for (LoopIndex i = 0; i < g.genus(); ++i) cls.mu[i] = mod_positive(cls.mu[i], g.circumference(i));
  return cls;
}

std::vector<PointRef> class_free_chips(const GraphPtr& graph, const DivisorClass& cls) {
  const CactusGraph& g = *graph;
  if (static_cast<int>(cls.mu.size()) != g.genus()) throw InputError("class has the wrong number of coordinates");
  const Rational surplus(cls.degree - g.genus());
  std::vector<PointRef> out;
  out.reserve(g.genus());
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    Rational x = cls.mu[i] - surplus * g.retract(g.base_point(), i);
    for (LoopIndex j = 0; j < g.genus(); ++j) {
      if (j != i) x -= g.loop_projection(j, i);
    }
    out.push_back(g.canonical_point(i, x));
  }
  return out;
}

Divisor representative_from_class(const GraphPtr& graph, const DivisorClass& cls) {
  Divisor d(graph);
  for (const PointRef& p : class_free_chips(graph, cls)) d.add(p, 1);
  d.add(graph->base_point(), cls.degree - graph->genus());
  return d;
}

// ---------------------------------------------------------------------------

namespace {

Multiplicity integer_slope(const Rational& rise, const Rational& run) {
  const Rational s = rise / run;
  if (s.get_den() != 1) throw InputError("piecewise-linear function has non-integer slope " + to_string(s));
  if (!s.get_num().fits_slong_p()) throw InputError("slope out of range");
  return s.get_num().get_si();
}

}  // namespace

PLFunction::PLFunction(GraphPtr graph, std::vector<Breakpoints> per_loop)
    : graph_(std::move(graph)), loops_(std::move(per_loop)) {
  const CactusGraph& g = *graph_;
  if (static_cast<int>(loops_.size()) != g.genus()) throw InputError("one breakpoint list per loop is required");
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    auto& bps = loops_[i];
    if (bps.empty()) throw InputError("loop '" + g.name(i) + "' has no breakpoints");
    std::sort(bps.begin(), bps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < bps.size(); ++k) {
      if (sgn(bps[k].first) < 0 || bps[k].first >= g.circumference(i)) {
        throw InputError("breakpoint offset outside loop '" + g.name(i) + "'");
      }
      if (k > 0 && bps[k].first == bps[k - 1].first) throw InputError("duplicate breakpoint offset");
      const auto& next = bps[(k + 1) % bps.size()];
      Rational run = next.first - bps[k].first;
      if (sgn(run) <= 0) run += g.circumference(i);
      if (bps.size() > 1) integer_slope(next.second - bps[k].second, run);
    }
  }
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    if (g.parent(i) == -1) continue;
    if (value(i, Rational(0)) != value(g.parent(i), g.attach_offset(i))) {
      throw InputError("piecewise-linear function is discontinuous where '" + g.name(i) + "' is attached");
    }
  }
}

PLFunction PLFunction::constant(const GraphPtr& graph, const Rational& value) {
  std::vector<Breakpoints> loops(graph->genus(), Breakpoints{{Rational(0), value}});
  return PLFunction(graph, std::move(loops));
}

Rational PLFunction::value(LoopIndex loop, const Rational& offset) const {
  const auto& bps = loops_.at(loop);
  const Rational& c = graph_->circumference(loop);
  const Rational x = mod_positive(offset, c);
  if (bps.size() == 1) return bps.front().second;
  auto it = std::upper_bound(bps.begin(), bps.end(), x, [](const Rational& v, const auto& bp) { return v < bp.first; });
  // segment from `lo` (at or before x, cyclically) to `hi`
  const auto& lo = it == bps.begin() ? bps.back() : *std::prev(it);
  const auto& hi = it == bps.end() ? bps.front() : *it;
  Rational lo_off = lo.first;
  if (lo_off > x) lo_off -= c;
  Rational hi_off = hi.first;
  if (hi_off <= lo_off) hi_off += c;
  if (hi_off <= lo_off) hi_off += c;
  return lo.second + (hi.second - lo.second) * (x - lo_off) / (hi_off - lo_off);
}

std::pair<Multiplicity, Multiplicity> PLFunction::outgoing_slopes(LoopIndex loop, const Rational& offset) const {
  const auto& bps = loops_.at(loop);
  if (bps.size() == 1) return {0, 0};
  const Rational& c = graph_->circumference(loop);
  const Rational x = mod_positive(offset, c);
  // Slope of the segment that starts at or before a position, cyclically.
  auto segment_slope = [&](std::size_t k) {
    const auto& a = bps[k];
    const auto& b = bps[(k + 1) % bps.size()];
    Rational run = b.first - a.first;
    if (sgn(run) <= 0) run += c;
    return integer_slope(b.second - a.second, run);
  };
  auto it = std::upper_bound(bps.begin(), bps.end(), x, [](const Rational& v, const auto& bp) { return v < bp.first; });
  const std::size_t at_or_before = it == bps.begin() ? bps.size() - 1 : static_cast<std::size_t>(it - bps.begin()) - 1;
  const Multiplicity forward = segment_slope(at_or_before);
  const bool is_breakpoint = bps[at_or_before].first == x;
  const std::size_t before = is_breakpoint ? (at_or_before + bps.size() - 1) % bps.size() : at_or_before;
  const Multiplicity backward = -segment_slope(before);
  return {forward, backward};
}

Divisor divisor_of_function(const PLFunction& f) {
  const GraphPtr& graph = f.graph();
  const CactusGraph& g = *graph;
  std::set<PointRef> points;
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    for (const auto& bp : f.breakpoints(i)) points.insert(g.canonical_point(i, bp.first));
  }
  for (const PointRef& w : g.wedge_points()) points.insert(w);
  Divisor out(graph);
  for (const PointRef& p : points) {
    Multiplicity ord = 0;
    for (LoopIndex l : g.loops_through(p)) {
      const auto [fwd, bwd] = f.outgoing_slopes(l, g.retract(p, l));
      ord += fwd + bwd;
    }
    out.add(p, ord);
  }
  return out;
}

}  // namespace cactus

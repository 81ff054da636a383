#include "cactus/rank.hpp"

#include <algorithm>
#include <set>

#include "cactus/errors.hpp"
#include "cactus/reduction.hpp"

namespace cactus {

std::vector<Rational> generic_samples(const CactusGraph& graph, LoopIndex loop, int count) {
  if (count < 1) throw InputError("at least one generic sample per loop is required");
  std::set<Rational> special;
  for (const Rational& w : graph.wedge_offsets(loop)) special.insert(w);
  if (graph.on_loop(graph.base_point(), loop)) special.insert(graph.retract(graph.base_point(), loop));
  const Rational& c = graph.circumference(loop);
  int m = 0;
  while (3 * (1L << m) <= 2 * count - 1) ++m;
  for (; m <= 40; ++m) {
    std::vector<Rational> out;
    const Rational unit = c / Rational(Integer(3) * (Integer(1) << m));
    bool clash = false;
    for (int j = 0; j < count && !clash; ++j) {
      Rational x = unit * (2 * j + 1);
      clash = special.count(x) > 0;
      out.push_back(std::move(x));
    }
    if (!clash) return out;
  }
  throw InternalError("generic sample collides with a special point after 40 refinements");
}

RankEngine::RankEngine(GraphPtr graph, RankOptions options) : graph_(std::move(graph)), options_(options) {
  const CactusGraph& g = *graph_;
  std::set<PointRef> seen;
  auto push = [&](const PointRef& p) {
    if (seen.insert(p).second) fixed_.push_back(p);
  };
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    for (const Rational& x : generic_samples(g, i, options_.samples_per_loop)) push(g.canonical_point(i, x));
  }
  for (const PointRef& w : g.wedge_points()) push(w);
  push(g.base_point());
}

std::vector<PointRef> RankEngine::candidates(const Divisor& d) const {
  std::vector<PointRef> out = fixed_;
  if (options_.free_chip_candidates) {
    for (const PointRef& p : class_free_chips(graph_, class_coordinates(d))) {
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
  }
  return out;
}

bool RankEngine::is_effective_class(const Divisor& d) { return cactus::is_effective_class(d); }

std::size_t RankEngine::memo_size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

bool RankEngine::check(const Divisor& d, int r, const std::string& class_key) {
  if (d.degree() < r) return false;
  const std::string key = class_key + "#" + std::to_string(r);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (options_.max_states != 0 && memo_.size() >= options_.max_states) {
      throw ResourceCapError("rank game exceeded " + std::to_string(options_.max_states) + " states");
    }
  }
  bool ok = true;
  if (r == 0) {
    ok = cactus::is_effective_class(d);
  } else {
    for (const PointRef& v : candidates(d)) {
      Divisor next = d;
      next.add(v, -1);
      if (!check(next, r - 1, class_coordinates(next).key())) {
        ok = false;
        break;
      }
    }
  }
  std::lock_guard lock(mutex_);
  memo_[key] = ok;
  return ok;
}

bool RankEngine::has_rank_at_least(const Divisor& d, int r) {
  if (d.graph() != graph_) throw InputError("divisor belongs to a different graph than the rank engine");
  if (r < 0) return true;
  return check(d, r, class_coordinates(d).key());
}

std::optional<std::vector<PointRef>> RankEngine::refutation(const Divisor& d, int r) {
  if (has_rank_at_least(d, r)) return std::nullopt;
  std::vector<PointRef> seq;
  Divisor cur = d;
  for (int level = r; level > 0; --level) {
    bool stepped = false;
    for (const PointRef& v : candidates(cur)) {
      Divisor next = cur;
      next.add(v, -1);
      if (!has_rank_at_least(next, level - 1)) {
        seq.push_back(v);
        cur = std::move(next);
        stepped = true;
        break;
      }
    }
    if (!stepped) {
      // Only the degree bound failed; any removals refute.
      for (int k = 0; k < level; ++k) seq.push_back(graph_->base_point());
      break;
    }
  }
  return seq;
}

RankWitness RankEngine::rank(const Divisor& d, std::optional<int> max_r) {
  RankWitness w;
  w.candidate_log = candidates(d);
  const std::size_t before = memo_size();
  if (!is_effective_class(d)) {
    w.rank = -1;
    w.refuting_sequence = {};
    return w;
  }
  const Multiplicity deg = d.degree();
  const int limit = static_cast<int>(std::min<Multiplicity>(max_r.value_or(deg), deg));
  int r = 0;
  while (r < limit && has_rank_at_least(d, r + 1)) ++r;
  w.rank = r;
  if (r == limit && limit < deg) {
    w.lower_bound_only = true;
  } else if (auto seq = refutation(d, r + 1)) {
    w.refuting_sequence = std::move(*seq);
  }
  w.states_visited = memo_size() - before;
  return w;
}

bool is_effective_class(const Divisor& d) {
  if (d.degree() < 0) return false;
  const PointRef& q = d.graph()->base_point();
  return q_reduce(d, q).at(q) >= 0;
}

RankWitness rank(const Divisor& d, std::optional<int> max_r, const RankOptions& options) {
  RankEngine engine(d.graph(), options);
  return engine.rank(d, max_r);
}

RiemannRochCheck riemann_roch_residual(const Divisor& d, RankEngine& engine) {
  RiemannRochCheck out;
  const Divisor k_minus_d = canonical_divisor(d.graph()) - d;
  const auto rd = engine.rank(d, static_cast<int>(d.degree()) + 1);
  const auto rk = engine.rank(k_minus_d, static_cast<int>(k_minus_d.degree()) + 1);
  out.rank_d = rd.rank;
  out.rank_k_minus_d = rk.rank;
  out.verified = !rd.lower_bound_only && !rk.lower_bound_only;
  out.residual = static_cast<long>(rd.rank - rk.rank - d.degree() - 1 + d.graph()->genus());
  return out;
}

RiemannRochCheck riemann_roch_residual(const Divisor& d) {
  RankEngine engine(d.graph());
  return riemann_roch_residual(d, engine);
}

}  // namespace cactus

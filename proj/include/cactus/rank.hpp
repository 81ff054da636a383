#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cactus/divisor.hpp"

namespace cactus {

struct RankOptions {
  /// Generic sample points per loop added to the adversary set (>= 1).
  int samples_per_loop = 1;
  /// Also offer the per-loop chip positions of representative_from_class.
  bool free_chip_candidates = false;
  /// Cap on memoised game states; 0 means unlimited.
  std::size_t max_states = 0;
};

struct RankWitness {
  int rank = -1;
  /// Set when the search stopped at max_r before reaching the degree bound.
  bool lower_bound_only = false;
  /// rank + 1 points whose removal leaves a class with no effective member.
  std::vector<PointRef> refuting_sequence;
  /// Adversary set offered at the top level of the game.
  std::vector<PointRef> candidate_log;
  std::size_t states_visited = 0;
};

/// Divisor rank through the finite removal game. The adversary removes chips
/// only at candidate points: every wedge point, the base point, and generic
/// samples on each loop. Together these are the vertices of a model with at
/// least two vertices per loop, which is rank-determining for the metric
/// graph, so the game value equals the rank.
///
/// The memo table is keyed by divisor class and guarded by a mutex; entries
/// are idempotent so concurrent callers may share one engine.
class RankEngine {
 public:
  explicit RankEngine(GraphPtr graph, RankOptions options = {});

  const GraphPtr& graph() const { return graph_; }
  const RankOptions& options() const { return options_; }

  /// Class-independent part of the adversary set, samples first.
  const std::vector<PointRef>& fixed_candidates() const { return fixed_; }
  std::vector<PointRef> candidates(const Divisor& d) const;

  bool is_effective_class(const Divisor& d);
  /// True when every removal of r candidate chips leaves an effective class.
  bool has_rank_at_least(const Divisor& d, int r);
  /// r candidate points defeating has_rank_at_least(d, r), if any.
  std::optional<std::vector<PointRef>> refutation(const Divisor& d, int r);

  RankWitness rank(const Divisor& d, std::optional<int> max_r = std::nullopt);

  std::size_t memo_size() const;

 private:
  bool check(const Divisor& d, int r, const std::string& key);

  GraphPtr graph_;
  RankOptions options_;
  std::vector<PointRef> fixed_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, bool> memo_;
};

/// Deterministic generic offsets (2j+1) c / (3 * 2^m), j < count, with the
/// smallest m keeping them off every wedge point and the base point.
std::vector<Rational> generic_samples(const CactusGraph& graph, LoopIndex loop, int count);

/// True iff the base-point reduction keeps a nonnegative coefficient at the base point.
bool is_effective_class(const Divisor& d);

RankWitness rank(const Divisor& d, std::optional<int> max_r = std::nullopt, const RankOptions& options = {});

struct RiemannRochCheck {
  int rank_d = -1;
  int rank_k_minus_d = -1;
  long residual = 0;
  bool verified = false;  // false when either rank is only a lower bound
};

/// r(D) - r(K - D) - deg(D) - 1 + g, which tropical Riemann-Roch says is zero.
RiemannRochCheck riemann_roch_residual(const Divisor& d, RankEngine& engine);
RiemannRochCheck riemann_roch_residual(const Divisor& d);

}  // namespace cactus

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cactus/rank.hpp"

namespace cactus {

/// g - (r+1)(g - d + r).
long rho(long g, long r, long d);

// ---------------------------------------------------------------------------
// Stratified scans

struct ScanOptions {
  int grid = 16;           // N
  int max_free = 1;        // loops carrying one free chip
  std::size_t budget = 200000;  // cap on grid evaluations over all strata
  unsigned threads = 1;
  RankOptions rank;
};

/// One maximal interval of marked grid points along a free coordinate.
struct PersistenceRun {
  int coordinate = 0;           // index into Stratum::free_loops
  std::vector<int> fixed_point; // grid point with the run coordinate set to `start`
  int start = 0;
  int length = 0;
};

struct ScanRow {
  std::vector<int> grid_point;
  int rank = -1;  // game value capped at r
  bool marked = false;
};

struct Stratum {
  int id = 0;
  std::vector<std::pair<PointRef, Multiplicity>> fixed;  // chips on special points
  std::vector<LoopIndex> free_loops;
  std::vector<ScanRow> rows;
  std::vector<PersistenceRun> runs;
  int longest_run = 0;
};

struct ScanReport {
  int r = 0;
  int d = 0;
  int grid = 0;
  std::vector<PointRef> special_points;
  std::vector<Stratum> strata;
  bool found_positive_dimensional = false;
};

/// Divisor of one grid point of a stratum.
Divisor stratum_divisor(const GraphPtr& graph, const Stratum& s, const std::vector<int>& grid_point, int grid);

/// Enumerates effective support patterns of degree d (chips on wedge points
/// and the base point plus up to max_free loops with one free chip) and marks
/// the grid points whose divisor has rank >= r. Throws ResourceCapError when
/// the total grid size exceeds the budget.
ScanReport stratified_scan(const GraphPtr& graph, int r, int d, const ScanOptions& options = {});
ScanReport stratified_scan(RankEngine& engine, int r, int d, const ScanOptions& options = {});

std::string format_pattern(const CactusGraph& graph, const Stratum& s);
std::string format_coord_names(const CactusGraph& graph, const Stratum& s);
/// CSV with columns stratum_id,pattern,coord_names,grid_point,rank,marked.
std::string scan_csv(const CactusGraph& graph, const ScanReport& report);

/// First divisor of degree d with rank >= r found by scanning strata in
/// order, or nullopt.
std::optional<Divisor> find_witness(RankEngine& engine, int r, int d, const ScanOptions& options = {});

// ---------------------------------------------------------------------------
// Local dimension probes

struct ProbeRow {
  std::vector<LoopIndex> subset;
  int combination = 0;   // which of the generic weight vectors
  Rational magnitude;    // fraction of each circumference
  int sign = 1;
  bool persisted = false;
};

struct DimProbe {
  DivisorClass base_class;
  int r = 0;
  std::vector<LoopIndex> persistent_directions;  // a largest persistent subset
  std::vector<std::vector<LoopIndex>> persistent_subsets;
  int estimated_local_dim = 0;
  std::vector<ProbeRow> rows;
};

struct ProbeOptions {
  int subset_limit = 2;
  unsigned threads = 1;
};

/// Moves the class of d along every direction subset S with |S| <=
/// subset_limit by 4 generic weight vectors at magnitudes c_i/64 and c_i/128,
/// both signs, and records whether rank >= r survives all 16 moves.
/// Throws InputError when rank(d) < r.
DimProbe local_dim_probe(const Divisor& d, int r, const ProbeOptions& options = {});
DimProbe local_dim_probe(RankEngine& engine, const Divisor& d, int r, const ProbeOptions& options = {});

/// The class reached from `cls` by one probe move.
DivisorClass perturbed_class(const CactusGraph& graph, const DivisorClass& cls, const std::vector<LoopIndex>& subset,
                             int combination, const Rational& magnitude, int sign);

/// CSV with columns direction_subset,magnitude,persisted (one row per move).
std::string probe_csv(const CactusGraph& graph, const DimProbe& probe);

// ---------------------------------------------------------------------------
// Brill-Noether rank bounds

struct BoundsOptions {
  int grid = 4;                 // grid for extra chips in the cover search
  std::size_t budget = 200000;  // cap on rank evaluations
  RankOptions rank;
};

struct BNRankBounds {
  int r = 0;
  int d = 0;
  int lower = -1;
  int upper = -1;
  std::optional<Divisor> counterexample_E;
  /// lower is certified against the finite adversary family only.
  bool lower_family_certified = true;
  /// upper came from an explicit uncovered E (false: degree bound d - r).
  bool upper_from_counterexample = false;
  /// The budget ran out; the interval was widened to what was settled.
  bool widened = false;
  std::size_t evaluations = 0;
};

BNRankBounds bn_rank_bounds(const GraphPtr& graph, int r, int d, const BoundsOptions& options = {});

// ---------------------------------------------------------------------------
// Verifiers

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifierReport {
  std::string name;
  std::vector<Check> checks;
  /// Ordered key/value facts, e.g. {"rho", "-2"}.
  std::vector<std::pair<std::string, std::string>> facts;
  std::string verdict;
  bool verified() const;
  std::string text() const;
};

/// Genus-4 star: D_t = (A) + (B) + (A + t c) on the central loop.
Divisor star_family_divisor(const GraphPtr& star, const Rational& t);

VerifierReport verify_lemma_w13(const GraphPtr& star, int grid = 64);
VerifierReport verify_prop_weak(const GraphPtr& graph);

struct WedgeDimOptions {
  int samples = 20;
  std::uint64_t seed = 0;
  int probe_limit = 2;
  bool probe = true;
  ScanOptions witness_search;
};

VerifierReport verify_wedge_dim(const GraphPtr& graph1, const PointRef& at, const Rational& c2, int r, int d,
                                const std::vector<Divisor>& witnesses, const WedgeDimOptions& options = {});
VerifierReport verify_rank_sandwich(const GraphPtr& graph1, const PointRef& at, const Rational& c2, int r, int d,
                                    const BoundsOptions& options = {});
VerifierReport verify_tree_chain(const GraphPtr& star, int steps, std::uint64_t seed = 0);

}  // namespace cactus

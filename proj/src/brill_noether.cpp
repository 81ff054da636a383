#include "cactus/brill_noether.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cactus/errors.hpp"
#include "parallel.hpp"

namespace cactus {

long rho(long g, long r, long d) { return g - (r + 1) * (g - d + r); }

namespace {

// All ways to put `chips` chips on `slots` slots, lexicographically.
void compositions(int chips, int slots, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == slots - 1) {
    cur.push_back(chips);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = chips; k >= 0; --k) {
    cur.push_back(k);
    compositions(chips - k, slots, cur, out);
    cur.pop_back();
  }
}

void subsets_of_size(int n, int k, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = from; i < n; ++i) {
    cur.push_back(i);
    subsets_of_size(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Multisets of size k over n items as nondecreasing index vectors.
void multisets(int n, int k, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = from; i < n; ++i) {
    cur.push_back(i);
    multisets(n, k, i, cur, out);
    cur.pop_back();
  }
}

std::size_t int_pow(std::size_t base, int e) {
  std::size_t out = 1;
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

std::vector<int> unflatten(std::size_t index, int dims, int grid) {
  std::vector<int> out(dims);
  for (int j = dims - 1; j >= 0; --j) {
    out[j] = static_cast<int>(index % grid);
    index /= grid;
  }
  return out;
}

std::size_t flatten(const std::vector<int>& point, int grid) {
  std::size_t out = 0;
  for (int x : point) out = out * grid + x;
  return out;
}

std::vector<PointRef> special_points(const CactusGraph& g) {
  const auto w = g.wedge_points();
  std::set<PointRef> s(w.begin(), w.end());
  s.insert(g.base_point());
  return {s.begin(), s.end()};
}

std::vector<Stratum> enumerate_strata(const CactusGraph& g, const std::vector<PointRef>& specials, int d,
                                      int max_free) {
  std::vector<Stratum> out;
  const int top = std::min({max_free, g.genus(), d});
  for (int f = 0; f <= top; ++f) {
    std::vector<std::vector<int>> loop_sets;
    std::vector<int> cur;
    subsets_of_size(g.genus(), f, 0, cur, loop_sets);
    std::vector<std::vector<int>> patterns;
    compositions(d - f, static_cast<int>(specials.size()), cur, patterns);
    for (const auto& loops : loop_sets) {
      for (const auto& pattern : patterns) {
        Stratum s;
        s.id = static_cast<int>(out.size());
        for (std::size_t k = 0; k < specials.size(); ++k) {
          if (pattern[k] > 0) s.fixed.emplace_back(specials[k], pattern[k]);
        }
        s.free_loops.assign(loops.begin(), loops.end());
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

int capped_rank(RankEngine& engine, const Divisor& d, int r) {
  for (int k = r; k >= 0; --k) {
    if (engine.has_rank_at_least(d, k)) return k;
  }
  return -1;
}

void find_runs(Stratum& s, int grid) {
  const int dims = static_cast<int>(s.free_loops.size());
  if (dims == 0) {
    if (!s.rows.empty() && s.rows[0].marked) s.longest_run = 1;
    return;
  }
  for (int j = 0; j < dims; ++j) {
    for (std::size_t idx = 0; idx < s.rows.size(); ++idx) {
      const std::vector<int>& p = s.rows[idx].grid_point;
      if (p[j] != 0) continue;
      std::vector<int> q = p;
      int start = -1;
      for (int t = 0; t <= grid; ++t) {
        bool marked = false;
        if (t < grid) {
          q[j] = t;
          marked = s.rows[flatten(q, grid)].marked;
        }
        if (marked && start < 0) start = t;
        if (!marked && start >= 0) {
          std::vector<int> at = p;
          at[j] = start;
          s.runs.push_back(PersistenceRun{j, at, start, t - start});
          s.longest_run = std::max(s.longest_run, t - start);
          start = -1;
        }
      }
    }
  }
}

}  // namespace

Divisor stratum_divisor(const GraphPtr& graph, const Stratum& s, const std::vector<int>& grid_point, int grid) {
  Divisor d(graph);
  for (const auto& [p, m] : s.fixed) d.add(p, m);
  for (std::size_t j = 0; j < s.free_loops.size(); ++j) {
    const LoopIndex i = s.free_loops[j];
    d.add(i, graph->circumference(i) * grid_point.at(j) / grid, 1);
  }
  return d;
}

ScanReport stratified_scan(const GraphPtr& graph, int r, int d, const ScanOptions& options) {
  RankEngine engine(graph, options.rank);
  return stratified_scan(engine, r, d, options);
}

ScanReport stratified_scan(RankEngine& engine, int r, int d, const ScanOptions& options) {
  const GraphPtr& graph = engine.graph();
  if (d < 0) throw InputError("scan degree must be nonnegative");
  if (r < 0) throw InputError("scan rank must be nonnegative");
  if (options.grid < 1) throw InputError("grid resolution must be positive");
  if (options.max_free < 0 || options.max_free > 3) throw InputError("max_free must lie in [0, 3]");

  ScanReport report;
  report.r = r;
  report.d = d;
  report.grid = options.grid;
  report.special_points = special_points(*graph);
  report.strata = enumerate_strata(*graph, report.special_points, d, options.max_free);

  std::size_t total = 0;
  for (const Stratum& s : report.strata) total += int_pow(options.grid, static_cast<int>(s.free_loops.size()));
  if (total > options.budget) {
    throw ResourceCapError("scan needs " + std::to_string(total) + " grid evaluations, budget is " +
                           std::to_string(options.budget));
  }

  detail::parallel_for(report.strata.size(), options.threads, [&](std::size_t k) {
    Stratum& s = report.strata[k];
    const int dims = static_cast<int>(s.free_loops.size());
    const std::size_t n = int_pow(options.grid, dims);
    s.rows.resize(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
      ScanRow& row = s.rows[idx];
      row.grid_point = unflatten(idx, dims, options.grid);
      row.rank = capped_rank(engine, stratum_divisor(graph, s, row.grid_point, options.grid), r);
      row.marked = row.rank >= r;
    }
    find_runs(s, options.grid);
  });

  for (const Stratum& s : report.strata) {
    if (!s.free_loops.empty() && s.longest_run >= 3) report.found_positive_dimensional = true;
  }
  return report;
}

std::string format_pattern(const CactusGraph& graph, const Stratum& s) {
  std::string out;
  for (const auto& [p, m] : s.fixed) {
    if (!out.empty()) out += ' ';
    out += format_point(graph, p) + "*" + std::to_string(m);
  }
  for (LoopIndex i : s.free_loops) {
    if (!out.empty()) out += ' ';
    out += "free:" + graph.name(i);
  }
  return out;
}

std::string format_coord_names(const CactusGraph& graph, const Stratum& s) {
  std::string out;
  for (LoopIndex i : s.free_loops) {
    if (!out.empty()) out += ' ';
    out += graph.name(i);
  }
  return out;
}

std::string scan_csv(const CactusGraph& graph, const ScanReport& report) {
  std::ostringstream out;
  out << "stratum_id,pattern,coord_names,grid_point,rank,marked\n";
  for (const Stratum& s : report.strata) {
    const std::string pattern = format_pattern(graph, s);
    const std::string names = format_coord_names(graph, s);
    for (const ScanRow& row : s.rows) {
      out << s.id << ',' << pattern << ',' << names << ',';
      for (std::size_t j = 0; j < row.grid_point.size(); ++j) {
        if (j) out << ' ';
        Rational x(row.grid_point[j], report.grid);
        x.canonicalize();
        out << to_string(x);
      }
      out << ',' << row.rank << ',' << (row.marked ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::optional<Divisor> find_witness(RankEngine& engine, int r, int d, const ScanOptions& options) {
  const GraphPtr& graph = engine.graph();
  if (d < 0 || r < 0) return std::nullopt;
  const auto specials = special_points(*graph);
  std::size_t spent = 0;
  for (const Stratum& s : enumerate_strata(*graph, specials, d, options.max_free)) {
    const int dims = static_cast<int>(s.free_loops.size());
    const std::size_t n = int_pow(options.grid, dims);
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (++spent > options.budget) throw ResourceCapError("witness search exceeded its budget");
      Divisor cand = stratum_divisor(graph, s, unflatten(idx, dims, options.grid), options.grid);
      if (engine.has_rank_at_least(cand, r)) return cand;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

constexpr long kWeightPrimes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

Rational weight(int combination, int position) {
  const long p = kWeightPrimes[(combination * 3 + position) % 12];
  return Rational(1, 2) + Rational(1, p);
}

}  // namespace

DivisorClass perturbed_class(const CactusGraph& graph, const DivisorClass& cls, const std::vector<LoopIndex>& subset,
                             int combination, const Rational& magnitude, int sign) {
  DivisorClass out = cls;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const LoopIndex i = subset[j];
    const Rational& c = graph.circumference(i);
    out.mu[i] = mod_positive(out.mu[i] + Rational(sign) * magnitude * weight(combination, static_cast<int>(j)) * c, c);
  }
  return out;
}

DimProbe local_dim_probe(const Divisor& d, int r, const ProbeOptions& options) {
  RankEngine engine(d.graph());
  return local_dim_probe(engine, d, r, options);
}

DimProbe local_dim_probe(RankEngine& engine, const Divisor& d, int r, const ProbeOptions& options) {
  const GraphPtr& graph = engine.graph();
  if (!engine.has_rank_at_least(d, r)) throw InputError("probe base divisor has rank below " + std::to_string(r));
  DimProbe probe;
  probe.base_class = class_coordinates(d);
  probe.r = r;

  std::vector<std::vector<int>> subsets;
  for (int k = 1; k <= std::min(options.subset_limit, graph->genus()); ++k) {
    std::vector<int> cur;
    subsets_of_size(graph->genus(), k, 0, cur, subsets);
  }
  const Rational magnitudes[] = {Rational(1, 64), Rational(1, 128)};
  std::vector<std::vector<ProbeRow>> rows(subsets.size());
  detail::parallel_for(subsets.size(), options.threads, [&](std::size_t k) {
    const std::vector<LoopIndex> subset(subsets[k].begin(), subsets[k].end());
    for (int combo = 0; combo < 4; ++combo) {
      for (const Rational& mag : magnitudes) {
        for (int sign : {1, -1}) {
          const DivisorClass moved = perturbed_class(*graph, probe.base_class, subset, combo, mag, sign);
          const bool ok = engine.has_rank_at_least(representative_from_class(graph, moved), r);
          rows[k].push_back(ProbeRow{subset, combo, mag, sign, ok});
        }
      }
    }
  });
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const bool all = std::all_of(rows[k].begin(), rows[k].end(), [](const ProbeRow& row) { return row.persisted; });
    if (all) {
      std::vector<LoopIndex> subset(subsets[k].begin(), subsets[k].end());
      if (static_cast<int>(subset.size()) > probe.estimated_local_dim) {
        probe.estimated_local_dim = static_cast<int>(subset.size());
        probe.persistent_directions = subset;
      }
      probe.persistent_subsets.push_back(std::move(subset));
    }
    for (ProbeRow& row : rows[k]) probe.rows.push_back(std::move(row));
  }
  return probe;
}

std::string probe_csv(const CactusGraph& graph, const DimProbe& probe) {
  std::ostringstream out;
  out << "direction_subset,magnitude,persisted\n";
  for (const ProbeRow& row : probe.rows) {
    for (std::size_t j = 0; j < row.subset.size(); ++j) {
      if (j) out << ' ';
      out << graph.name(row.subset[j]);
    }
    out << ',' << (row.sign < 0 ? "-" : "") << to_string(row.magnitude) << ',' << (row.persisted ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

BNRankBounds bn_rank_bounds(const GraphPtr& graph, int r, int d, const BoundsOptions& options) {
  if (r < 0 || d < 0) throw InputError("Brill-Noether rank needs r >= 0 and d >= 0");
  if (options.grid < 1) throw InputError("grid resolution must be positive");
  BNRankBounds out;
  out.r = r;
  out.d = d;
  if (d < r) {
    out.counterexample_E = point_divisor(graph, graph->base_point(), r);
    out.upper_from_counterexample = true;
    return out;
  }

  RankEngine engine(graph, options.rank);
  const std::vector<PointRef>& adversary = engine.fixed_candidates();
  std::vector<PointRef> extras = adversary;
  {
    std::set<PointRef> seen(extras.begin(), extras.end());
    for (LoopIndex i = 0; i < graph->genus(); ++i) {
      for (int k = 0; k < options.grid; ++k) {
        const PointRef p = graph->canonical_point(i, graph->circumference(i) * k / options.grid);
        if (seen.insert(p).second) extras.push_back(p);
      }
    }
  }

  for (int k = 0; k <= d - r; ++k) {
    std::vector<std::vector<int>> es, fs;
    std::vector<int> cur;
    multisets(static_cast<int>(adversary.size()), r + k, 0, cur, es);
    multisets(static_cast<int>(extras.size()), d - r - k, 0, cur, fs);
    for (const auto& e_idx : es) {
      Divisor e(graph);
      for (int i : e_idx) e.add(adversary[i], 1);
      bool covered = false;
      for (const auto& f_idx : fs) {
        if (out.evaluations >= options.budget) {
          out.widened = true;
          out.lower = k - 1;
          out.upper = d - r;
          return out;
        }
        ++out.evaluations;
        Divisor cand = e;
        for (int i : f_idx) cand.add(extras[i], 1);
        if (engine.has_rank_at_least(cand, r)) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        out.lower = out.upper = k - 1;
        out.counterexample_E = std::move(e);
        out.upper_from_counterexample = true;
        return out;
      }
    }
  }
  out.lower = out.upper = d - r;
  return out;
}

}  // namespace cactus

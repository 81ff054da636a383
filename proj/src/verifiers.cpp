#include <algorithm>
#include <sstream>

#include "cactus/brill_noether.hpp"
#include "cactus/errors.hpp"
#include "cactus/random_cactus.hpp"
#include "cactus/reduction.hpp"

namespace cactus {

bool VerifierReport::verified() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerifierReport::text() const {
  std::ostringstream out;
  out << "verify " << name << '\n';
  for (const Check& c : checks) {
    out << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
  }
  for (const auto& [k, v] : facts) out << k << '=' << v << '\n';
  out << "verdict: " << verdict << '\n';
  out << "status: " << (verified() ? "verified" : "failed") << '\n';
  return out.str();
}

namespace {

std::vector<LoopIndex> neighbours(const CactusGraph& g, LoopIndex i) {
  std::vector<LoopIndex> out = g.children(i);
  if (g.parent(i) >= 0) out.push_back(g.parent(i));
  std::sort(out.begin(), out.end());
  return out;
}

LoopIndex star_centre(const CactusGraph& g) {
  const GraphStats stats = graph_stats(g);
  if (stats.genus != 4 || stats.longest_loop_path != 3) {
    throw InputError("expected a genus-4 star (g=4, l=3), got g=" + std::to_string(stats.genus) +
                     ", l=" + std::to_string(stats.longest_loop_path));
  }
  for (LoopIndex i = 0; i < g.genus(); ++i) {
    if (neighbours(g, i).size() == 3) return i;
  }
  throw InternalError("genus-4 tree with l=3 has no degree-3 loop");
}

Divisor transport(const Divisor& d, const GraphPtr& to) {
  Divisor out(to);
  for (const auto& [p, m] : d.chips()) out.add(p.loop, p.offset, m);
  return out;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
  return out;
}

}  // namespace

Divisor star_family_divisor(const GraphPtr& star, const Rational& t) {
  const LoopIndex centre = star_centre(*star);
  const auto nb = neighbours(*star, centre);
  const Rational a = star->loop_projection(nb[0], centre);
  const Rational b = star->loop_projection(nb[1], centre);
  Divisor d(star);
  d.add(centre, a, 1);
  d.add(centre, b, 1);
  d.add(centre, a + t * star->circumference(centre), 1);
  return d;
}

VerifierReport verify_lemma_w13(const GraphPtr& star, int grid) {
  if (grid < 1) throw InputError("grid resolution must be positive");
  star_centre(*star);
  VerifierReport rep;
  rep.name = "lemma-w13";
  RankEngine engine(star);

  int passes = 0;
  std::string first_failure;
  for (int k = 0; k < grid; ++k) {
    Rational t(k, grid);
    t.canonicalize();
    if (engine.has_rank_at_least(star_family_divisor(star, t), 1)) {
      ++passes;
    } else if (first_failure.empty()) {
      first_failure = "fails at t=" + to_string(t);
    }
  }
  rep.checks.push_back({"rank(D_t) >= 1 on the grid", passes == grid,
                        std::to_string(passes) + "/" + std::to_string(grid) +
                            (first_failure.empty() ? "" : ", " + first_failure)});

  const long r = rho(4, 1, 3);
  rep.checks.push_back({"rho(4,1,3) = 0", r == 0, "rho=" + std::to_string(r)});

  std::vector<int> dims;
  ProbeOptions popt;
  popt.subset_limit = 2;
  for (const Rational& t : {Rational(1, 8), Rational(3, 8), Rational(5, 8)}) {
    dims.push_back(local_dim_probe(engine, star_family_divisor(star, t), 1, popt).estimated_local_dim);
  }
  const bool probes_ok = std::all_of(dims.begin(), dims.end(), [&](int d) { return d >= 1 && d > r; });
  rep.checks.push_back({"local dimension > rho at t = 1/8, 3/8, 5/8", probes_ok, "dims " + join_ints(dims)});

  rep.facts = {{"genus", "4"}, {"r", "1"}, {"d", "3"}, {"rho", std::to_string(r)}, {"grid", std::to_string(grid)},
               {"rank_passes", std::to_string(passes)}, {"probe_dims", join_ints(dims)}};
  rep.verdict = rep.verified() ? "not geometric Brill-Noether general" : "inconclusive";
  return rep;
}

VerifierReport verify_prop_weak(const GraphPtr& graph) {
  const GraphStats stats = graph_stats(*graph);
  const int g = stats.genus;
  const int l = stats.longest_loop_path;
  if (l > g - 2) {
    throw InputError("longest loop path l=" + std::to_string(l) + " exceeds g-2=" + std::to_string(g - 2));
  }
  const std::vector<LoopIndex> path = longest_loop_path(*graph);
  const bool even = l % 2 == 0;

  PointRef q;
  std::vector<LoopIndex> middle;
  Multiplicity degree = 0;
  if (even) {
    const LoopIndex m1 = path[l / 2 - 1], m2 = path[l / 2];
    middle = {m1, m2};
    q = graph->parent(m2) == m1 ? graph->origin_point(m2) : graph->origin_point(m1);
    degree = l / 2 + 1;
  } else {
    const LoopIndex m = path[(l - 1) / 2];
    middle = {m};
    q = graph->canonical_point(m, generic_samples(*graph, m, 1).front());
    degree = (l + 3) / 2;
  }
  const Divisor d = point_divisor(graph, q, degree);

  VerifierReport rep;
  rep.name = "prop-weak";
  RankEngine engine(graph);
  rep.checks.push_back({"rank(D) >= 1", engine.has_rank_at_least(d, 1), ""});

  int worst_margin = 1 << 30;
  std::string failures;
  for (LoopIndex loop = 0; loop < g; ++loop) {
    int k = 1 << 30;
    for (LoopIndex m : middle) k = std::min(k, graph->loop_distance(loop, m));
    const long bound = even ? l / 2 - k + 1 : (l + 3) / 2 - k;
    const PointRef mid = graph->canonical_point(loop, graph->circumference(loop) / 2);
    const Multiplicity got = degree_on_closed_loop(q_reduce(d, mid), loop);
    worst_margin = std::min<int>(worst_margin, static_cast<int>(got - bound));
    if (got < bound) {
      failures += (failures.empty() ? "" : "; ") + graph->name(loop) + ": " + std::to_string(got) + " < " +
                  std::to_string(bound);
    }
  }
  rep.checks.push_back({"reduced degree on every loop meets its distance bound", failures.empty(),
                        failures.empty() ? "minimum slack " + std::to_string(worst_margin) : failures});

  const long r = rho(g, 1, degree);
  const long expected = even ? -g + l : -g + l + 1;
  rep.checks.push_back({"rho(g,1,deg D) < 0", r < 0, "rho=" + std::to_string(r)});
  rep.checks.push_back({"rho matches the closed form", r == expected, "expected " + std::to_string(expected)});

  rep.facts = {{"genus", std::to_string(g)},
               {"l", std::to_string(l)},
               {"parity", even ? "even" : "odd"},
               {"q", format_point(*graph, q)},
               {"degree", std::to_string(degree)},
               {"rho", std::to_string(r)}};
  rep.verdict = rep.verified() ? "not weakly geometric Brill-Noether general" : "inconclusive";
  return rep;
}

VerifierReport verify_wedge_dim(const GraphPtr& graph1, const PointRef& at, const Rational& c2, int r, int d,
                                const std::vector<Divisor>& witnesses_in, const WedgeDimOptions& options) {
  if (r < 0 || d < 0) throw InputError("need r >= 0 and d >= 0");
  if (options.samples < 1) throw InputError("need at least one sample");
  RankEngine engine1(graph1, options.witness_search.rank);
  std::vector<Divisor> witnesses;
  for (const Divisor& w : witnesses_in) {
    if (w.graph() != graph1) throw InputError("witness lives on a different graph");
    if (w.degree() != d || !engine1.has_rank_at_least(w, r)) {
      throw InputError("supplied witness is not in W^" + std::to_string(r) + "_" + std::to_string(d));
    }
    witnesses.push_back(w);
  }
  if (witnesses.empty()) {
    if (auto w = find_witness(engine1, r, d, options.witness_search)) witnesses.push_back(*w);
  }
  if (witnesses.empty()) throw InputError("no witness divisor of the requested rank and degree was found");

  const GraphPtr graph = wedge_with_loop(*graph1, graph1->canonical_point(at.loop, at.offset), c2);
  const LoopIndex fresh = graph->genus() - 1;
  RankEngine engine(graph);
  Rng rng(options.seed);

  VerifierReport rep;
  rep.name = "wedge-dim";
  int passes = 0, e_passes = 0;
  std::string failure;
  for (int s = 0; s < options.samples; ++s) {
    const Divisor base = transport(witnesses[s % witnesses.size()], graph);
    const Rational x = random_offset(rng, c2);
    const Divisor glued = base + point_divisor(graph, graph->canonical_point(fresh, x));
    if (engine.has_rank_at_least(glued, r)) {
      ++passes;
    } else if (failure.empty()) {
      failure = "fails for " + format_divisor(glued);
    }
    // Removing one chip on the new loop costs at most one rank.
    const Divisor less = glued - point_divisor(graph, graph->canonical_point(fresh, random_offset(rng, c2)));
    if (engine.has_rank_at_least(less, r - 1)) ++e_passes;
  }
  rep.checks.push_back({"rank(D + p) >= r", passes == options.samples,
                        std::to_string(passes) + "/" + std::to_string(options.samples) +
                            (failure.empty() ? "" : ", " + failure)});
  rep.checks.push_back({"rank(D + p - p') >= r - 1 for p' on the new loop", e_passes == options.samples,
                        std::to_string(e_passes) + "/" + std::to_string(options.samples)});

  rep.facts = {{"genus", std::to_string(graph->genus())},
               {"r", std::to_string(r)},
               {"d", std::to_string(d + 1)},
               {"samples", std::to_string(options.samples)},
               {"rho", std::to_string(rho(graph->genus(), r, d + 1))}};
  if (options.probe) {
    ProbeOptions popt;
    popt.subset_limit = options.probe_limit;
    const int before = local_dim_probe(engine1, witnesses.front(), r, popt).estimated_local_dim;
    popt.subset_limit = options.probe_limit + 1;
    const Divisor glued =
        transport(witnesses.front(), graph) +
        point_divisor(graph, graph->canonical_point(fresh, generic_samples(*graph, fresh, 1).front()));
    const int after = local_dim_probe(engine, glued, r, popt).estimated_local_dim;
    rep.checks.push_back({"probe grows by one", after >= before + 1,
                          std::to_string(before) + " -> " + std::to_string(after)});
    rep.facts.emplace_back("probe_base", std::to_string(before));
    rep.facts.emplace_back("probe_glued", std::to_string(after));
  }
  rep.verdict = rep.verified() ? "dimension bound holds on the wedge sum" : "inconclusive";
  return rep;
}

VerifierReport verify_rank_sandwich(const GraphPtr& graph1, const PointRef& at, const Rational& c2, int r, int d,
                                    const BoundsOptions& options) {
  if (r < 1) throw InputError("the sandwich needs r >= 1");
  const BNRankBounds low = bn_rank_bounds(graph1, r, d, options);
  if (low.upper < 0) {
    throw InputError("W^" + std::to_string(r) + "_" + std::to_string(d) + " of the first graph is empty");
  }
  const GraphPtr graph = wedge_with_loop(*graph1, graph1->canonical_point(at.loop, at.offset), c2);
  const BNRankBounds mid = bn_rank_bounds(graph, r, d + 1, options);
  const BNRankBounds high = bn_rank_bounds(graph1, r - 1, d, options);

  auto interval = [](const BNRankBounds& b) {
    return "[" + std::to_string(b.lower) + "," + std::to_string(b.upper) + "]" + (b.widened ? " widened" : "");
  };
  VerifierReport rep;
  rep.name = "rank-sandwich";
  rep.checks.push_back({"lower w(G1,r,d) <= upper w(G,r,d+1)", low.lower <= mid.upper,
                        interval(low) + " vs " + interval(mid)});
  rep.checks.push_back({"lower w(G,r,d+1) <= upper w(G1,r-1,d)", mid.lower <= high.upper,
                        interval(mid) + " vs " + interval(high)});
  rep.facts = {{"w_first", interval(low)}, {"w_glued", interval(mid)}, {"w_first_lower_rank", interval(high)}};
  rep.verdict = rep.verified() ? "Brill-Noether rank intervals are consistent" : "inconsistent intervals";
  return rep;
}

VerifierReport verify_tree_chain(const GraphPtr& star, int steps, std::uint64_t seed) {
  if (steps < 0) throw InputError("steps must be nonnegative");
  const LoopIndex centre = star_centre(*star);
  VerifierReport rep;
  rep.name = "tree-chain";
  Rng rng(seed);

  GraphPtr graph = star;
  Divisor d = star_family_divisor(star, Rational(1, 8));
  LoopIndex last = centre;
  for (int i = 0; i <= steps; ++i) {
    if (i > 0) {
      const Rational c = random_circumference(rng);
      const PointRef at = graph->canonical_point(last, random_offset(rng, graph->circumference(last)));
      graph = wedge_with_loop(*graph, at, c);
      last = graph->genus() - 1;
      d = transport(d, graph);
      d.add(last, random_offset(rng, c), 1);
    }
    RankEngine engine(graph);
    const std::string tag = "step" + std::to_string(i);
    const bool ranked = engine.has_rank_at_least(d, 1);
    rep.checks.push_back({tag + " rank >= 1", ranked, ""});
    const long r = rho(graph->genus(), 1, 3 + i);
    int dim = -1;
    if (ranked) {
      ProbeOptions popt;
      popt.subset_limit = std::min(i + 1, 3);
      dim = local_dim_probe(engine, d, 1, popt).estimated_local_dim;
    }
    rep.checks.push_back({tag + " local dimension >= " + std::to_string(i + 1) + " > rho", dim >= i + 1 && dim > r,
                          "dim " + std::to_string(dim) + ", rho " + std::to_string(r)});
    rep.facts.emplace_back(tag, "genus=" + std::to_string(graph->genus()) + " d=" + std::to_string(3 + i) +
                                    " rho=" + std::to_string(r) + " dim>=" + std::to_string(dim));
  }
  rep.verdict = rep.verified() ? "not geometric Brill-Noether general at every step" : "inconclusive";
  return rep;
}

}  // namespace cactus

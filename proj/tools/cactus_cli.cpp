// cactus: command-line front end for the cactus divisor library.
//
// Exit codes: 0 success / verified, 1 verification failed, 2 input or usage
// error, 3 resource cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cactus/brill_noether.hpp"
#include "cactus/errors.hpp"
#include "cactus/random_cactus.hpp"
#include "cactus/reduction.hpp"
#include "json.hpp"
#include "subdivided_dhar.hpp"

using namespace cactus;
using json = nlohmann::ordered_json;

namespace {

constexpr int kVerified = 0;
constexpr int kFailed = 1;
constexpr int kInput = 2;
constexpr int kCap = 3;

struct Common {
  bool json = false;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 1;
};

struct Output {
  std::ostringstream text;
  json doc = json::object();
  int code = kVerified;
};

json point_json(const CactusGraph& g, const PointRef& p) { return format_point(g, p); }

json divisor_json(const Divisor& d) {
  json chips = json::array();
  for (const auto& [p, m] : d.chips()) {
    chips.push_back({{"loop", d.graph()->name(p.loop)}, {"offset", to_string(p.offset)}, {"multiplicity", m}});
  }
  return chips;
}

json class_json(const CactusGraph& g, const DivisorClass& cls) {
  json mu = json::object();
  for (LoopIndex i = 0; i < g.genus(); ++i) mu[g.name(i)] = to_string(cls.mu[i]);
  return {{"degree", cls.degree}, {"mu", mu}};
}

json report_json(const VerifierReport& rep) {
  json checks = json::array();
  for (const Check& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json facts = json::object();
  for (const auto& [k, v] : rep.facts) facts[k] = v;
  return {{"verifier", rep.name}, {"verified", rep.verified()}, {"checks", checks}, {"facts", facts},
          {"verdict", rep.verdict}};
}

std::string class_header(const CactusGraph& g, const DivisorClass& cls) {
  std::string out = "# degree " + std::to_string(cls.degree) + "\n";
  for (LoopIndex i = 0; i < g.genus(); ++i) out += "# mu " + g.name(i) + " " + to_string(cls.mu[i]) + "\n";
  return out;
}

PointRef base_or_default(const GraphPtr& g, const std::string& text) {
  return text.empty() ? g->base_point() : parse_point(*g, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chip-firing divisor theory on trees of loops with exact rational lengths"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "Structured output (JSON, schema 1)");
  app.add_option("--seed", common.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("-o,--out", common.out, "Write the result to this file instead of stdout");
  app.add_option("--threads", common.threads, "Worker threads for scans and probes")->capture_default_str();

  std::string graph_path, div_path, div2_path, base, at_text, circumference_text = "1";
  int r = 1, d = 0, grid = 16, max_free = 1, subset_limit = 2, samples = 1, wedge_samples = 20, steps = 2;
  int count = 100, lemma_grid = 64, wrd_grid = 4;
  int max_genus = 4, max_degree = 6, oracle_grid = 24;
  std::optional<int> max_r;
  std::size_t budget = 200000, max_states = 0;
  bool witness = false, free_chip = false;
  std::string method = "closed";
  std::vector<std::string> mu_args, witness_paths;

  auto add_rank_flags = [&](CLI::App* sub) {
    sub->add_option("--samples", samples, "Generic sample points per loop in the adversary set")->capture_default_str();
    sub->add_flag("--free-chip", free_chip, "Also offer the per-loop free-chip positions to the adversary");
    sub->add_option("--max-states", max_states, "Cap on memoised game states (0 = none)")->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "Genus, longest loop path, wedge points");
  info->add_option("graph", graph_path, "Graph file")->required();

  auto* reduce = app.add_subcommand("reduce", "v-reduced representative of a divisor");
  reduce->add_option("graph", graph_path, "Graph file")->required();
  reduce->add_option("divisor", div_path, "Divisor file")->required();
  reduce->add_option("--base", base, "Reduction point, e.g. L1:0 (default: graph base point)");
  reduce->add_option("--method", method, "closed | burning | oracle")
      ->check(CLI::IsMember({"closed", "burning", "oracle"}))
      ->capture_default_str();

  auto* burn = app.add_subcommand("burn", "Dhar burning report as CSV");
  burn->add_option("graph", graph_path, "Graph file")->required();
  burn->add_option("divisor", div_path, "Divisor file")->required();
  burn->add_option("--base", base, "Fire source (default: graph base point)");

  auto* rank_cmd = app.add_subcommand("rank", "Divisor rank via the removal game");
  rank_cmd->add_option("graph", graph_path, "Graph file")->required();
  rank_cmd->add_option("divisor", div_path, "Divisor file")->required();
  rank_cmd->add_option("--max-r", max_r, "Stop the search at this rank (default: degree)");
  rank_cmd->add_flag("--witness", witness, "Print the refuting removal sequence");
  add_rank_flags(rank_cmd);

  auto* equiv = app.add_subcommand("equiv", "Linear equivalence of two divisors");
  equiv->add_option("graph", graph_path, "Graph file")->required();
  equiv->add_option("divisor", div_path, "First divisor file")->required();
  equiv->add_option("other", div2_path, "Second divisor file")->required();

  auto* cls_cmd = app.add_subcommand("class", "Degree and per-loop class coordinates");
  cls_cmd->add_option("graph", graph_path, "Graph file")->required();
  cls_cmd->add_option("divisor", div_path, "Divisor file")->required();

  auto* rep_cmd = app.add_subcommand("rep", "Representative divisor of a class");
  rep_cmd->add_option("graph", graph_path, "Graph file")->required();
  rep_cmd->add_option("--degree", d, "Degree of the class")->required();
  rep_cmd->add_option("--mu", mu_args, "Class coordinate LOOP=VALUE (default 0), repeatable");

  auto* rr = app.add_subcommand("rr-check", "Riemann-Roch residual r(D) - r(K-D) - deg D - 1 + g");
  rr->add_option("graph", graph_path, "Graph file")->required();
  rr->add_option("divisor", div_path, "Divisor file")->required();
  add_rank_flags(rr);

  auto* scan = app.add_subcommand("scan", "Stratified scan of W^r_d as CSV");
  scan->add_option("graph", graph_path, "Graph file")->required();
  scan->add_option("-r", r, "Rank")->capture_default_str();
  scan->add_option("-d", d, "Degree")->required();
  scan->add_option("--grid", grid, "Grid resolution N per free chip")->capture_default_str();
  scan->add_option("--max-free", max_free, "Loops carrying a free chip (<= 3)")->capture_default_str();
  scan->add_option("--budget", budget, "Cap on grid evaluations")->capture_default_str();
  add_rank_flags(scan);

  auto* probe = app.add_subcommand("probe", "Local dimension probe of W^r_d at a divisor, CSV");
  probe->add_option("graph", graph_path, "Graph file")->required();
  probe->add_option("divisor", div_path, "Divisor file")->required();
  probe->add_option("-r", r, "Rank")->capture_default_str();
  probe->add_option("--subset-limit", subset_limit, "Largest direction subset tried")->capture_default_str();
  add_rank_flags(probe);

  auto* wrd = app.add_subcommand("wrd", "Brill-Noether rank bounds for w^r_d");
  wrd->add_option("graph", graph_path, "Graph file")->required();
  wrd->add_option("-r", r, "Rank")->capture_default_str();
  wrd->add_option("-d", d, "Degree")->required();
  wrd->add_option("--grid", wrd_grid, "Grid per loop in the cover search")->capture_default_str();
  wrd->add_option("--budget", budget, "Cap on rank evaluations")->capture_default_str();
  add_rank_flags(wrd);

  auto* wedge = app.add_subcommand("wedge", "Glue a new loop at a point and print the graph");
  wedge->add_option("graph", graph_path, "Graph file")->required();
  wedge->add_option("--at", at_text, "Gluing point, e.g. L1:1/2")->required();
  wedge->add_option("--circumference", circumference_text, "Length of the new loop")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run a verifier");
  verify->require_subcommand(1);
  auto* v_lemma = verify->add_subcommand("lemma-w13", "Genus-4 star carries a one-parameter family in W^1_3");
  v_lemma->add_option("graph", graph_path, "Genus-4 star graph file")->required();
  v_lemma->add_option("--grid", lemma_grid, "Number of family parameters checked")->capture_default_str();
  auto* v_prop = verify->add_subcommand("prop-weak", "Trees with l <= g-2 are not weakly Brill-Noether general");
  v_prop->add_option("graph", graph_path, "Graph file")->required();
  auto* v_wedge = verify->add_subcommand("wedge-dim", "Dimension grows by one under gluing a loop");
  v_wedge->add_option("graph", graph_path, "First graph file")->required();
  v_wedge->add_option("--at", at_text, "Gluing point")->required();
  v_wedge->add_option("--circumference", circumference_text, "Length of the new loop")->capture_default_str();
  v_wedge->add_option("-r", r, "Rank")->capture_default_str();
  v_wedge->add_option("-d", d, "Degree on the first graph")->required();
  v_wedge->add_option("--witness", witness_paths, "Divisor file in W^r_d of the first graph, repeatable");
  v_wedge->add_option("--samples", wedge_samples, "Random points on the new loop")->capture_default_str();
  auto* v_sand = verify->add_subcommand("rank-sandwich", "w^r_d(G1) <= w^r_{d+1}(G) <= w^{r-1}_d(G1)");
  v_sand->add_option("graph", graph_path, "First graph file")->required();
  v_sand->add_option("--at", at_text, "Gluing point")->required();
  v_sand->add_option("--circumference", circumference_text, "Length of the new loop")->capture_default_str();
  v_sand->add_option("-r", r, "Rank")->capture_default_str();
  v_sand->add_option("-d", d, "Degree on the first graph")->required();
  v_sand->add_option("--budget", budget, "Cap on rank evaluations per bound")->capture_default_str();
  auto* v_chain = verify->add_subcommand("tree-chain", "Glue loops onto the star and compare dimensions with rho");
  v_chain->add_option("graph", graph_path, "Genus-4 star graph file")->required();
  v_chain->add_option("--steps", steps, "Loops to glue")->capture_default_str();
  auto* v_rr = verify->add_subcommand("rr-random", "Riemann-Roch residuals on random instances");
  v_rr->add_option("--count", count, "Instances")->capture_default_str();
  v_rr->add_option("--max-genus", max_genus, "Largest genus")->capture_default_str();
  v_rr->add_option("--max-degree", max_degree, "Largest |deg D|")->capture_default_str();
  auto* v_oracle = verify->add_subcommand("oracle-check", "Closed-form, burning and subdivision reducers agree");
  v_oracle->add_option("--count", count, "Instances")->capture_default_str();
  v_oracle->add_option("--max-genus", max_genus, "Largest genus")->capture_default_str();
  v_oracle->add_option("--max-degree", max_degree, "Largest |deg D|")->capture_default_str();
  v_oracle->add_option("--grid", oracle_grid, "Largest common denominator")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }

  Output out;
  out.doc["schema"] = 1;
  auto rank_options = [&] {
    RankOptions o;
    o.samples_per_loop = samples;
    o.free_chip_candidates = free_chip;
    o.max_states = max_states;
    return o;
  };

  try {
    GraphPtr graph;
    if (!graph_path.empty()) graph = load_graph(graph_path);
    auto load_div = [&](const std::string& path) { return load_divisor(graph, path); };

    if (*info) {
      out.doc["command"] = "info";
      const GraphStats stats = graph_stats(*graph);
      out.text << "genus=" << stats.genus << "\nlongest_loop_path=" << stats.longest_loop_path
               << "\nbase_point=" << format_point(*graph, graph->base_point()) << '\n';
      json wedges = json::array();
      for (const auto& [p, v] : stats.wedge_valences) {
        out.text << "wedge " << format_point(*graph, p) << " valence=" << v << '\n';
        wedges.push_back({{"point", point_json(*graph, p)}, {"valence", v}});
      }
      out.doc["genus"] = stats.genus;
      out.doc["longest_loop_path"] = stats.longest_loop_path;
      out.doc["base_point"] = point_json(*graph, graph->base_point());
      out.doc["wedge_points"] = wedges;
    } else if (*reduce) {
      out.doc["command"] = "reduce";
      const Divisor dv = load_div(div_path);
      const PointRef v = base_or_default(graph, base);
      Divisor result = method == "closed"    ? q_reduce(dv, v)
                       : method == "burning" ? reduce_by_burning(dv, v).divisor
                                             : oracle::subdivided_reduce(dv, v);
      const DivisorClass cls = class_coordinates(result);
      out.text << class_header(*graph, cls) << format_divisor(result);
      out.doc["base"] = point_json(*graph, v);
      out.doc["class"] = class_json(*graph, cls);
      out.doc["divisor"] = divisor_json(result);
    } else if (*burn) {
      out.doc["command"] = "burn";
      const Divisor dv = load_div(div_path);
      const BurnReport br = dhar_burn(dv, base_or_default(graph, base));
      out.text << "point,chips,arriving_directions,burnt\n";
      json rows = json::array();
      for (const auto& row : br.rows) {
        out.text << format_point(*graph, row.point) << ',' << row.chips << ',' << row.burnt_directions << ','
                 << (row.burnt ? 1 : 0) << '\n';
        rows.push_back({{"point", point_json(*graph, row.point)}, {"chips", row.chips},
                        {"arriving_directions", row.burnt_directions}, {"burnt", row.burnt}});
      }
      json arcs = json::array();
      for (const Arc& a : br.unburnt_arcs) {
        arcs.push_back({{"loop", graph->name(a.loop)}, {"start", to_string(a.start)}, {"length", to_string(a.length)}});
      }
      json points = json::array();
      for (const auto& p : br.unburnt_points) points.push_back(point_json(*graph, p));
      out.doc["fully_burnt"] = br.fully_burnt;
      out.doc["rows"] = rows;
      out.doc["unburnt_arcs"] = arcs;
      out.doc["unburnt_points"] = points;
    } else if (*rank_cmd) {
      out.doc["command"] = "rank";
      const Divisor dv = load_div(div_path);
      RankEngine engine(graph, rank_options());
      const RankWitness w = engine.rank(dv, max_r);
      out.text << "rank=" << w.rank << '\n';
      if (w.lower_bound_only) out.text << "lower_bound_only=1\n";
      if (witness) {
        Divisor seq(graph);
        for (const auto& p : w.refuting_sequence) seq.add(p, 1);
        out.text << "# refuting removals\n" << format_divisor(seq);
      }
      json seq = json::array();
      for (const auto& p : w.refuting_sequence) seq.push_back(point_json(*graph, p));
      json cands = json::array();
      for (const auto& p : w.candidate_log) cands.push_back(point_json(*graph, p));
      out.doc["rank"] = w.rank;
      out.doc["lower_bound_only"] = w.lower_bound_only;
      out.doc["refuting_sequence"] = seq;
      out.doc["candidates"] = cands;
    } else if (*equiv) {
      out.doc["command"] = "equiv";
      const bool same = class_coordinates(load_div(div_path)) == class_coordinates(load_div(div2_path));
      out.text << "equivalent=" << (same ? 1 : 0) << '\n';
      out.doc["equivalent"] = same;
    } else if (*cls_cmd) {
      out.doc["command"] = "class";
      const DivisorClass cls = class_coordinates(load_div(div_path));
      out.text << "degree=" << cls.degree << '\n';
      for (LoopIndex i = 0; i < graph->genus(); ++i) out.text << "mu_" << graph->name(i) << '=' << to_string(cls.mu[i]) << '\n';
      out.doc["class"] = class_json(*graph, cls);
    } else if (*rep_cmd) {
      out.doc["command"] = "rep";
      DivisorClass cls;
      cls.degree = d;
      cls.mu.assign(graph->genus(), Rational(0));
      for (const std::string& arg : mu_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) throw InputError("expected LOOP=VALUE, got '" + arg + "'");
        const LoopIndex i = graph->loop_index(arg.substr(0, eq));
        const Rational x = parse_rational(arg.substr(eq + 1));
        if (sgn(x) < 0 || x >= graph->circumference(i)) throw InputError("class coordinate out of range: " + arg);
        cls.mu[i] = x;
      }
      const Divisor result = representative_from_class(graph, cls);
      out.text << class_header(*graph, cls) << format_divisor(result);
      out.doc["class"] = class_json(*graph, cls);
      out.doc["divisor"] = divisor_json(result);
    } else if (*rr) {
      out.doc["command"] = "rr-check";
      RankEngine engine(graph, rank_options());
      const RiemannRochCheck c = riemann_roch_residual(load_div(div_path), engine);
      out.text << "residual=" << c.residual << "\nrank_D=" << c.rank_d << "\nrank_K_minus_D=" << c.rank_k_minus_d
               << "\nverified=" << (c.verified ? 1 : 0) << '\n';
      out.doc["residual"] = c.residual;
      out.doc["rank_D"] = c.rank_d;
      out.doc["rank_K_minus_D"] = c.rank_k_minus_d;
      out.doc["verified"] = c.verified;
      out.code = c.residual == 0 && c.verified ? kVerified : kFailed;
    } else if (*scan) {
      out.doc["command"] = "scan";
      ScanOptions o;
      o.grid = grid;
      o.max_free = max_free;
      o.budget = budget;
      o.threads = common.threads;
      o.rank = rank_options();
      const ScanReport rep = stratified_scan(graph, r, d, o);
      out.text << scan_csv(*graph, rep);
      json strata = json::array();
      for (const Stratum& s : rep.strata) {
        int marked = 0;
        for (const ScanRow& row : s.rows) marked += row.marked;
        strata.push_back({{"id", s.id}, {"pattern", format_pattern(*graph, s)}, {"grid_points", s.rows.size()},
                          {"marked", marked}, {"longest_run", s.longest_run}});
      }
      out.doc["r"] = r;
      out.doc["d"] = d;
      out.doc["grid"] = grid;
      out.doc["strata"] = strata;
      out.doc["found_positive_dimensional"] = rep.found_positive_dimensional;
    } else if (*probe) {
      out.doc["command"] = "probe";
      RankEngine engine(graph, rank_options());
      ProbeOptions o;
      o.subset_limit = subset_limit;
      o.threads = common.threads;
      const DimProbe p = local_dim_probe(engine, load_div(div_path), r, o);
      out.text << probe_csv(*graph, p);
      json subsets = json::array();
      for (const auto& s : p.persistent_subsets) {
        json names = json::array();
        for (LoopIndex i : s) names.push_back(graph->name(i));
        subsets.push_back(names);
      }
      out.doc["r"] = r;
      out.doc["base_class"] = class_json(*graph, p.base_class);
      out.doc["persistent_subsets"] = subsets;
      out.doc["estimated_local_dim"] = p.estimated_local_dim;
    } else if (*wrd) {
      out.doc["command"] = "wrd";
      BoundsOptions o;
      o.grid = wrd_grid;
      o.budget = budget;
      o.rank = rank_options();
      const BNRankBounds b = bn_rank_bounds(graph, r, d, o);
      out.text << "lower=" << b.lower << "\nupper=" << b.upper << "\nupper_from_counterexample="
               << (b.upper_from_counterexample ? 1 : 0) << "\nwidened=" << (b.widened ? 1 : 0) << '\n';
      if (b.counterexample_E) out.text << "# uncovered E\n" << format_divisor(*b.counterexample_E);
      out.doc["r"] = r;
      out.doc["d"] = d;
      out.doc["lower"] = b.lower;
      out.doc["upper"] = b.upper;
      out.doc["upper_from_counterexample"] = b.upper_from_counterexample;
      out.doc["widened"] = b.widened;
      out.doc["counterexample_E"] = b.counterexample_E ? divisor_json(*b.counterexample_E) : json(nullptr);
    } else if (*wedge) {
      out.doc["command"] = "wedge";
      const GraphPtr glued = wedge_with_loop(*graph, parse_point(*graph, at_text), parse_rational(circumference_text));
      out.text << format_graph(*glued);
      out.doc["graph"] = format_graph(*glued);
    } else if (*verify) {
      VerifierReport rep;
      if (*v_lemma) {
        rep = verify_lemma_w13(graph, lemma_grid);
      } else if (*v_prop) {
        rep = verify_prop_weak(graph);
      } else if (*v_wedge) {
        std::vector<Divisor> ws;
        for (const auto& path : witness_paths) ws.push_back(load_div(path));
        WedgeDimOptions o;
        o.samples = wedge_samples;
        o.seed = common.seed;
        rep = verify_wedge_dim(graph, parse_point(*graph, at_text), parse_rational(circumference_text), r, d, ws, o);
      } else if (*v_sand) {
        BoundsOptions o;
        o.budget = budget;
        rep = verify_rank_sandwich(graph, parse_point(*graph, at_text), parse_rational(circumference_text), r, d, o);
      } else if (*v_chain) {
        rep = verify_tree_chain(graph, steps, common.seed);
      } else if (*v_rr) {
        if (count < 0 || max_genus < 1 || max_degree < 0) throw InputError("count, max-genus, max-degree out of range");
        rep.name = "rr-random";
        Rng rng(common.seed);
        int zero = 0;
        std::string failure;
        for (int k = 0; k < count; ++k) {
          const int g = 1 + static_cast<int>(rng() % max_genus);
          const GraphPtr h = random_cactus(rng, g, 0, rng() % 2 == 0);
          const long deg = static_cast<long>(rng() % (2 * max_degree + 1)) - max_degree;
          const Divisor dv = random_divisor(rng, h, deg, static_cast<int>(rng() % 2));
          RankEngine engine(h);
          const RiemannRochCheck c = riemann_roch_residual(dv, engine);
          if (c.residual == 0 && c.verified) {
            ++zero;
          } else if (failure.empty()) {
            failure = "instance " + std::to_string(k) + " residual " + std::to_string(c.residual);
          }
        }
        rep.checks.push_back({"residual = 0", zero == count,
                              std::to_string(zero) + "/" + std::to_string(count) + (failure.empty() ? "" : ", " + failure)});
        rep.facts = {{"instances", std::to_string(count)}, {"seed", std::to_string(common.seed)}};
        rep.verdict = rep.verified() ? "Riemann-Roch holds on every instance" : "Riemann-Roch residual nonzero";
      } else if (*v_oracle) {
        if (count < 0 || max_genus < 1 || max_degree < 0 || oracle_grid < 1) throw InputError("flags out of range");
        rep.name = "oracle-check";
        Rng rng(common.seed);
        int agree = 0;
        std::string failure;
        for (int k = 0; k < count; ++k) {
          const int g = 1 + static_cast<int>(rng() % max_genus);
          const long den = 1 + static_cast<long>(rng() % oracle_grid);
          const GraphPtr h = random_cactus(rng, g, den, rng() % 2 == 0);
          const long deg = static_cast<long>(rng() % (2 * max_degree + 1)) - max_degree;
          const Divisor dv = random_divisor(rng, h, deg, static_cast<int>(rng() % 3), den);
          const PointRef v = h->base_point();
          const Divisor a = q_reduce(dv, v);
          if (a == reduce_by_burning(dv, v).divisor && a == oracle::subdivided_reduce(dv, v)) {
            ++agree;
          } else if (failure.empty()) {
            failure = "instance " + std::to_string(k);
          }
        }
        rep.checks.push_back({"three reducers agree", agree == count,
                              std::to_string(agree) + "/" + std::to_string(count) + (failure.empty() ? "" : ", " + failure)});
        rep.facts = {{"instances", std::to_string(count)}, {"seed", std::to_string(common.seed)}};
        rep.verdict = rep.verified() ? "reducers agree" : "reducers disagree";
      }
      out.doc["command"] = "verify " + rep.name;
      out.doc["report"] = report_json(rep);
      out.text << rep.text();
      out.code = rep.verified() ? kVerified : kFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return kInput;
  } catch (const RationalParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return kInput;
  } catch (const ResourceCapError& e) {
    std::cerr << "error: resource-cap: " << e.what() << '\n';
    return kCap;
  } catch (const InternalError& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kFailed;
  }

  const std::string payload = common.json ? out.doc.dump(2) + "\n" : out.text.str();
  if (common.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!(file << payload)) {
      std::cerr << "error: io: cannot write '" << common.out << "'\n";
      return kInput;
    }
  }
  return out.code;
}

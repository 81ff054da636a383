// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "cactus/brill_noether.hpp"
#include "cactus/graph.hpp"
#include "cactus/random_cactus.hpp"
#include "cactus/rank.hpp"
#include "cactus/reduction.hpp"
#include "subdivided_dhar.hpp"

using namespace cactus;

namespace {

const std::string kData = CACTUS_TEST_DATA;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failure and keeps counting.
struct Tally {
  int total = 0;
  int good = 0;
  std::string first_failure;
  void add(bool ok, const std::string& what) {
    ++total;
    if (ok) {
      ++good;
    } else if (first_failure.empty()) {
      first_failure = what;
    }
  }
  Outcome outcome() const {
    Outcome o;
    o.ok = good == total;
    o.detail = std::to_string(good) + "/" + std::to_string(total);
    if (!first_failure.empty()) o.detail += ", first failure: " + first_failure;
    return o;
  }
};

long uniform(Rng& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)); }

std::string fact(const VerifierReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.facts) {
    if (k == key) return v;
  }
  return "";
}

// g - (r+1)(g-d+r), written out independently of the library.
long expected_rho(long g, long r, long d) { return g - (r + 1) * (g - d + r); }

// ---------------------------------------------------------------------------

Outcome circle_law() {
  Rng rng(101);
  Tally t;
  for (int k = 0; k < 200; ++k) {
    const GraphPtr circle = random_cactus(rng, 1);
    const Rational c = circle->circumference(0);
    Divisor d(circle);
    long deg = 0;
    if (k % 4 == 0) {
      // Principal: (a) + (b) - (y) - (a + b - y), possibly twice.
      const int n = static_cast<int>(uniform(rng, 1, 2));
      for (int i = 0; i < n; ++i) {
        const Rational a = random_offset(rng, c), b = random_offset(rng, c), y = random_offset(rng, c);
        d.add(0, a, 1);
        d.add(0, b, 1);
        d.add(0, y, -1);
        d.add(0, mod_positive(a + b - y, c), -1);
      }
    } else {
      deg = uniform(rng, -3, 5);
      d = random_divisor(rng, circle, deg, static_cast<int>(uniform(rng, 0, 2)));
    }
    deg = d.degree();
    Rational sum = 0;
    for (const auto& [p, m] : d.chips()) sum += m * p.offset;
    const bool principal = deg == 0 && mod_positive(sum, c) == 0;
    const int want = deg >= 1 ? static_cast<int>(deg - 1) : (principal ? 0 : -1);
    const int got = rank(d).rank;
    t.add(got == want, format_divisor(d) + " rank " + std::to_string(got) + " want " + std::to_string(want));
  }
  return t.outcome();
}

Outcome oracle_triangle() {
  Rng rng(202);
  Tally t;
  for (int k = 0; k < 100; ++k) {
    const int g = static_cast<int>(uniform(rng, 1, 4));
    const long den = uniform(rng, 1, 24);
    const GraphPtr h = random_cactus(rng, g, den, k % 2 == 0);
    const long deg = uniform(rng, -6, 6);
    const Divisor d = random_divisor(rng, h, deg, static_cast<int>(uniform(rng, 0, 2)), den);
    const PointRef v = k % 3 == 0 ? random_point(rng, *h, den) : h->base_point();
    const Divisor a = q_reduce(d, v);
    const Divisor b = reduce_by_burning(d, v).divisor;
    const Divisor o = oracle::subdivided_reduce(d, v);
    t.add(a == b && a == o, "instance " + std::to_string(k) + ": " + format_divisor(d));
  }
  return t.outcome();
}

Outcome reducedness() {
  Rng rng(303);
  Tally t;
  for (int k = 0; k < 200; ++k) {
    const int g = static_cast<int>(uniform(rng, 1, 4));
    const GraphPtr h = random_cactus(rng, g, 0, k % 2 == 0);
    const Divisor d = random_divisor(rng, h, uniform(rng, -4, 8), static_cast<int>(uniform(rng, 0, 3)));
    const PointRef v = k % 2 == 0 ? h->base_point() : random_point(rng, *h);
    const Divisor red = q_reduce(d, v);
    const bool burnt = dhar_burn(red, v).fully_burnt;
    const bool effective = red.is_effective_away_from(v);
    const bool idempotent = q_reduce(red, v) == red;
    t.add(burnt && effective && idempotent, "instance " + std::to_string(k) + ": " + format_divisor(d));
  }
  return t.outcome();
}

Outcome global_riemann_roch() {
  Rng rng(404);
  Tally t;
  for (int k = 0; k < 100; ++k) {
    const int g = static_cast<int>(uniform(rng, 1, 4));
    const GraphPtr h = random_cactus(rng, g, 0, k % 2 == 0);
    const Divisor d = random_divisor(rng, h, uniform(rng, -1, 2 * g - 1), static_cast<int>(uniform(rng, 0, 2)));
    RankEngine engine(h);
    const RiemannRochCheck c = riemann_roch_residual(d, engine);
    t.add(c.verified && c.residual == 0, "instance " + std::to_string(k) + " residual " + std::to_string(c.residual));
  }
  return t.outcome();
}

Outcome lemma() {
  const GraphPtr star = load_graph(kData + "/star.graph");
  RankEngine engine(star);
  Tally t;
  for (int k = 0; k < 64; ++k) {
    t.add(engine.has_rank_at_least(star_family_divisor(star, Rational(k, 64)), 1), "angle " + std::to_string(k) + "/64");
  }
  Outcome o = t.outcome();
  const long r = rho(4, 1, 3);
  std::string dims;
  bool probes = true;
  for (const Rational& a : {Rational(1, 8), Rational(3, 8), Rational(5, 8)}) {
    const int dim = local_dim_probe(engine, star_family_divisor(star, a), 1).estimated_local_dim;
    dims += (dims.empty() ? "" : ",") + std::to_string(dim);
    probes = probes && dim == 1;
  }
  const VerifierReport rep = verify_lemma_w13(star);
  o.ok = o.ok && r == 0 && expected_rho(4, 1, 3) == 0 && probes && rep.verified() &&
         rep.verdict == "not geometric Brill-Noether general";
  o.detail = "angles " + o.detail + ", rho " + std::to_string(r) + ", probe dims " + dims + ", verdict: " + rep.verdict;
  return o;
}

Outcome path_control() {
  const GraphPtr path = load_graph(kData + "/path4.graph");
  ScanOptions opt;
  opt.grid = 16;
  opt.max_free = 3;
  const ScanReport rep = stratified_scan(path, 1, 3, opt);
  std::size_t points = 0;
  for (const Stratum& s : rep.strata) points += s.rows.size();
  return {!rep.found_positive_dimensional, "found_positive_dimensional=" +
                                               std::string(rep.found_positive_dimensional ? "true" : "false") + ", " +
                                               std::to_string(rep.strata.size()) + " strata, " +
                                               std::to_string(points) + " grid points"};
}

Outcome prop_weak(const std::string& file, long g, long l, long want_rho) {
  const GraphPtr graph = load_graph(kData + "/" + file);
  const VerifierReport rep = verify_prop_weak(graph);
  const Divisor three_q = point_divisor(graph, parse_point(*graph, fact(rep, "q")), 3);
  const bool ranked = fact(rep, "degree") == "3" && rank(three_q, 1).rank >= 1;
  const bool shape = graph->genus() == g && static_cast<long>(longest_loop_path(*graph).size()) == l;
  const bool rho_ok = fact(rep, "rho") == std::to_string(want_rho) && expected_rho(g, 1, 3) == want_rho;
  Outcome o;
  o.ok = shape && ranked && rho_ok && rep.verified() && rep.verdict == "not weakly geometric Brill-Noether general";
  o.detail = "g=" + std::to_string(graph->genus()) + " l=" + std::to_string(longest_loop_path(*graph).size()) +
             " q=" + fact(rep, "q") + " rank(3q)>=1 " + (ranked ? "yes" : "no") + ", rho " + fact(rep, "rho") + ", verdict: " + rep.verdict;
  for (const Check& c : rep.checks) {
    if (!c.passed) o.detail += ", failed check: " + c.name;
  }
  return o;
}

Outcome wedge_pointwise() {
  Rng rng(808);
  const GraphPtr star = load_graph(kData + "/star.graph");
  Tally t;
  for (int k = 0; k < 50; ++k) {
    GraphPtr g1;
    int r = 1, d = 0;
    std::vector<Divisor> witness;
    switch (k % 3) {
      case 0:
        g1 = random_cactus(rng, 1);
        d = 2;
        witness.push_back(random_effective_divisor(rng, g1, d));
        break;
      case 1:
        g1 = random_cactus(rng, 2);
        d = 3;
        witness.push_back(random_effective_divisor(rng, g1, d));
        break;
      default:
        g1 = star;
        d = 3;
        witness.push_back(star_family_divisor(star, random_offset(rng, Rational(1), 64)));
        break;
    }
    WedgeDimOptions opt;
    opt.samples = 1;
    opt.seed = rng();
    opt.probe = false;
    const PointRef at = random_point(rng, *g1);
    const VerifierReport rep = verify_wedge_dim(g1, at, random_circumference(rng), r, d, witness, opt);
    t.add(!rep.checks.empty() && rep.checks.front().passed,
          "instance " + std::to_string(k) + ": " + rep.checks.front().detail);
  }
  return t.outcome();
}

Outcome tree_chain() {
  const GraphPtr star = load_graph(kData + "/star.graph");
  const VerifierReport rep = verify_tree_chain(star, 2, 7);
  Outcome o;
  o.ok = rep.verified();
  for (int i = 0; i <= 2; ++i) {
    const std::string f = fact(rep, "step" + std::to_string(i));
    const std::string rho_text = "rho=" + std::to_string(expected_rho(4 + i, 1, 3 + i));
    const std::string want_rho = "rho=" + std::to_string(i);
    o.ok = o.ok && f.find(rho_text) != std::string::npos && rho_text == want_rho;
    o.detail += (o.detail.empty() ? "" : "; ") + f;
  }
  return o;
}

Outcome sandwich() {
  const GraphPtr circle = load_graph(kData + "/circle.graph");
  const BNRankBounds w12 = bn_rank_bounds(circle, 1, 2);
  const BNRankBounds w02 = bn_rank_bounds(circle, 0, 2);
  const GraphPtr glued = wedge_with_loop(*circle, circle->base_point(), Rational(7, 5));
  const BNRankBounds mid = bn_rank_bounds(glued, 1, 3);
  const GraphPtr chain = load_graph(kData + "/chain.graph");
  const VerifierReport two = verify_rank_sandwich(chain, parse_point(*chain, "L2:1/3"), Rational(4, 3), 1, 3);

  auto iv = [](const BNRankBounds& b) {
    return "[" + std::to_string(b.lower) + "," + std::to_string(b.upper) + "]" + (b.widened ? " widened" : "");
  };
  Outcome o;
  o.ok = w12.lower == 1 && w12.upper == 1 && !w12.widened && w02.lower == 2 && w02.upper == 2 && !w02.widened &&
         mid.lower >= 1 && mid.upper <= 2 && two.verified();
  o.detail = "w^1_2(circle) " + iv(w12) + ", w^0_2(circle) " + iv(w02) + ", w^1_3(glued) " + iv(mid) +
             ", chain: " + fact(two, "w_first") + " / " + fact(two, "w_glued") + " / " + fact(two, "w_first_lower_rank");
  return o;
}

// Every claimed rank r is tested against random adversaries E of degree r:
// D - E must be equivalent to an effective divisor, decided by the
// subdivision oracle rather than the rank engine.
Outcome sampling_validation() {
  Rng rng(1111);
  Tally t;
  int adversaries = 0;
  for (int k = 0; k < 50; ++k) {
    const int g = static_cast<int>(uniform(rng, 1, 4));
    const long den = uniform(rng, 2, 24);
    const GraphPtr h = random_cactus(rng, g, den, k % 2 == 0);
    const Divisor d = random_divisor(rng, h, g + uniform(rng, 1, g + 1), 1, den);
    const int r = rank(d).rank;
    for (int s = 0; s < 200; ++s) {
      Divisor e(h);
      for (int i = 0; i < r; ++i) e.add(random_point(rng, *h, 2 * den), 1);
      const bool effective = oracle::subdivided_reduce(d - e, h->base_point()).is_effective();
      ++adversaries;
      t.add(effective, "instance " + std::to_string(k) + " rank " + std::to_string(r) + ", D=" + format_divisor(d) +
                           " E=" + format_divisor(e));
    }
  }
  Outcome o = t.outcome();
  o.detail = std::to_string(adversaries - (t.total - t.good)) + "/" + std::to_string(adversaries) +
             " adversaries answered" + (t.first_failure.empty() ? "" : ", missed: " + t.first_failure);
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "circle-riemann-roch", 5, circle_law},
      {2, "reduction-oracle-triangle", 60, oracle_triangle},
      {3, "reducedness", 60, reducedness},
      {4, "global-riemann-roch", 120, global_riemann_roch},
      {5, "lemma-star-w13", 60, lemma},
      {6, "path-of-loops-control", 120, path_control},
      {7, "prop-weak-even", 60, [] { return prop_weak("g6tree.graph", 6, 4, -2); }},
      {7, "prop-weak-odd", 60, [] { return prop_weak("g5tree.graph", 5, 3, -1); }},
      {8, "wedge-pointwise", 120, wedge_pointwise},
      {9, "tree-chain", 300, tree_chain},
      {10, "rank-sandwich", 120, sandwich},
      {11, "candidate-sampling", 600, sampling_validation},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %d %s (%.2fs, limit %.0fs%s) %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.limit_seconds, in_time ? "" : ", over time", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}

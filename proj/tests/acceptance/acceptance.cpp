// Acceptance checks: one PASS/FAIL line per criterion.

#include "../generators.hpp"
#include "../oracles.hpp"
#include "gsi/bench.hpp"
#include "gsi/io.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace gsi;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string fixture(const char* name) { return read_file(std::string(GSI_FIXTURES) + "/" + name); }

// Collects failed checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

struct Criterion {
  int id;
  std::string title;
  double limit;  // seconds
  std::function<void(Check&, std::string&)> run;
};

Assignment ssg_values(const Ssg& g, std::vector<Rational> v) {
  return Assignment(g.domain(), Chain::unit_interval(), std::move(v));
}

void ssg_golden(Check& check, std::string& note) {
  const Ssg g = parse_ssg(fixture("eps_quarter.ssg"));
  const auto expected = ssg_values(g, {q(1), q(1, 4), q(1, 4), q(1, 4), q(1, 4)});
  const auto above = solve_ssg_above(g);
  const auto below = solve_ssg_below(g);
  check(above.values == expected, "above values " + to_string(above.values));
  check(below.values == expected, "below values " + to_string(below.values));
  check(above.skips() == 1, "above skips " + std::to_string(above.skips()));
  for (const auto& e : above.trace)
    if (e.event == TraceEvent::Skip)
      check(to_string(e.vicious, *g.domain()) == "{av, max, min}", "vicious " + to_string(e.vicious, *g.domain()));
  const auto dmax = max_decomposition(g);
  std::string visited;
  for (const auto& e : below.trace) visited += (visited.empty() ? "" : " ; ") + describe_strategy(dmax, e.strategy);
  check(visited == "max->av ; max->eps", "below visits " + visited);
  note = "from below: " + visited;
}

void stability(Check& check, std::string&) {
  const Ssg g = parse_ssg(fixture("stability.ssg"));
  const auto dec = max_decomposition(g);
  const Strategy c{0, 0, 1};
  check(describe_strategy(dec, c) == "max1->1, max2->max2", "start strategy");
  const auto mu = solve_fixed_max_strategy(g, c);
  check(mu == ssg_values(g, {q(1), q(1), q(0)}), "mu V_C " + to_string(mu));
  const auto plain = improve_plain(dec, c, mu, TieBreak::Highest);
  check(plain && describe_strategy(dec, *plain) == "max1->max1, max2->max1", "non-stable improvement");
  if (plain) {
    const auto mp = solve_fixed_max_strategy(g, *plain);
    check(mp[1] == 0 && mp[2] == 0 && strictly_below(mp, mu), "non-stable values " + to_string(mp));
  }
  const auto stable = max_improve_stable(dec, c, mu);
  check(stable.has_value(), "stable improvement exists");
  if (stable)
    check(solve_fixed_max_strategy(g, *stable) == ssg_values(g, {q(1), q(1), q(1)}), "stable values");
}

std::vector<std::optional<std::int64_t>> finite(std::initializer_list<std::int64_t> xs) {
  return {xs.begin(), xs.end()};
}

void energy_golden(Check& check, std::string&) {
  const EnergyGame g = parse_energy(fixture("four_state.eg"));
  const auto expected = finite({18, 17, 0, 8});
  const auto kle = solve_energy_kleene(g);
  const auto vi = solve_energy_vi(g);
  const auto above = solve_energy_above(g);
  const auto below = solve_energy_below(g);
  check(kle.solution.values == expected, "kleene " + to_string(kle.solution));
  check(vi.solution.values == expected, "vi " + to_string(vi.solution));
  check(above.solution.values == expected, "above " + to_string(above.solution));
  check(below.solution.values == expected, "below " + to_string(below.solution));
  const auto d1 = energy_max_decomposition(below.transform.game, below.transform.k);
  const auto s1 = describe_energy_strategy(below.transform, d1, below.si->strategy);
  check(s1 == "x->y, y->v", "player 1 strategy " + s1);
  const auto d0 = energy_min_decomposition(above.transform.game, above.transform.k);
  const auto s0 = describe_energy_strategy(above.transform, d0, above.si->strategy);
  check(s0 == "u->u, v->u", "player 0 strategy " + s0);
}

void energy_transform(Check& check, std::string& note) {
  const EnergyGame g = parse_energy(fixture("negative_cycle.eg"));
  const FiniteTransform t = transform_finite(g);
  const auto idx = [&](const char* n) { return g.domain()->index_of(n); };
  check(t.removed[idx("x")] && t.removed[idx("y")], "x, y removed");
  check(!t.removed[idx("u")] && !t.removed[idx("v")] && !t.removed[idx("z")], "u, v, z kept");
  // Kleene on the transformed game, straight from the definition of E.
  std::vector<Rational> a(t.game.size(), Rational(0));
  for (;;) {
    auto next = oracle::energy_step(t.game, t.k, a);
    if (next == a) break;
    a = std::move(next);
  }
  const auto at = [&](const char* n) { return a[t.to_new[idx(n)]]; };
  check(at("v") == 3 && at("z") == 0, "kleene oracle on the transformed game");
  check(at("u") > t.threshold, "u above the threshold");
  const std::vector<std::optional<std::int64_t>> expected{std::nullopt, std::nullopt, std::nullopt, 3, 0};
  for (const auto& run : {solve_energy_kleene(g), solve_energy_vi(g), solve_energy_above(g), solve_energy_below(g)})
    check(run.solution.values == expected, "solution " + to_string(run.solution));
  note = "threshold " + std::to_string(t.threshold) + ", k " + std::to_string(t.k);
}

Assignment pa_symmetric(const Pa& pa, const std::vector<std::vector<Rational>>& upper) {
  std::vector<Rational> d(pa.size() * pa.size());
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = s + 1; t < pa.size(); ++t) d[pa.pair(s, t)] = d[pa.pair(t, s)] = upper[s][t - s - 1];
  return Assignment(pa.pairs(), Chain::unit_interval(), d);
}

void pa_golden(Check& check, std::string& note) {
  const Pa pa = parse_pa(fixture("three_state.pa"));
  const Assignment d = pa_symmetric(pa, {{q(1, 2), q(1)}, {q(1)}});
  const auto md = m_eval(pa, d);
  check(md[pa.pair(0, 1)] == q(1, 4), "m_eval(s,t) = " + to_string(md[pa.pair(0, 1)]) + ", expected 1/4");
  const auto k11 = kantorovich(pa, d, pa.state(0).dists[0], pa.state(1).dists[0]);
  check(k11.value == q(1, 4), "K on the first distributions of s and t");
  std::set<std::tuple<std::size_t, std::size_t, Rational>> plan;
  for (const auto& c : k11.plan.cells) plan.insert({c.from, c.to, c.mass});
  check(plan == std::set<std::tuple<std::size_t, std::size_t, Rational>>{{0, 1, q(1, 2)}, {2, 2, q(1, 2)}}, "optimal plan");
  const auto mu = solve_pa_above(pa).values;
  check(mu[pa.pair(0, 1)] == 0 && mu[pa.pair(0, 2)] == 1 && mu[pa.pair(1, 2)] == 1, "mu M " + to_string(mu));
  note = "m_eval(s,t) = " + to_string(md[pa.pair(0, 1)]);
}

void oracle_equivalence(Check& check, std::string& note) {
  gen::Rng rng(6001);
  for (int i = 0; i < 100; ++i) {
    const Ssg g = gen::ssg(rng, gen::pick(rng, 2, 6));
    const auto dmin = min_decomposition(g);
    const auto dmax = max_decomposition(g);
    const auto bmin = brute_force_mu(dmin, [&](const Strategy& c, const Term&) { return solve_fixed_min_strategy(g, c); });
    const auto bmax = brute_force_mu(dmax, [&](const Strategy& c, const Term&) { return solve_fixed_max_strategy(g, c); });
    const auto above = solve_ssg_above(g).values;
    const auto below = solve_ssg_below(g).values;
    check(bmin == above && bmin == below && bmax == above, "ssg " + std::to_string(i));
  }
  std::size_t infinite = 0;
  for (int i = 0; i < 100; ++i) {
    const EnergyGame g = gen::energy(rng, gen::pick(rng, 1, 6), 3, static_cast<std::int64_t>(gen::pick(rng, 1, 6)));
    const FiniteTransform t = transform_finite(g);
    const auto dmin = energy_min_decomposition(t.game, t.k);
    const auto dmax = energy_max_decomposition(t.game, t.k);
    const auto inner = [&](const Decomposition& dec) {
      return [&t, &dec](const Strategy& c, const Term&) { return value_iteration(restrict_game(t.game, dec, c), t.k).value; };
    };
    const auto bmin = reconstruct(brute_force_mu(dmin, inner(dmin)), t);
    const auto bmax = reconstruct(brute_force_mu(dmax, inner(dmax)), t);
    const auto above = solve_energy_above(g).solution;
    const auto below = solve_energy_below(g).solution;
    check(bmin == above && bmin == below && bmax == above, "energy " + std::to_string(i));
    for (const auto& v : above.values) infinite += !v;
  }
  note = std::to_string(infinite) + " infinite energy values";
}

std::vector<EnergyGame> finite_value_games() {
  gen::Rng rng(7001);
  std::vector<EnergyGame> out;
  while (out.size() < 200) {
    const std::size_t n = gen::pick(rng, 2, 10);
    EnergyGame g = gen::energy(rng, n, 3, static_cast<std::int64_t>(gen::pick(rng, 1, 10)));
    bool all_finite = true;
    for (auto v : oracle::energy_value(g)) all_finite = all_finite && v != oracle::kInf;
    if (all_finite) out.push_back(std::move(g));
  }
  return out;
}

const std::vector<EnergyGame>& criterion7_games() {
  static const std::vector<EnergyGame> games = finite_value_games();
  return games;
}

void cross_solver(Check& check, std::string& note) {
  std::size_t states = 0;
  for (const auto& g : criterion7_games()) {
    const auto kle = solve_energy_kleene(g).solution;
    const auto vi = solve_energy_vi(g).solution;
    const auto above = solve_energy_above(g).solution;
    const auto below = solve_energy_below(g).solution;
    for (const auto& v : kle.values) check(v.has_value(), "finite value");
    check(kle == vi && kle == above && kle == below, "disagreement on " + emit_energy(g));
    states += g.size();
  }
  note = std::to_string(criterion7_games().size()) + " games, " + std::to_string(states) + " states";
}

void least_fixpoint_property(Check& check, std::string& note) {
  gen::Rng rng(8001);
  std::size_t non_least = 0, empty_star = 0, posts = 0;
  for (int i = 0; i < 100; ++i) {
    const std::int64_t k = static_cast<std::int64_t>(gen::pick(rng, 2, 8));
    const auto dec = gen::finite_decomposition(rng, gen::pick(rng, 2, 6), k, DecompositionKind::Min);
    const Term f = induced_function(dec);
    const Assignment mu = kleene_solve(f, dec.domain(), dec.chain()).value;
    Strategy c(dec.size());
    for (std::size_t y = 0; y < dec.size(); ++y) c[y] = gen::pick(rng, 0, dec.options(y).size() - 1);
    Assignment a = kleene_solve(restrict(dec, c), dec.domain(), dec.chain()).value;
    while (auto next = min_improve(dec, c, a)) {
      c = *next;
      a = kleene_solve(restrict(dec, c), dec.domain(), dec.chain()).value;
    }
    check(evaluate(f, a) == a, "improvement loop ends in a fixpoint");
    non_least += !(a == mu);
    check(nu_approx(f, a).empty() == (a == mu), "nu_approx characterises mu f");

    for (int j = 0; j < 5; ++j) {
      Assignment b(dec.domain(), dec.chain(), gen::values(rng, dec.chain(), dec.size()));
      for (;;) {
        Assignment next = pointwise_meet(b, evaluate(f, b));
        if (next == b) break;
        b = std::move(next);
      }
      ++posts;
      if (nu_star(f, b).empty()) {
        ++empty_star;
        check(leq(b, mu), "nu_star empty but not below mu f");
      }
    }
  }
  note = std::to_string(non_least) + " non-least fixpoints, " + std::to_string(empty_star) + "/" +
         std::to_string(posts) + " post-fixpoints with empty nu_star";
}

Rational norm_diff(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  Rational m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, Rational(x[i] - y[i]));
  return m;
}

void non_expansiveness(Check& check, std::string& note) {
  gen::Rng rng(9001);
  std::set<std::string> seen;
  const char* names[] = {"Const", "Reindex", "MinRel", "MaxRel", "Average", "SubWeight", "Compose", "DisjointUnion"};
  for (int i = 0; i < 10000; ++i) {
    const Chain chain = i % 2 ? Chain::unit_interval() : Chain::finite(static_cast<std::int64_t>(gen::pick(rng, 1, 9)));
    const int top = (i / 2) % 7;
    const std::size_t in = gen::pick(rng, 1, 5);
    const auto s = gen::term(rng, in, gen::pick(rng, 1, 5), chain, 2, top);
    if (top == 4 && chain.is_finite())
      seen.insert("SubWeight");
    else
      seen.insert(names[static_cast<int>(s.term.kind())]);
    const auto a = gen::values(rng, chain, in);
    const auto b = gen::values(rng, chain, in);
    const auto fa = evaluate_raw(s.term, a, chain);
    const auto fb = evaluate_raw(s.term, b, chain);
    check(norm_diff(fb, fa) <= norm_diff(b, a), "triple " + std::to_string(i));
  }
  check(seen.size() == 8, "every constructor exercised");
  note = std::to_string(seen.size()) + " constructors exercised";
}

void transport_correctness(Check& check, std::string& note) {
  gen::Rng rng(10001);
  std::size_t pairs = 0;
  for (int i = 0; i < 50; ++i) {
    const Pa pa = gen::pa(rng, gen::pick(rng, 2, 6), 3, 4, 2);
    const Assignment d(pa.pairs(), Chain::unit_interval(), gen::values(rng, Chain::unit_interval(), pa.size() * pa.size()));
    std::vector<Distribution> all;
    for (const auto& s : pa.states())
      for (const auto& b : s.dists) all.push_back(b);
    for (const auto& b : all)
      for (const auto& b2 : all) {
        ++pairs;
        const auto r = kantorovich(pa, d, b, b2);
        oracle::Matrix cost(b.size(), std::vector<Rational>(b2.size()));
        std::vector<Rational> m1, m2;
        for (std::size_t x = 0; x < b.size(); ++x) {
          m1.push_back(b[x].second);
          for (std::size_t y = 0; y < b2.size(); ++y) cost[x][y] = d[pa.pair(b[x].first, b2[y].first)];
        }
        for (const auto& [v, p] : b2) m2.push_back(p);
        check(r.value == oracle::transport_brute(cost, m1, m2).value, "value");
        std::vector<Rational> out(pa.size()), in(pa.size());
        Rational total = 0;
        for (const auto& c : r.plan.cells) {
          check(c.mass > 0, "positive mass");
          out[c.from] += c.mass;
          in[c.to] += c.mass;
          total += c.mass * d[pa.pair(c.from, c.to)];
        }
        std::vector<Rational> want_out(pa.size()), want_in(pa.size());
        for (const auto& [v, p] : b) want_out[v] += p;
        for (const auto& [v, p] : b2) want_in[v] += p;
        check(out == want_out && in == want_in, "marginals");
        check(total == r.value, "plan cost");
      }
  }
  note = std::to_string(pairs) + " distribution pairs";
}

void hausdorff_closed_form(Check& check, std::string& note) {
  gen::Rng rng(11001);
  std::size_t sets = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 3;
    oracle::Matrix table(n, gen::values(rng, Chain::unit_interval(), n));
    for (auto& row : table) row = gen::values(rng, Chain::unit_interval(), n);
    for (std::uint32_t xs = 1; xs < (1u << n); ++xs)
      for (std::uint32_t ys = 1; ys < (1u << n); ++ys) {
        oracle::Matrix k;
        for (std::size_t x = 0; x < n; ++x) {
          if (!(xs >> x & 1)) continue;
          k.emplace_back();
          for (std::size_t y = 0; y < n; ++y)
            if (ys >> y & 1) k.back().push_back(table[x][y]);
        }
        ++sets;
        check(hausdorff(k) == oracle::hausdorff_brute(k), "table " + std::to_string(i));
      }
  }
  note = std::to_string(sets) + " set pairs";
}

void bench_bound(Check& check, std::string& note) {
  BenchConfig cfg;
  cfg.solvers = {"KLE", "VI", "SI1", "SI0"};
  const auto r = bench(cfg, criterion7_games());
  check(r.instances.size() == 200, "instance count");
  check(r.all_agree, "agreement flag");
  check(r.all_within_bound, "outer iterations below the bound");
  std::size_t outer = 0;
  for (const auto& inst : r.instances)
    for (const auto& [name, cell] : inst.cells) {
      if (cell.outcome.bound.empty()) continue;
      outer += cell.outcome.outer;
      check(BigInt(cell.outcome.outer) < BigInt(cell.outcome.bound, 10), "instance " + std::to_string(inst.index));
    }
  note = std::to_string(outer) + " SI outer iterations in total";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "SSG golden", 1, ssg_golden},
      {2, "stability regression", 1, stability},
      {3, "energy golden", 1, energy_golden},
      {4, "energy transformation", 1, energy_transform},
      {5, "PA golden", 2, pa_golden},
      {6, "oracle equivalence", 60, oracle_equivalence},
      {7, "cross-solver equivalence", 60, cross_solver},
      {8, "least fixpoint property", 30, least_fixpoint_property},
      {9, "non-expansiveness", 10, non_expansiveness},
      {10, "transport correctness", 30, transport_correctness},
      {11, "Hausdorff closed form", 10, hausdorff_closed_form},
      {12, "bench strategy bound", 60, bench_bound},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    std::string note;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(check, note);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    const bool in_time = dt.count() <= c.limit;
    const bool ok = check.failed == 0 && in_time;
    failed += !ok;
    std::printf("%s %2d %-26s %7.2f s", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), dt.count());
    if (!note.empty()) std::printf("  (%s)", note.c_str());
    std::printf("\n");
    if (!in_time) std::printf("       over the %.0f s limit\n", c.limit);
    for (const auto& f : check.failures) std::printf("       %s\n", f.c_str());
    if (check.failed > check.failures.size())
      std::printf("       %zu more failed checks\n", check.failed - check.failures.size());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}

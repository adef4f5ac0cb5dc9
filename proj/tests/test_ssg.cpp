#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "gsi/errors.hpp"
#include "gsi/io.hpp"
#include "gsi/ssg.hpp"
#include "oracles.hpp"

using namespace gsi;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

Ssg fixture(const char* name) { return parse_ssg(read_file(std::string(GSI_FIXTURES) + "/" + name)); }

std::vector<Rational> raw(const Assignment& a) { return {a.raw().begin(), a.raw().end()}; }

Assignment values(const Ssg& g, std::vector<Rational> v) { return Assignment(g.domain(), Chain::unit_interval(), std::move(v)); }

}  // namespace

TEST_CASE("two-player example from above and below") {
  const Ssg g = fixture("eps_quarter.ssg");
  REQUIRE(g.size() == 5);
  const auto expected = values(g, {q(1), q(1, 4), q(1, 4), q(1, 4), q(1, 4)});

  const auto above = solve_ssg_above(g);
  CHECK(above.values == expected);
  CHECK(above.skips() == 1);
  REQUIRE(above.trace.size() == 2);
  CHECK(above.trace[0].values == values(g, {q(1), q(1, 4), q(1), q(1), q(1)}));
  CHECK(to_string(above.trace[0].vicious, *g.domain()) == "{av, max, min}");
  CHECK(*above.trace[0].delta == q(3, 4));
  CHECK(describe_strategy(min_decomposition(g), above.strategy) == "min->av");

  const auto below = solve_ssg_below(g);
  CHECK(below.values == expected);
  const auto dmax = max_decomposition(g);
  REQUIRE(below.trace.size() == 2);
  CHECK(describe_strategy(dmax, below.trace[0].strategy) == "max->av");
  CHECK(describe_strategy(dmax, below.trace[1].strategy) == "max->eps");
  CHECK(below.trace[0].values == values(g, {q(1), q(1, 4), q(0), q(0), q(0)}));
}

TEST_CASE("non-stable improvement from below undershoots") {
  const Ssg g = fixture("stability.ssg");
  const auto dec = max_decomposition(g);
  const Strategy c{0, 0, 1};  // max1 -> 1, max2 -> max2
  const auto mu = solve_fixed_max_strategy(g, c);
  CHECK(mu == values(g, {q(1), q(1), q(0)}));
  const auto plain = improve_plain(dec, c, mu, TieBreak::Highest);
  REQUIRE(plain);
  CHECK(describe_strategy(dec, *plain) == "max1->max1, max2->max1");
  const auto mu_plain = solve_fixed_max_strategy(g, *plain);
  CHECK(mu_plain == values(g, {q(1), q(0), q(0)}));
  CHECK(strictly_below(mu_plain, mu));
  const auto stable = max_improve_stable(dec, c, mu);
  REQUIRE(stable);
  CHECK(describe_strategy(dec, *stable) == "max1->1, max2->max1");
  CHECK(solve_fixed_max_strategy(g, *stable) == values(g, {q(1), q(1), q(1)}));
  CHECK(solve_ssg_below(g, c).values == values(g, {q(1), q(1), q(1)}));
}

TEST_CASE("value function matches its definition") {
  gen::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const Ssg g = gen::ssg(rng, gen::pick(rng, 1, 6));
    const auto a = gen::values(rng, Chain::unit_interval(), g.size());
    CHECK(evaluate_raw(value_term(g), a, Chain::unit_interval()) == oracle::ssg_step(g, a));
    const Term f = value_term(g);
    CHECK(evaluate_raw(induced_function(min_decomposition(g)), a, Chain::unit_interval()) == evaluate_raw(f, a, Chain::unit_interval()));
    CHECK(evaluate_raw(induced_function(max_decomposition(g)), a, Chain::unit_interval()) == evaluate_raw(f, a, Chain::unit_interval()));
  }
}

TEST_CASE("fixed strategies give least fixpoints of the restricted function") {
  gen::Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const Ssg g = gen::ssg(rng, gen::pick(rng, 1, 6));
    const auto dmin = min_decomposition(g), dmax = max_decomposition(g);
    Strategy cmin(g.size()), cmax(g.size());
    std::vector<std::size_t> choice(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      cmin[v] = gen::pick(rng, 0, dmin.options(v).size() - 1);
      cmax[v] = gen::pick(rng, 0, dmax.options(v).size() - 1);
    }
    // With both players fixed the oracle is a Markov chain; check the
    // one-sided solvers are fixpoints bounded by it.
    const auto mu_min = solve_fixed_min_strategy(g, cmin);
    CHECK(evaluate(restrict(dmin, cmin), mu_min) == mu_min);
    const auto mu_max = solve_fixed_max_strategy(g, cmax);
    CHECK(evaluate(restrict(dmax, cmax), mu_max) == mu_max);
    for (std::size_t v = 0; v < g.size(); ++v)
      choice[v] = g.state(v).kind == SsgKind::Min ? cmin[v] : cmax[v];
    const auto chain = oracle::ssg_chain_value(g, choice);
    for (std::size_t v = 0; v < g.size(); ++v) {
      CHECK(mu_min[v] >= chain[v]);
      CHECK(mu_max[v] <= chain[v]);
    }
  }
}

TEST_CASE("both iterations equal the game value") {
  gen::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const Ssg g = gen::ssg(rng, gen::pick(rng, 1, 5));
    const auto expected = oracle::ssg_value(g);
    CHECK(raw(solve_ssg_above(g).values) == expected);
    CHECK(raw(solve_ssg_below(g).values) == expected);
  }
}

TEST_CASE("random initial strategies") {
  gen::Rng rng(44);
  for (int i = 0; i < 60; ++i) {
    const Ssg g = gen::ssg(rng, gen::pick(rng, 2, 6));
    const auto dmin = min_decomposition(g), dmax = max_decomposition(g);
    Strategy cmin(g.size()), cmax(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      cmin[v] = gen::pick(rng, 0, dmin.options(v).size() - 1);
      cmax[v] = gen::pick(rng, 0, dmax.options(v).size() - 1);
    }
    const auto ref = solve_ssg_above(g).values;
    CHECK(solve_ssg_above(g, {cmin, {}, {}}).values == ref);
    CHECK(solve_ssg_below(g, cmax).values == ref);
  }
}

TEST_CASE("forced non-termination") {
  // m (Max) may loop or exit; n (Min) can always loop.
  const Ssg g({{"t", SsgKind::Sink, {}, {}, q(1)}, {"m", SsgKind::Max, {0, 1}, {}, 0}, {"n", SsgKind::Min, {0, 2}, {}, 0}});
  CHECK(forced_nontermination(g, {0, 1, 0}) == PositionSet::of(3, {1, 2}));
  CHECK(forced_nontermination(g, {0, 0, 0}) == PositionSet::of(3, {2}));
  CHECK(solve_fixed_max_strategy(g, {0, 1, 0}) == values(g, {q(1), q(0), q(0)}));
  CHECK(solve_fixed_min_strategy(g, {0, 0, 1}) == values(g, {q(1), q(1), q(0)}));
  CHECK(solve_ssg_above(g).values == values(g, {q(1), q(1), q(0)}));
  CHECK(solve_ssg_below(g).values == values(g, {q(1), q(1), q(0)}));
}

TEST_CASE("invalid games") {
  CHECK_THROWS_AS(Ssg({}), InvariantError);
  CHECK_THROWS_AS(Ssg({{"a", SsgKind::Max, {}, {}, 0}}), InvariantError);
  CHECK_THROWS_AS(Ssg({{"a", SsgKind::Average, {}, {{0, q(1, 2)}}, 0}}), InvariantError);
  CHECK_THROWS_AS(Ssg({{"a", SsgKind::Sink, {}, {}, q(2)}}), InvariantError);
  const Ssg g = fixture("eps_quarter.ssg");
  CHECK_THROWS_AS(solve_fixed_min_strategy(g, {0, 0, 0, 0, 5}), InvariantError);
}

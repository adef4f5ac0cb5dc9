#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "gsi/errors.hpp"
#include "gsi/nonexp.hpp"

using namespace gsi;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> vec(std::initializer_list<Rational> xs) { return xs; }

// f#a(Y') by definition: the positions that drop by exactly delta when a is
// lowered by a small delta on Y'.
PositionSet approx_by_definition(const gen::Sample& f, const std::vector<Rational>& a, const PositionSet& ys,
                                 const Chain& chain) {
  const Rational delta = chain.is_finite() ? Rational(1) : Rational(1) / (Rational(1ul << 32) * Rational(1ul << 32));
  auto lowered = a;
  for (auto y : ys.members()) lowered[y] -= delta;
  const auto fa = f.direct(a), fl = f.direct(lowered);
  PositionSet out(fa.size());
  for (std::size_t z = 0; z < fa.size(); ++z)
    if (fa[z] - fl[z] == delta) out.insert(z);
  return out;
}


}  // namespace

TEST_CASE("combinators evaluate as written") {
  const Chain u = Chain::unit_interval();
  const auto a = vec({q(1, 2), q(1, 4), q(1)});
  CHECK(evaluate_raw(Term::constant(3, {q(1, 3)}), a, u) == vec({q(1, 3)}));
  CHECK(evaluate_raw(Term::reindex(3, {2, 0, 0}), a, u) == vec({q(1), q(1, 2), q(1, 2)}));
  CHECK(evaluate_raw(Term::min_rel(3, {{0, 1}, {2}}), a, u) == vec({q(1, 4), q(1)}));
  CHECK(evaluate_raw(Term::max_rel(3, {{0, 1}, {1}}), a, u) == vec({q(1, 2), q(1, 4)}));
  CHECK(evaluate_raw(Term::average(3, {{{0, q(1, 2)}, {2, q(1, 2)}}}), a, u) == vec({q(3, 4)}));
  const Chain f = Chain::finite(10);
  CHECK(evaluate_raw(Term::sub_weight({3, -4, 0}, 10), vec({q(2), q(8), q(5)}), f) == vec({q(0), q(10), q(5)}));
  const Term c = Term::compose(Term::min_rel(2, {{0, 1}}), Term::reindex(3, {2, 1}));
  CHECK(evaluate_raw(c, a, u) == vec({q(1, 4)}));
  const Term du = Term::disjoint_union({Term::reindex(3, {1}), Term::constant(3, {q(0), q(1)})});
  CHECK(du.out_size() == 3);
  CHECK(evaluate_raw(du, a, u) == vec({q(1, 4), q(0), q(1)}));
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(Term::reindex(2, {2}), InvariantError);
  CHECK_THROWS_AS(Term::min_rel(2, {{}}), InvariantError);
  CHECK_THROWS_AS(Term::average(2, {{{0, q(1, 2)}}}), InvariantError);
  CHECK_THROWS_AS(Term::compose(Term::reindex(3, {0}), Term::reindex(2, {0})), InvariantError);
  const Chain f = Chain::finite(4);
  CHECK_THROWS_AS(evaluate_raw(Term::average(1, {{{0, q(1)}}}), vec({q(1)}), f), InvariantError);
  CHECK_THROWS_AS(evaluate_raw(Term::sub_weight({1}, 4), vec({q(1, 2)}), Chain::unit_interval()), InvariantError);
  CHECK_THROWS_AS(evaluate_raw(Term::sub_weight({1}, 5), vec({q(1)}), f), InvariantError);
}

TEST_CASE("random terms agree with their direct implementation") {
  gen::Rng rng(11);
  for (const Chain c : {Chain::unit_interval(), Chain::finite(7)}) {
    for (int i = 0; i < 400; ++i) {
      const std::size_t in = gen::pick(rng, 1, 5), out = gen::pick(rng, 1, 5);
      const auto f = gen::term(rng, in, out, c, 3);
      const auto a = gen::values(rng, c, in);
      CHECK(evaluate_raw(f.term, a, c) == f.direct(a));
    }
  }
}

TEST_CASE("approximation matches the definition") {
  gen::Rng rng(12);
  for (const Chain c : {Chain::unit_interval(), Chain::finite(7)}) {
    for (int i = 0; i < 400; ++i) {
      const std::size_t in = gen::pick(rng, 1, 5), out = gen::pick(rng, 1, 5);
      const auto f = gen::term(rng, in, out, c, 3);
      const auto raw = gen::values(rng, c, in);
      const Assignment a(Domain::indexed(in), c, raw);
      PositionSet ys(in);
      for (auto y : a.support().members())
        if (gen::pick(rng, 0, 1)) ys.insert(y);
      CHECK(approx(f.term, a, ys) == approx_by_definition(f, raw, ys, c));
    }
  }
}

TEST_CASE("approximation rejects sets outside the support") {
  const Chain c = Chain::unit_interval();
  const Assignment a(Domain::indexed(2), c, {q(0), q(1)});
  CHECK_THROWS_AS(approx(Term::reindex(2, {0, 1}), a, PositionSet::of(2, {0})), InvariantError);
}

TEST_CASE("vicious cycle of a two-state loop") {
  // a(x) = a(y), a(y) = min(a(x), 1/2): every a with a(x) = a(y) <= 1/2 is a fixpoint.
  const Chain c = Chain::unit_interval();
  const Term g = Term::disjoint_union(
      {Term::reindex(2, {1}),
       Term::compose(Term::min_rel(2, {{0, 1}}), Term::disjoint_union({Term::reindex(2, {0}), Term::constant(2, {q(1, 2)})}))});
  const auto dom = Domain::indexed(2, "x");
  const Assignment fix(dom, c, {q(1, 3), q(1, 3)});
  REQUIRE(evaluate(g, fix) == fix);
  CHECK(nu_approx(g, fix) == PositionSet::all(2));
  const Decrease d = decrease_to_prefixpoint(g, fix, PositionSet::all(2));
  CHECK(d.delta.rational() == q(1, 3));
  CHECK(d.result == Assignment(dom, c, {q(0), q(0)}));
  const Assignment zero = Assignment::zero(dom, c);
  CHECK(nu_approx(g, zero).empty());
}

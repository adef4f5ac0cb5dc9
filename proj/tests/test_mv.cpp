#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "gsi/errors.hpp"
#include "gsi/mv.hpp"

using namespace gsi;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("rational literals") {
  CHECK(parse_rational("3/4") == q(3, 4));
  CHECK(parse_rational("-2/4") == q(-1, 2));
  CHECK(parse_rational("+7") == 7);
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK_THROWS_AS(parse_rational("3/0"), InvariantError);
  CHECK_THROWS_AS(parse_rational("0.5"), InvariantError);
  CHECK_THROWS_AS(parse_rational("1e3"), InvariantError);
  CHECK_THROWS_AS(parse_rational("1/-2"), InvariantError);
  CHECK_THROWS_AS(parse_rational(""), InvariantError);
  CHECK(to_int64(q(12)) == 12);
  CHECK_THROWS_AS(to_int64(q(1, 2)), InvariantError);
}

TEST_CASE("unit interval operations") {
  const Chain c = Chain::unit_interval();
  CHECK(oplus(Value(c, q(3, 4)), Value(c, q(1, 2))) == Value::top(c));
  CHECK(oplus(Value(c, q(1, 4)), Value(c, q(1, 2))).rational() == q(3, 4));
  CHECK(ominus(Value(c, q(1, 4)), Value(c, q(1, 2))).is_zero());
  CHECK(ominus(Value(c, q(3, 4)), Value(c, q(1, 2))).rational() == q(1, 4));
  CHECK(complement(Value(c, q(1, 3))).rational() == q(2, 3));
  CHECK_THROWS_AS(Value(c, q(3, 2)), InvariantError);
  CHECK_THROWS_AS(Value(c, q(-1, 2)), InvariantError);
}

TEST_CASE("finite chain operations") {
  const Chain c = Chain::finite(5);
  CHECK(oplus(Value(c, q(3)), Value(c, q(4))).rational() == 5);
  CHECK(ominus(Value(c, q(3)), Value(c, q(4))).rational() == 0);
  CHECK(complement(Value(c, q(2))).rational() == 3);
  CHECK_THROWS_AS(Value(c, q(1, 2)), InvariantError);
  CHECK_THROWS_AS(Value(c, q(6)), InvariantError);
  CHECK_THROWS_AS(Chain::finite(0), InvariantError);
  CHECK_THROWS_AS((void)(Value(c, q(1)) < Value(Chain::finite(4), q(1))), InvariantError);
}

TEST_CASE("MV laws on random values") {
  gen::Rng rng(7);
  for (const Chain c : {Chain::unit_interval(), Chain::finite(6)}) {
    for (int i = 0; i < 500; ++i) {
      const Value x(c, gen::value(rng, c)), y(c, gen::value(rng, c)), z(c, gen::value(rng, c));
      CHECK(oplus(x, y) == oplus(y, x));
      CHECK(oplus(oplus(x, y), z) == oplus(x, oplus(y, z)));
      CHECK(oplus(x, Value::zero(c)) == x);
      CHECK(oplus(x, Value::top(c)) == Value::top(c));
      CHECK(complement(complement(x)) == x);
      CHECK(ominus(x, y) == complement(oplus(complement(x), y)));
      // natural order: x below y iff y = x (+) z for some z, namely z = y (-) x
      CHECK((x <= y) == (oplus(x, ominus(y, x)) == y));
      CHECK(oplus(ominus(x, y), y) == join(x, y));
    }
  }
}

TEST_CASE("assignments") {
  const auto dom = Domain::make({"a", "b", "c"});
  const Chain c = Chain::unit_interval();
  const Assignment a(dom, c, {q(1, 2), q(0), q(1, 4)});
  CHECK(a.support() == PositionSet::of(3, {0, 2}));
  CHECK(a.min_nonzero()->rational() == q(1, 4));
  CHECK(!Assignment::zero(dom, c).min_nonzero());
  CHECK(norm(a).rational() == q(1, 2));
  CHECK(a.at("c").rational() == q(1, 4));
  const Assignment d = decrease(a, PositionSet::of(3, {0, 2}), Value(c, q(1, 4)));
  CHECK(d == Assignment(dom, c, {q(1, 4), q(0), q(0)}));
  CHECK(strictly_below(d, a));
  CHECK(leq(d, a));
  CHECK(!leq(a, d));
  CHECK(ominus(a, d) == Assignment(dom, c, {q(1, 4), q(0), q(1, 4)}));
  CHECK(pointwise_join(a, d) == a);
  CHECK(pointwise_meet(a, d) == d);
  CHECK(to_string(a) == "{a:1/2, b:0, c:1/4}");
  CHECK_THROWS_AS(Assignment(dom, c, {q(2), q(0), q(0)}), InvariantError);
  CHECK_THROWS_AS(Domain::make({"x", "x"}), InvariantError);
  CHECK_THROWS_AS(leq(a, Assignment::zero(dom, Chain::finite(2))), InvariantError);
}

TEST_CASE("position sets") {
  auto s = PositionSet::of(5, {1, 3});
  CHECK(s.count() == 2);
  CHECK(s.subset_of(PositionSet::all(5)));
  CHECK(s.intersect(PositionSet::of(5, {3, 4})) == PositionSet::of(5, {3}));
  CHECK(s.unite(PositionSet::of(5, {0})) == PositionSet::of(5, {0, 1, 3}));
  s.erase(1);
  CHECK(s.members() == std::vector<std::size_t>{3});
  CHECK(PositionSet(4).empty());
}

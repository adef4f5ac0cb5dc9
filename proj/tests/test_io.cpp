#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsi/errors.hpp"
#include "gsi/io.hpp"

#include <string>

using namespace gsi;

namespace {

std::string fixture_text(const char* name) { return read_file(std::string(GSI_FIXTURES) + "/" + name); }

// Runs f and returns the ParseError it throws.
template <class F>
ParseError parse_failure(F f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error");
  return ParseError(0, "");
}

}  // namespace

TEST_CASE("fixtures parse") {
  const Ssg g = parse_ssg(fixture_text("eps_quarter.ssg"));
  CHECK(g.size() == 5);
  CHECK(g.state(1).name == "eps");
  CHECK(g.state(1).payoff == Rational(1, 4));
  CHECK(g.state(2).kind == SsgKind::Average);
  CHECK(parse_ssg(fixture_text("stability.ssg")).size() == 3);
  const EnergyGame e = parse_energy(fixture_text("four_state.eg"));
  CHECK(e.size() == 4);
  CHECK(e.edges().size() == 9);
  CHECK(parse_energy(fixture_text("negative_cycle.eg")).size() == 5);
  const Pa pa = parse_pa(fixture_text("three_state.pa"));
  CHECK(pa.size() == 3);
  CHECK(pa.state(0).dists.size() == 2);
  CHECK(detect_kind(fixture_text("eps_quarter.ssg")) == FileKind::Ssg);
  CHECK(detect_kind(fixture_text("four_state.eg")) == FileKind::Energy);
  CHECK(detect_kind(fixture_text("three_state.pa")) == FileKind::Pa);
}

TEST_CASE("emit then parse is the identity") {
  for (const char* f : {"eps_quarter.ssg", "stability.ssg"}) {
    const std::string once = emit_ssg(parse_ssg(fixture_text(f)));
    CHECK(emit_ssg(parse_ssg(once)) == once);
  }
  for (const char* f : {"four_state.eg", "negative_cycle.eg"}) {
    const std::string once = emit_energy(parse_energy(fixture_text(f)));
    CHECK(emit_energy(parse_energy(once)) == once);
    CHECK(once == fixture_text(f));
  }
  const std::string once = emit_pa(parse_pa(fixture_text("three_state.pa")));
  CHECK(emit_pa(parse_pa(once)) == once);
  CHECK(once == fixture_text("three_state.pa"));
}

TEST_CASE("normalisation") {
  const std::string text = "# comment\n\nssg   \n  sink  a  2/4 # half\nmax b b a\n";
  CHECK(emit_ssg(parse_ssg(text)) == "ssg\nsink a 1/2\nmax b b a\n");
}

TEST_CASE("errors carry line numbers") {
  CHECK(std::string(parse_failure([] { parse_ssg(""); }).what()) == "empty file");
  CHECK(std::string(parse_failure([] { parse_ssg("# nothing\nssg\n"); }).what()) == "no states");
  CHECK(std::string(parse_failure([] { parse_energy("energy\n"); }).what()) == "no states");
  CHECK(std::string(parse_failure([] { parse_pa("pa\n"); }).what()) == "no states");

  const auto zero = parse_failure([] { parse_ssg("ssg\nsink a 1\nsink b 3/0\n"); });
  CHECK(zero.line() == 3);
  CHECK(std::string(zero.what()).find("zero denominator") != std::string::npos);
  CHECK(parse_failure([] { parse_ssg("ssg\nsink a 0.5\n"); }).line() == 2);
  CHECK(parse_failure([] { parse_ssg("ssg\nsink a 3/2\n"); }).line() == 2);
  CHECK(parse_failure([] { parse_ssg("ssg\nmax a b\n"); }).line() == 2);
  CHECK(parse_failure([] { parse_ssg("ssg\nsink a 1\nsink a 0\n"); }).line() == 3);
  CHECK(parse_failure([] { parse_ssg("ssg\nsink a 1\nav b a 1/2 a 1/4\n"); }).line() == 3);
  CHECK(parse_failure([] { parse_ssg("ssg\nloop a a\n"); }).line() == 2);
  CHECK(parse_failure([] { parse_ssg("energy\nstate a 0\n"); }).line() == 1);
  CHECK(parse_failure([] { parse_energy("energy\nstate a 0\nedge a a 1/2\n"); }).line() == 3);
  CHECK(parse_failure([] { parse_energy("energy\nstate a 2\n"); }).line() == 2);
  CHECK(parse_failure([] { parse_energy("energy\nstate a 0\nedge a b 1\n"); }).line() == 3);
  CHECK(parse_failure([] { parse_pa("pa\nstate s a\ndist s s 1/3\n"); }).line() == 3);
  CHECK(parse_failure([] { parse_pa("pa\nstate s a\ndist s s\n"); }).line() == 3);
  CHECK(parse_failure([] { detect_kind("graph\n"); }).line() == 1);
  CHECK(parse_failure([] { read_file("/nonexistent/file"); }).line() == 0);
}

TEST_CASE("structural errors surface as invariant errors") {
  CHECK_THROWS_AS(parse_energy("energy\nstate a 0\n"), InvariantError);
  CHECK_THROWS_AS(parse_pa("pa\nstate s a\n"), InvariantError);
}

TEST_CASE("forward references") {
  const Ssg g = parse_ssg("ssg\nmax m t\nsink t 1\n");
  CHECK(g.state(0).succ == std::vector<std::size_t>{1});
}

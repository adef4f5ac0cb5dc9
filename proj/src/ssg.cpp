#include "gsi/ssg.hpp"

#include "gsi/errors.hpp"
#include "gsi/lp.hpp"

namespace gsi {

namespace {

std::vector<std::string> names_of(const std::vector<SsgState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(s.name);
  return out;
}

}  // namespace

Ssg::Ssg(std::vector<SsgState> states) : states_(std::move(states)), domain_(Domain::make(names_of(states_))) {
  const std::size_t n = states_.size();
  if (n == 0) throw InvariantError("game has no states");
  for (auto& s : states_) {
    s.payoff.canonicalize();
    for (auto& [v, p] : s.dist) p.canonicalize();
  }
  for (const auto& s : states_) {
    switch (s.kind) {
      case SsgKind::Min:
      case SsgKind::Max:
        if (s.succ.empty()) throw InvariantError("state '" + s.name + "' has no successors");
        for (auto v : s.succ)
          if (v >= n) throw InvariantError("state '" + s.name + "' has an unknown successor");
        break;
      case SsgKind::Average: {
        if (s.dist.empty()) throw InvariantError("average state '" + s.name + "' has an empty distribution");
        Rational total = 0;
        for (const auto& [v, p] : s.dist) {
          if (v >= n) throw InvariantError("state '" + s.name + "' has an unknown successor");
          if (p <= 0) throw InvariantError("state '" + s.name + "' has a non-positive probability");
          total += p;
        }
        if (total != 1) throw InvariantError("distribution of '" + s.name + "' sums to " + to_string(total));
        break;
      }
      case SsgKind::Sink:
        if (s.payoff < 0 || s.payoff > 1) throw InvariantError("payoff of '" + s.name + "' is outside [0,1]");
        break;
    }
  }
}

namespace {

Term row_term(const Ssg& g, std::size_t v) {
  const std::size_t n = g.size();
  const auto& s = g.state(v);
  switch (s.kind) {
    case SsgKind::Min: return Term::min_rel(n, {s.succ});
    case SsgKind::Max: return Term::max_rel(n, {s.succ});
    case SsgKind::Average: return Term::average(n, {s.dist});
    case SsgKind::Sink: break;
  }
  return Term::constant(n, {s.payoff});
}

Decomposition decomposition(const Ssg& g, SsgKind player, DecompositionKind kind) {
  std::vector<std::vector<Term>> options(g.size());
  std::vector<std::vector<std::string>> labels(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = g.state(v);
    if (s.kind == player) {
      for (auto t : s.succ) {
        options[v].push_back(Term::reindex(g.size(), {t}));
        labels[v].push_back(g.state(t).name);
      }
    } else {
      options[v].push_back(row_term(g, v));
      labels[v].push_back("-");
    }
  }
  return Decomposition(kind, g.domain(), Chain::unit_interval(), std::move(options), std::move(labels));
}

void check_choice(const Ssg& g, const Strategy& c, SsgKind player) {
  if (c.size() != g.size()) throw InvariantError("strategy does not cover every state");
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = g.state(v);
    const std::size_t count = s.kind == player ? s.succ.size() : 1;
    if (c[v] >= count) throw InvariantError("strategy choice out of range at '" + s.name + "'");
  }
}

// Variables a_v in [0,1], one per state, in state order.
LinearProgram base_program(const Ssg& g, const Rational& cost) {
  LinearProgram lp;
  for (const auto& s : g.states()) lp.add_variable(s.name, 0, Rational(1), cost);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = g.state(v);
    if (s.kind == SsgKind::Sink) {
      lp.add_constraint({{v, 1}}, Relation::Eq, s.payoff);
    } else if (s.kind == SsgKind::Average) {
      LinearRow row{{v, 1}};
      for (const auto& [t, p] : s.dist) row.emplace_back(t, -p);
      lp.add_constraint(std::move(row), Relation::Eq, 0);
    }
  }
  return lp;
}

Assignment assignment_of(const Ssg& g, std::vector<Rational> x) {
  return Assignment(g.domain(), Chain::unit_interval(), std::move(x));
}

}  // namespace

Term value_term(const Ssg& g) {
  std::vector<Term> rows;
  for (std::size_t v = 0; v < g.size(); ++v) rows.push_back(row_term(g, v));
  return Term::disjoint_union(std::move(rows));
}

Decomposition min_decomposition(const Ssg& g) { return decomposition(g, SsgKind::Min, DecompositionKind::Min); }

Decomposition max_decomposition(const Ssg& g) { return decomposition(g, SsgKind::Max, DecompositionKind::Max); }

Assignment solve_fixed_min_strategy(const Ssg& g, const Strategy& c) {
  check_choice(g, c, SsgKind::Min);
  LinearProgram lp = base_program(g, 1);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = g.state(v);
    if (s.kind == SsgKind::Max) {
      for (auto t : s.succ)
        if (t != v) lp.add_constraint({{v, 1}, {t, -1}}, Relation::GreaterEq, 0);
    } else if (s.kind == SsgKind::Min) {
      const auto t = s.succ[c[v]];
      if (t != v) lp.add_constraint({{v, 1}, {t, -1}}, Relation::Eq, 0);
    }
  }
  return assignment_of(g, solve_min(lp).x);
}

PositionSet forced_nontermination(const Ssg& g, const Strategy& c) {
  check_choice(g, c, SsgKind::Max);
  PositionSet s(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.state(v).kind != SsgKind::Sink) s.insert(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto v : s.members()) {
      const auto& st = g.state(v);
      bool keep = true;
      switch (st.kind) {
        case SsgKind::Min: {
          keep = false;
          for (auto t : st.succ) keep = keep || s.contains(t);
          break;
        }
        case SsgKind::Average:
          for (const auto& [t, p] : st.dist) keep = keep && s.contains(t);
          break;
        case SsgKind::Max:
          keep = s.contains(st.succ[c[v]]);
          break;
        case SsgKind::Sink:
          keep = false;
          break;
      }
      if (!keep) {
        s.erase(v);
        changed = true;
      }
    }
  }
  return s;
}

Assignment solve_fixed_max_strategy(const Ssg& g, const Strategy& c) {
  const PositionSet zero = forced_nontermination(g, c);
  LinearProgram lp = base_program(g, -1);
  for (auto v : zero.members()) lp.add_constraint({{v, 1}}, Relation::Eq, 0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = g.state(v);
    if (s.kind == SsgKind::Min) {
      for (auto t : s.succ)
        if (t != v) lp.add_constraint({{v, 1}, {t, -1}}, Relation::LessEq, 0);
    } else if (s.kind == SsgKind::Max) {
      const auto t = s.succ[c[v]];
      if (t != v) lp.add_constraint({{v, 1}, {t, -1}}, Relation::Eq, 0);
    }
  }
  return assignment_of(g, solve_min(lp).x);
}

SolveResult solve_ssg_above(const Ssg& g, const AboveOptions& opts) {
  return si_above(min_decomposition(g), [&](const Strategy& c, const Term&) { return solve_fixed_min_strategy(g, c); },
                  opts);
}

SolveResult solve_ssg_below(const Ssg& g, std::optional<Strategy> initial) {
  return si_below(max_decomposition(g), [&](const Strategy& c, const Term&) { return solve_fixed_max_strategy(g, c); },
                  std::move(initial));
}

}  // namespace gsi

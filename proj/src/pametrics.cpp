#include "gsi/pametrics.hpp"

#include "gsi/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gsi {

namespace {

std::vector<std::string> state_names(const std::vector<PaState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(s.name);
  return out;
}

std::vector<std::string> pair_names(const std::vector<PaState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states)
    for (const auto& t : states) out.push_back("(" + s.name + "," + t.name + ")");
  return out;
}

}  // namespace

Pa::Pa(std::vector<PaState> states)
    : states_(std::move(states)), domain_(Domain::make(state_names(states_))), pairs_(Domain::make(pair_names(states_))) {
  const std::size_t n = states_.size();
  if (n == 0) throw InvariantError("automaton has no states");
  for (auto& s : states_)
    for (auto& d : s.dists)
      for (auto& [v, p] : d) p.canonicalize();
  for (const auto& s : states_) {
    if (s.dists.empty()) throw InvariantError("state '" + s.name + "' has no distributions");
    for (const auto& d : s.dists) {
      Rational total = 0;
      std::set<std::size_t> seen;
      for (const auto& [v, p] : d) {
        if (v >= n) throw InvariantError("distribution of '" + s.name + "' refers to an unknown state");
        if (p <= 0) throw InvariantError("distribution of '" + s.name + "' has a non-positive mass");
        if (!seen.insert(v).second) throw InvariantError("distribution of '" + s.name + "' repeats a state");
        total += p;
      }
      if (total != 1) throw InvariantError("distribution of '" + s.name + "' sums to " + to_string(total));
    }
  }
}

Rational hausdorff(const std::vector<std::vector<Rational>>& kvals) {
  if (kvals.empty() || kvals.front().empty()) throw InvariantError("hausdorff: empty set");
  const std::size_t m = kvals.size(), n = kvals.front().size();
  Rational h = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (kvals[i].size() != n) throw InvariantError("hausdorff: ragged table");
    h = std::max(h, *std::min_element(kvals[i].begin(), kvals[i].end()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational best = kvals[0][j];
    for (std::size_t i = 1; i < m; ++i) best = std::min(best, kvals[i][j]);
    h = std::max(h, best);
  }
  return h;
}

TransportResult kantorovich(const Pa& pa, const Assignment& d, const Distribution& b, const Distribution& b2) {
  if (d.size() != pa.size() * pa.size()) throw InvariantError("distance is not over pairs of states");
  return transport([&](std::size_t u, std::size_t v) { return d[pa.pair(u, v)]; }, b, b2);
}

namespace {

struct PairTable {
  std::vector<std::vector<Rational>> k;
  std::vector<std::vector<TransportPlan>> plans;
  Rational h;
};

PairTable analyse(const Pa& pa, const Assignment& d, std::size_t s, std::size_t t) {
  const auto& xs = pa.state(s).dists;
  const auto& ys = pa.state(t).dists;
  PairTable tab;
  tab.k.assign(xs.size(), std::vector<Rational>(ys.size()));
  tab.plans.assign(xs.size(), std::vector<TransportPlan>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      TransportResult r = kantorovich(pa, d, xs[i], ys[j]);
      tab.k[i][j] = r.value;
      tab.plans[i][j] = std::move(r.plan);
    }
  tab.h = hausdorff(tab.k);
  return tab;
}

// Every pair within the Hausdorff value, pruned to a minimal coupling,
// largest values first.
std::vector<std::pair<std::size_t, std::size_t>> closest_relation(const std::vector<std::vector<Rational>>& k,
                                                                   const Rational& h) {
  const std::size_t m = k.size(), n = k.front().size();
  std::set<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (k[i][j] <= h) rel.insert({i, j});
  std::vector<std::pair<std::size_t, std::size_t>> order(rel.begin(), rel.end());
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return k[a.first][a.second] > k[b.first][b.second]; });
  for (const auto& p : order) {
    std::size_t row = 0, col = 0;
    for (const auto& q : rel) {
      row += q.first == p.first;
      col += q.second == p.second;
    }
    if (row > 1 && col > 1) rel.erase(p);
  }
  return {rel.begin(), rel.end()};
}

PairCoupling best_pair(const PairTable& tab) {
  PairCoupling pc;
  pc.relation = closest_relation(tab.k, tab.h);
  for (const auto& [i, j] : pc.relation) pc.plans.push_back(tab.plans[i][j]);
  return pc;
}

bool same_plan(const TransportPlan& x, const TransportPlan& y) {
  if (x.cells.size() != y.cells.size()) return false;
  for (std::size_t i = 0; i < x.cells.size(); ++i)
    if (x.cells[i].from != y.cells[i].from || x.cells[i].to != y.cells[i].to || x.cells[i].mass != y.cells[i].mass)
      return false;
  return true;
}

void check_structure(const Pa& pa, const CouplingStructure& c) {
  if (c.size() != pa.size() * pa.size()) throw InvariantError("coupling structure does not cover every pair");
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) {
      const auto& pc = c[pa.pair(s, t)];
      if (pa.same_label(s, t) != pc.has_value()) throw InvariantError("coupling structure disagrees with the labels");
      if (!pc) continue;
      if (pc->plans.size() != pc->relation.size()) throw InvariantError("coupling without a plan per element");
      std::vector<bool> rows(pa.state(s).dists.size()), cols(pa.state(t).dists.size());
      for (const auto& [i, j] : pc->relation) {
        if (i >= rows.size() || j >= cols.size()) throw InvariantError("set-coupling refers to an unknown distribution");
        rows[i] = cols[j] = true;
      }
      if (std::count(rows.begin(), rows.end(), false) || std::count(cols.begin(), cols.end(), false))
        throw InvariantError("relation is not a set-coupling");
    }
}

}  // namespace

bool operator==(const PairCoupling& x, const PairCoupling& y) {
  if (x.relation != y.relation || x.plans.size() != y.plans.size()) return false;
  for (std::size_t i = 0; i < x.plans.size(); ++i)
    if (!same_plan(x.plans[i], y.plans[i])) return false;
  return true;
}

Assignment m_eval(const Pa& pa, const Assignment& d) {
  if (d.size() != pa.size() * pa.size() || !d.chain().is_unit()) throw InvariantError("distance is not over pairs of states");
  std::vector<Rational> out(d.size());
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t)
      out[pa.pair(s, t)] = pa.same_label(s, t) ? analyse(pa, d, s, t).h : Rational(1);
  return Assignment(d.domain(), d.chain(), std::move(out));
}

std::string describe(const Pa& pa, const CouplingStructure& c) {
  std::string out;
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) {
      const auto& pc = c.at(pa.pair(s, t));
      if (!pc) continue;
      out += pa.pairs()->name(pa.pair(s, t)) + ":";
      for (std::size_t e = 0; e < pc->relation.size(); ++e) {
        out += " " + std::to_string(pc->relation[e].first) + "~" + std::to_string(pc->relation[e].second) + "[";
        bool first = true;
        for (const auto& cell : pc->plans[e].cells) {
          if (!first) out += " ";
          out += pa.state(cell.from).name + "," + pa.state(cell.to).name + "=" + to_string(cell.mass);
          first = false;
        }
        out += "]";
      }
      out += "\n";
    }
  return out;
}

Term coupling_option_term(const Pa& pa, const PairCoupling& pc) {
  const std::size_t nn = pa.size() * pa.size();
  std::vector<Distribution> dists;
  for (const auto& plan : pc.plans) {
    Distribution dist;
    for (const auto& cell : plan.cells) dist.emplace_back(pa.pair(cell.from, cell.to), cell.mass);
    dists.push_back(std::move(dist));
  }
  std::vector<std::size_t> all(dists.size());
  std::iota(all.begin(), all.end(), 0);
  const std::size_t r = dists.size();
  return Term::compose(Term::max_rel(r, {all}), Term::average(nn, std::move(dists)));
}

Term coupling_term(const Pa& pa, const CouplingStructure& c) {
  check_structure(pa, c);
  const std::size_t nn = pa.size() * pa.size();
  std::vector<Term> rows;
  for (std::size_t p = 0; p < nn; ++p)
    rows.push_back(c[p] ? coupling_option_term(pa, *c[p]) : Term::constant(nn, {Rational(1)}));
  return Term::disjoint_union(std::move(rows));
}

Assignment m_c_eval(const Pa& pa, const CouplingStructure& c, const Assignment& d) {
  check_structure(pa, c);
  std::vector<Rational> out(d.size(), Rational(1));
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (!c[p]) continue;
    Rational best = 0;
    for (const auto& plan : c[p]->plans) {
      Rational s = 0;
      for (const auto& cell : plan.cells) s += cell.mass * d[pa.pair(cell.from, cell.to)];
      best = std::max(best, s);
    }
    out[p] = best;
  }
  return Assignment(d.domain(), d.chain(), std::move(out));
}

CouplingStructure best_coupling(const Pa& pa, const Assignment& d) {
  CouplingStructure c(pa.size() * pa.size());
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t)
      if (pa.same_label(s, t)) c[pa.pair(s, t)] = best_pair(analyse(pa, d, s, t));
  return c;
}

std::optional<CouplingStructure> improve_coupling(const Pa& pa, const CouplingStructure& c, const Assignment& d) {
  if (!(m_c_eval(pa, c, d) == d)) throw InvariantError("improve_coupling: not a fixpoint of the fixed coupling");
  CouplingStructure next = c;
  bool changed = false;
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) {
      if (!pa.same_label(s, t)) continue;
      const std::size_t p = pa.pair(s, t);
      PairTable tab = analyse(pa, d, s, t);
      if (tab.h < d[p]) {
        next[p] = best_pair(tab);
        changed = true;
      }
    }
  if (!changed) return std::nullopt;
  return next;
}

Assignment solve_fixed_coupling(const Pa& pa, const CouplingStructure& c) {
  check_structure(pa, c);
  LinearProgram lp;
  const std::size_t nn = pa.size() * pa.size();
  for (std::size_t p = 0; p < nn; ++p) lp.add_variable(pa.pairs()->name(p), 0, Rational(1), 1);
  for (std::size_t p = 0; p < nn; ++p) {
    if (!c[p]) {
      lp.add_constraint({{p, 1}}, Relation::Eq, 1);
      continue;
    }
    for (const auto& plan : c[p]->plans) {
      LinearRow row{{p, 1}};
      for (const auto& cell : plan.cells) row.emplace_back(pa.pair(cell.from, cell.to), -cell.mass);
      lp.add_constraint(std::move(row), Relation::GreaterEq, 0);
    }
  }
  return Assignment(pa.pairs(), Chain::unit_interval(), solve_min(lp).x);
}

namespace {

// Is there an optimal plan of value `target` using only cells inside `sub`?
bool optimal_within(const Pa& pa, const Assignment& d, const Distribution& b, const Distribution& b2,
                    const std::vector<bool>& sub, const Rational& target) {
  LinearProgram lp;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> var;
  for (const auto& [u, p] : b)
    for (const auto& [v, q] : b2)
      if (sub[pa.pair(u, v)]) var[{u, v}] = lp.add_variable("w", 0, std::nullopt, d[pa.pair(u, v)]);
  for (const auto& [u, p] : b) {
    LinearRow row;
    for (const auto& [v, q] : b2)
      if (auto it = var.find({u, v}); it != var.end()) row.emplace_back(it->second, 1);
    if (row.empty()) return false;
    lp.add_constraint(std::move(row), Relation::Eq, p);
  }
  for (const auto& [v, q] : b2) {
    LinearRow row;
    for (const auto& [u, p] : b)
      if (auto it = var.find({u, v}); it != var.end()) row.emplace_back(it->second, 1);
    if (row.empty()) return false;
    lp.add_constraint(std::move(row), Relation::Eq, q);
  }
  try {
    return solve_min(lp).optimum == target;
  } catch (const LpInfeasible&) {
    return false;
  }
}

}  // namespace

PositionSet pa_vicious(const Pa& pa, const Assignment& d) {
  if (!(m_eval(pa, d) == d)) throw InvariantError("pa_vicious: distance is not a fixpoint of M");
  const std::size_t nn = d.size();
  std::vector<std::optional<PairTable>> tables(nn);
  std::vector<bool> cur(nn, false);
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) {
      const std::size_t p = pa.pair(s, t);
      if (d[p] == 0) continue;
      cur[p] = true;
      if (pa.same_label(s, t)) tables[p] = analyse(pa, d, s, t);
    }
  for (;;) {
    std::vector<bool> next(nn, false);
    for (std::size_t s = 0; s < pa.size(); ++s)
      for (std::size_t t = 0; t < pa.size(); ++t) {
        const std::size_t p = pa.pair(s, t);
        if (!cur[p] || !tables[p]) continue;
        const auto& tab = *tables[p];
        const auto& xs = pa.state(s).dists;
        const auto& ys = pa.state(t).dists;
        std::vector<bool> rows(xs.size(), false), cols(ys.size(), false);
        for (std::size_t i = 0; i < xs.size(); ++i)
          for (std::size_t j = 0; j < ys.size(); ++j) {
            const Rational& kv = tab.k[i][j];
            const bool allowed = kv < tab.h || (kv == tab.h && optimal_within(pa, d, xs[i], ys[j], cur, kv));
            if (allowed) rows[i] = cols[j] = true;
          }
        next[p] = std::all_of(rows.begin(), rows.end(), [](bool b) { return b; }) &&
                  std::all_of(cols.begin(), cols.end(), [](bool b) { return b; });
      }
    if (next == cur) break;
    cur = std::move(next);
  }
  PositionSet out(nn);
  for (std::size_t p = 0; p < nn; ++p)
    if (cur[p]) out.insert(p);
  return out;
}

PaResult solve_pa_above(const Pa& pa) {
  const std::size_t nn = pa.size() * pa.size();
  std::vector<Rational> discrete(nn, Rational(1));
  for (std::size_t s = 0; s < pa.size(); ++s) discrete[pa.pair(s, s)] = 0;
  CouplingStructure c = best_coupling(pa, Assignment(pa.pairs(), Chain::unit_interval(), discrete));
  std::set<std::string> visited;
  std::vector<PaTraceEntry> trace;
  const Evaluator m = [&](const Assignment& x) { return m_eval(pa, x); };
  for (;;) {
    if (!visited.insert(describe(pa, c)).second) throw SoundnessError("coupling iteration revisited a structure");
    Assignment d = solve_fixed_coupling(pa, c);
    if (!(m_c_eval(pa, c, d) == d)) throw SoundnessError("linear program returned a non-fixpoint");
    if (auto next = improve_coupling(pa, c, d)) {
      trace.push_back({trace.size(), d, TraceEvent::Improve, {}, {}});
      c = std::move(*next);
      continue;
    }
    PositionSet vic = pa_vicious(pa, d);
    if (vic.empty()) {
      trace.push_back({trace.size(), d, TraceEvent::Stop, {}, {}});
      return {std::move(d), std::move(c), std::move(trace)};
    }
    Decrease dec = decrease_to_prefixpoint(m, d, vic);
    trace.push_back({trace.size(), d, TraceEvent::Skip, vic, dec.delta.rational()});
    c = best_coupling(pa, dec.result);
  }
}

std::vector<TransportPlan> transport_vertices(const Distribution& b, const Distribution& b2) {
  const std::size_t m = b.size(), n = b2.size();
  const std::size_t cells = m * n, r = m + n - 1;
  if (cells > 25) throw CapacityError("transport_vertices: supports too large");
  std::vector<TransportPlan> out;
  std::vector<bool> pick(cells, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r), true);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);
    // Spanning tree test on the bipartite graph rows + columns.
    std::vector<std::size_t> parent(m + n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool tree = true;
    for (auto c : chosen) {
      const auto a = find(c / n), z = find(m + c % n);
      if (a == z) {
        tree = false;
        break;
      }
      parent[a] = z;
    }
    if (!tree) continue;
    // Leaf elimination gives the unique basic solution.
    std::vector<Rational> row(m), col(n), mass(cells);
    for (std::size_t i = 0; i < m; ++i) row[i] = b[i].second;
    for (std::size_t j = 0; j < n; ++j) col[j] = b2[j].second;
    std::vector<bool> open(cells, false);
    for (auto c : chosen) open[c] = true;
    bool ok = true;
    for (std::size_t step = 0; step < r && ok; ++step) {
      bool found = false;
      for (std::size_t node = 0; node < m + n && !found; ++node) {
        std::size_t deg = 0, last = 0;
        for (auto c : chosen)
          if (open[c] && (node < m ? c / n == node : c % n == node - m)) {
            ++deg;
            last = c;
          }
        if (deg != 1) continue;
        const std::size_t i = last / n, j = last % n;
        mass[last] = node < m ? row[i] : col[j];
        row[i] -= mass[last];
        col[j] -= mass[last];
        open[last] = false;
        found = true;
      }
      ok = found;
    }
    if (!ok) continue;
    for (auto c : chosen)
      if (mass[c] < 0) ok = false;
    if (!ok) continue;
    TransportPlan plan;
    for (std::size_t c = 0; c < cells; ++c)
      if (mass[c] != 0) plan.cells.push_back({b[c / n].first, b2[c % n].first, mass[c]});
    if (std::none_of(out.begin(), out.end(), [&](const TransportPlan& p) { return same_plan(p, plan); }))
      out.push_back(std::move(plan));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> minimal_set_couplings(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw InvariantError("minimal_set_couplings: empty set");
  if (m * n > 20) throw CapacityError("minimal_set_couplings: sets too large");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  const std::size_t cells = m * n;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
    std::vector<std::size_t> rdeg(m, 0), cdeg(n, 0);
    for (std::size_t c = 0; c < cells; ++c)
      if (mask >> c & 1) {
        ++rdeg[c / n];
        ++cdeg[c % n];
      }
    if (std::count(rdeg.begin(), rdeg.end(), 0) || std::count(cdeg.begin(), cdeg.end(), 0)) continue;
    bool minimal = true;
    for (std::size_t c = 0; c < cells && minimal; ++c)
      if ((mask >> c & 1) && rdeg[c / n] > 1 && cdeg[c % n] > 1) minimal = false;
    if (!minimal) continue;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask >> c & 1) rel.emplace_back(c / n, c % n);
    out.push_back(std::move(rel));
  }
  return out;
}

CouplingStructure PaDecomposition::structure(const Strategy& c) const {
  dec.check(c);
  CouplingStructure out;
  for (std::size_t p = 0; p < choices.size(); ++p) out.push_back(choices[p][c[p]]);
  return out;
}

PaDecomposition enumerate_pa_decomposition(const Pa& pa, std::size_t cap) {
  const std::size_t nn = pa.size() * pa.size();
  std::vector<std::vector<Term>> options(nn);
  std::vector<std::vector<std::string>> labels(nn);
  std::vector<std::vector<std::optional<PairCoupling>>> choices(nn);
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) {
      const std::size_t p = pa.pair(s, t);
      if (!pa.same_label(s, t)) {
        options[p].push_back(Term::constant(nn, {Rational(1)}));
        labels[p].push_back("1");
        choices[p].push_back(std::nullopt);
        continue;
      }
      const auto& xs = pa.state(s).dists;
      const auto& ys = pa.state(t).dists;
      std::vector<std::vector<std::vector<TransportPlan>>> verts(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) verts[i].push_back(transport_vertices(xs[i], ys[j]));
      for (const auto& rel : minimal_set_couplings(xs.size(), ys.size())) {
        std::vector<std::size_t> idx(rel.size(), 0);
        for (;;) {
          PairCoupling pc{rel, {}};
          for (std::size_t e = 0; e < rel.size(); ++e) pc.plans.push_back(verts[rel[e].first][rel[e].second][idx[e]]);
          options[p].push_back(coupling_option_term(pa, pc));
          labels[p].push_back(std::to_string(labels[p].size()));
          choices[p].push_back(std::move(pc));
          if (choices[p].size() > cap) throw CapacityError("too many coupling options");
          std::size_t e = 0;
          while (e < rel.size() && ++idx[e] == verts[rel[e].first][rel[e].second].size()) idx[e++] = 0;
          if (e == rel.size()) break;
        }
      }
    }
  Decomposition dec(DecompositionKind::Min, pa.pairs(), Chain::unit_interval(), std::move(options), std::move(labels));
  return {std::move(dec), std::move(choices)};
}

}  // namespace gsi

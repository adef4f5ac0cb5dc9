#include "gsi/energy.hpp"

#include "gsi/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace gsi {

EnergyGame::EnergyGame(std::vector<std::string> names, std::vector<int> owner, std::vector<EnergyEdge> edges)
    : domain_(Domain::make(std::move(names))), owner_(std::move(owner)), edges_(std::move(edges)) {
  const std::size_t n = domain_->size();
  if (n == 0) throw InvariantError("game has no states");
  if (owner_.size() != n) throw InvariantError("every state needs an owner");
  for (auto o : owner_)
    if (o != 0 && o != 1) throw InvariantError("owner must be 0 or 1");
  out_.resize(n);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].from >= n || edges_[e].to >= n) throw InvariantError("edge refers to an unknown state");
    out_[edges_[e].from].push_back(e);
  }
  for (std::size_t v = 0; v < n; ++v)
    if (out_[v].empty()) throw InvariantError("state '" + domain_->name(v) + "' has no outgoing edge");
}

std::int64_t EnergyGame::max_abs_weight() const {
  std::int64_t m = 0;
  for (const auto& e : edges_) m = std::max(m, e.w < 0 ? -e.w : e.w);
  return m;
}

std::string to_string(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "inf"; }

std::string to_string(const ExtendedSolution& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (i) out += ", ";
    out += s.domain->name(i) + ":" + to_string(s.values[i]);
  }
  return out + "}";
}

namespace {

std::vector<std::size_t> targets(const EnergyGame& g, const std::vector<std::size_t>& es) {
  std::vector<std::size_t> out;
  for (auto e : es) out.push_back(g.edges()[e].to);
  return out;
}

std::vector<std::int64_t> weights(const EnergyGame& g, const std::vector<std::size_t>& es) {
  std::vector<std::int64_t> out;
  for (auto e : es) out.push_back(g.edges()[e].w);
  return out;
}

// h(a) = min/max over the given edges of a(v') (-)_Z w.
Term edge_choice(const EnergyGame& g, const std::vector<std::size_t>& es, std::int64_t k, bool is_min) {
  std::vector<std::size_t> all(es.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Term sel = is_min ? Term::min_rel(es.size(), {all}) : Term::max_rel(es.size(), {all});
  return Term::compose(std::move(sel),
                       Term::compose(Term::sub_weight(weights(g, es), k), Term::reindex(g.size(), targets(g, es))));
}

Decomposition energy_decomposition(const EnergyGame& g, std::int64_t k, int player) {
  const auto kind = player == 0 ? DecompositionKind::Min : DecompositionKind::Max;
  std::vector<std::vector<Term>> options(g.size());
  std::vector<std::vector<std::string>> labels(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& es = g.out_edges(v);
    if (g.owner(v) == player) {
      for (auto e : es) {
        options[v].push_back(edge_choice(g, {e}, k, true));
        labels[v].push_back(g.name(g.edges()[e].to));
      }
    } else {
      options[v].push_back(edge_choice(g, es, k, g.owner(v) == 0));
      labels[v].push_back("-");
    }
  }
  return Decomposition(kind, g.domain(), Chain::finite(k), std::move(options), std::move(labels));
}

std::int64_t clamp(std::int64_t x, std::int64_t k) { return std::min(std::max<std::int64_t>(x, 0), k); }

std::vector<std::int64_t> ints_of(const Assignment& a) {
  std::vector<std::int64_t> out;
  for (const auto& q : a.raw()) out.push_back(to_int64(q));
  return out;
}

}  // namespace

Term energy_term(const EnergyGame& g, std::int64_t k) {
  const std::size_t m = g.edges().size();
  std::vector<std::size_t> all_targets;
  std::vector<std::int64_t> all_weights;
  for (const auto& e : g.edges()) {
    all_targets.push_back(e.to);
    all_weights.push_back(e.w);
  }
  std::vector<std::vector<std::size_t>> pre0, pre1;
  std::vector<std::size_t> row_of(g.size());
  std::vector<std::size_t> order0, order1;
  for (std::size_t v = 0; v < g.size(); ++v) (g.owner(v) == 0 ? order0 : order1).push_back(v);
  for (auto v : order0) {
    row_of[v] = pre0.size();
    pre0.push_back(g.out_edges(v));
  }
  for (auto v : order1) {
    row_of[v] = order0.size() + pre1.size();
    pre1.push_back(g.out_edges(v));
  }
  std::vector<Term> parts;
  if (!pre0.empty()) parts.push_back(Term::min_rel(m, std::move(pre0)));
  if (!pre1.empty()) parts.push_back(Term::max_rel(m, std::move(pre1)));
  Term inner = Term::compose(Term::disjoint_union(std::move(parts)),
                             Term::compose(Term::sub_weight(std::move(all_weights), k),
                                           Term::reindex(g.size(), std::move(all_targets))));
  return Term::compose(Term::reindex(g.size(), std::move(row_of)), std::move(inner));
}

Decomposition energy_min_decomposition(const EnergyGame& g, std::int64_t k) { return energy_decomposition(g, k, 0); }

Decomposition energy_max_decomposition(const EnergyGame& g, std::int64_t k) { return energy_decomposition(g, k, 1); }

FiniteTransform transform_finite(const EnergyGame& g) {
  const std::size_t n = g.size();
  const std::int64_t big_w = std::max<std::int64_t>(1, g.max_abs_weight());
  const auto nn = static_cast<std::int64_t>(n);

  // Bellman-Ford on the reversed Player-1 subgraph: a state can reach a
  // negative Player-1 cycle iff its reversed distance is unbounded.
  std::vector<const EnergyEdge*> inner;
  for (const auto& e : g.edges())
    if (g.owner(e.from) == 1 && g.owner(e.to) == 1) inner.push_back(&e);
  std::vector<std::int64_t> dist(n, 0);
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto* e : inner)
      if (dist[e->to] + e->w < dist[e->from]) {
        dist[e->from] = dist[e->to] + e->w;
        changed = true;
      }
    if (!changed) break;
  }
  std::vector<bool> removed(n, false);
  std::deque<std::size_t> work;
  for (const auto* e : inner)
    if (dist[e->to] + e->w < dist[e->from] && !removed[e->from]) {
      removed[e->from] = true;
      work.push_back(e->from);
    }
  while (!work.empty()) {
    const auto x = work.front();
    work.pop_front();
    for (const auto* e : inner)
      if (e->to == x && !removed[e->from]) {
        removed[e->from] = true;
        work.push_back(e->from);
      }
  }

  std::vector<std::string> names;
  std::vector<int> owner;
  std::vector<std::size_t> to_new(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t v = 0; v < n; ++v)
    if (!removed[v]) {
      to_new[v] = names.size();
      names.push_back(g.name(v));
      owner.push_back(g.owner(v));
    }
  std::string sink_name = "sink";
  while (g.domain()->find(sink_name)) sink_name += "'";
  const std::size_t sink = names.size();
  names.push_back(sink_name);
  owner.push_back(0);

  std::vector<EnergyEdge> edges;
  for (const auto& e : g.edges())
    if (!removed[e.from] && !removed[e.to]) edges.push_back({to_new[e.from], to_new[e.to], e.w});
  std::vector<bool> has_edge(names.size(), false);
  for (const auto& e : edges) has_edge[e.from] = true;
  for (std::size_t v = 0; v < n; ++v) {
    if (removed[v]) continue;
    if (g.owner(v) == 0) {
      edges.push_back({to_new[v], sink, -2 * nn * big_w});
      has_edge[to_new[v]] = true;
    } else if (!has_edge[to_new[v]]) {
      throw InvariantError("state '" + g.name(v) + "' loses all outgoing edges in the transformation");
    }
  }
  edges.push_back({sink, sink, 0});
  EnergyGame out(std::move(names), std::move(owner), std::move(edges));
  return {std::move(out), std::move(removed), std::move(to_new), sink, 3 * nn * big_w, nn * big_w, g.domain()};
}

ExtendedSolution reconstruct(const Assignment& solution, const FiniteTransform& t) {
  if (solution.size() != t.game.size()) throw InvariantError("solution does not match the transformed game");
  ExtendedSolution out{t.original, {}};
  for (std::size_t v = 0; v < t.removed.size(); ++v) {
    if (t.removed[v]) {
      out.values.push_back(std::nullopt);
      continue;
    }
    const auto x = to_int64(solution[t.to_new[v]]);
    out.values.push_back(x < t.threshold ? std::optional<std::int64_t>(x) : std::nullopt);
  }
  return out;
}

ValueIterationResult value_iteration(const EnergyGame& g, std::int64_t k) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (const auto& e : g.edges())
    if (e.from != e.to && (pred[e.to].empty() || pred[e.to].back() != e.from)) pred[e.to].push_back(e.from);
  for (auto& p : pred) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  std::vector<std::int64_t> val(n, 0);
  std::deque<std::size_t> work;
  std::vector<bool> queued(n, true);
  for (std::size_t v = 0; v < n; ++v) work.push_back(v);
  std::size_t raises = 0;
  while (!work.empty()) {
    const auto v = work.front();
    work.pop_front();
    queued[v] = false;
    const bool is_min = g.owner(v) == 0;
    std::int64_t need = is_min ? k : 0;
    for (auto ei : g.out_edges(v)) {
      const auto& e = g.edges()[ei];
      const std::int64_t req = e.to == v ? (e.w >= 0 ? 0 : k) : clamp(val[e.to] - e.w, k);
      need = is_min ? std::min(need, req) : std::max(need, req);
    }
    if (need > val[v]) {
      val[v] = need;
      ++raises;
      for (auto p : pred[v])
        if (!queued[p]) {
          queued[p] = true;
          work.push_back(p);
        }
    }
  }
  std::vector<Rational> q;
  for (auto x : val) q.push_back(from_int(x));
  return {Assignment(g.domain(), Chain::finite(k), std::move(q)), raises};
}

EnergyGame restrict_game(const EnergyGame& g, const Decomposition& dec, const Strategy& c) {
  dec.check(c);
  const int player = dec.kind() == DecompositionKind::Min ? 0 : 1;
  std::vector<EnergyEdge> edges;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& es = g.out_edges(v);
    if (g.owner(v) == player)
      edges.push_back(g.edges()[es[c[v]]]);
    else
      for (auto e : es) edges.push_back(g.edges()[e]);
  }
  return EnergyGame(g.domain()->names(), g.owners(), std::move(edges));
}

namespace {

std::vector<bool> energy_approx_step(const EnergyGame& g, std::int64_t k, const std::vector<std::int64_t>& a,
                                     const std::vector<bool>& sub) {
  std::vector<bool> out(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (a[v] == 0) continue;
    const bool is_min = g.owner(v) == 0;
    bool ok = !is_min;
    for (auto ei : g.out_edges(v)) {
      const auto& e = g.edges()[ei];
      if (clamp(a[e.to] - e.w, k) != a[v]) continue;
      const std::int64_t d = a[e.to] - e.w;
      const bool good = d > 0 && d <= k && sub[e.to];
      if (is_min && good) ok = true;
      if (!is_min && !good) ok = false;
    }
    out[v] = ok;
  }
  return out;
}

}  // namespace

PositionSet energy_vicious(const EnergyGame& g, std::int64_t k, const Assignment& a) {
  const auto av = ints_of(a);
  std::vector<bool> cur(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) cur[v] = av[v] != 0;
  for (;;) {
    auto next = energy_approx_step(g, k, av, cur);
    for (std::size_t v = 0; v < g.size(); ++v) next[v] = next[v] && cur[v];
    if (next == cur) break;
    cur = std::move(next);
  }
  PositionSet s(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    if (cur[v]) s.insert(v);
  return s;
}

Rational energy_delta(const EnergyGame& g, const Assignment& a) {
  const auto av = ints_of(a);
  std::optional<std::int64_t> best;
  auto take = [&](std::int64_t x) {
    if (!best || x < *best) best = x;
  };
  for (const auto& e : g.edges()) {
    if (av[e.to] > e.w) take(av[e.to] - e.w);
    if (av[e.from] > av[e.to]) take(av[e.from] - av[e.to]);
  }
  if (auto m = a.min_nonzero()) take(to_int64(m->rational()));
  return from_int(best ? std::max<std::int64_t>(*best, 1) : 1);
}

EnergyRun solve_energy_kleene(const EnergyGame& g) {
  FiniteTransform t = transform_finite(g);
  KleeneResult r = kleene_solve(energy_term(t.game, t.k), t.game.domain(), Chain::finite(t.k));
  ExtendedSolution sol = reconstruct(r.value, t);
  return {std::move(sol), std::move(t), std::nullopt, r.steps};
}

EnergyRun solve_energy_vi(const EnergyGame& g) {
  FiniteTransform t = transform_finite(g);
  ValueIterationResult r = value_iteration(t.game, t.k);
  ExtendedSolution sol = reconstruct(r.value, t);
  return {std::move(sol), std::move(t), std::nullopt, r.raises};
}

namespace {

InnerSolver restricted_vi(const EnergyGame& g, const Decomposition& dec, std::int64_t k) {
  return [&g, &dec, k](const Strategy& c, const Term&) { return value_iteration(restrict_game(g, dec, c), k).value; };
}

}  // namespace

EnergyRun solve_energy_above(const EnergyGame& g) {
  FiniteTransform t = transform_finite(g);
  const EnergyGame& h = t.game;
  const Decomposition dec = energy_min_decomposition(h, t.k);
  Strategy initial(h.size(), 0);
  for (std::size_t v = 0; v < h.size(); ++v)
    if (h.owner(v) == 0) {
      const auto& es = h.out_edges(v);
      for (std::size_t i = 0; i < es.size(); ++i)
        if (h.edges()[es[i]].to == t.sink) initial[v] = i;
    }
  AboveOptions opts;
  opts.initial = initial;
  opts.vicious = [&](const Assignment& a) { return energy_vicious(h, t.k, a); };
  opts.extra_deltas = [&](const Assignment& a, const PositionSet&) { return std::vector<Rational>{energy_delta(h, a)}; };
  SolveResult r = si_above(dec, restricted_vi(h, dec, t.k), opts);
  ExtendedSolution sol = reconstruct(r.values, t);
  const std::size_t iters = r.inner_solves();
  return {std::move(sol), std::move(t), std::move(r), iters};
}

EnergyRun solve_energy_below(const EnergyGame& g) {
  FiniteTransform t = transform_finite(g);
  const Decomposition dec = energy_max_decomposition(t.game, t.k);
  SolveResult r = si_below(dec, restricted_vi(t.game, dec, t.k));
  ExtendedSolution sol = reconstruct(r.values, t);
  const std::size_t iters = r.inner_solves();
  return {std::move(sol), std::move(t), std::move(r), iters};
}

std::string describe_energy_strategy(const FiniteTransform& t, const Decomposition& dec, const Strategy& c) {
  const int player = dec.kind() == DecompositionKind::Min ? 0 : 1;
  std::string out;
  for (std::size_t v = 0; v < t.game.size(); ++v) {
    if (v == t.sink || t.game.owner(v) != player) continue;
    if (!out.empty()) out += ", ";
    out += t.game.name(v) + "->" + dec.label(v, c[v]);
  }
  return out;
}

}  // namespace gsi

#include "gsi/nonexp.hpp"

#include "gsi/errors.hpp"

#include <algorithm>
#include <set>

namespace gsi {

struct Term::Node {
  explicit Node(Kind k) : kind(k) {}
  Kind kind;
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<Rational> values;                 // Const
  std::vector<std::size_t> u;                   // Reindex
  std::vector<std::vector<std::size_t>> pre;    // MinRel, MaxRel
  std::vector<Distribution> dists;              // Average
  std::vector<std::int64_t> w;                  // SubWeight
  std::int64_t k = 0;                           // SubWeight
  std::vector<Term> parts;                      // Compose {outer, inner}, DisjointUnion
};

Term::Kind Term::kind() const noexcept { return node_->kind; }
std::size_t Term::in_size() const noexcept { return node_->in; }
std::size_t Term::out_size() const noexcept { return node_->out; }

namespace {

void check_index(std::size_t i, std::size_t bound, const char* what) {
  if (i >= bound)
    throw InvariantError(std::string(what) + ": position " + std::to_string(i) + " outside domain of size " +
                         std::to_string(bound));
}

}  // namespace

Term Term::constant(std::size_t in_size, std::vector<Rational> values) {
  for (auto& q : values) q.canonicalize();
  for (const auto& q : values)
    if (q < 0) throw InvariantError("constant: negative value " + to_string(q));
  Node n(Kind::Const);
  n.in = in_size;
  n.out = values.size();
  n.values = std::move(values);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::reindex(std::size_t in_size, std::vector<std::size_t> u) {
  for (auto y : u) check_index(y, in_size, "reindex");
  Node n(Kind::Reindex);
  n.in = in_size;
  n.out = u.size();
  n.u = std::move(u);
  return Term(std::make_shared<const Node>(std::move(n)));
}

namespace {

Term::Node relation_node(Term::Kind kind, std::size_t in_size, std::vector<std::vector<std::size_t>> pre) {
  for (const auto& p : pre) {
    if (p.empty()) throw InvariantError("min/max relation is not left-total: empty preimage");
    for (auto y : p) check_index(y, in_size, "relation");
  }
  Term::Node n(kind);
  n.in = in_size;
  n.out = pre.size();
  n.pre = std::move(pre);
  return n;
}

}  // namespace

Term Term::min_rel(std::size_t in_size, std::vector<std::vector<std::size_t>> preimages) {
  return Term(std::make_shared<const Node>(relation_node(Kind::MinRel, in_size, std::move(preimages))));
}

Term Term::max_rel(std::size_t in_size, std::vector<std::vector<std::size_t>> preimages) {
  return Term(std::make_shared<const Node>(relation_node(Kind::MaxRel, in_size, std::move(preimages))));
}

Term Term::average(std::size_t in_size, std::vector<Distribution> dists) {
  for (auto& d : dists) {
    Rational total = 0;
    for (auto& [y, p] : d) {
      p.canonicalize();
      check_index(y, in_size, "average");
      if (p <= 0) throw InvariantError("average: non-positive mass " + to_string(p));
      total += p;
    }
    if (total != 1) throw InvariantError("average: distribution sums to " + to_string(total));
  }
  Node n(Kind::Average);
  n.in = in_size;
  n.out = dists.size();
  n.dists = std::move(dists);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::sub_weight(std::vector<std::int64_t> w, std::int64_t k) {
  if (k < 1) throw InvariantError("sub_weight: bound must be >= 1");
  Node n(Kind::SubWeight);
  n.in = n.out = w.size();
  n.w = std::move(w);
  n.k = k;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::compose(Term outer, Term inner) {
  if (outer.in_size() != inner.out_size())
    throw InvariantError("compose: inner produces " + std::to_string(inner.out_size()) + " positions, outer expects " +
                         std::to_string(outer.in_size()));
  Node n(Kind::Compose);
  n.in = inner.in_size();
  n.out = outer.out_size();
  n.parts = {std::move(outer), std::move(inner)};
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::disjoint_union(std::vector<Term> parts) {
  if (parts.empty()) throw InvariantError("disjoint_union: no parts");
  Node n(Kind::DisjointUnion);
  n.in = parts.front().in_size();
  for (const auto& p : parts) {
    if (p.in_size() != n.in) throw InvariantError("disjoint_union: parts over different domains");
    n.out += p.out_size();
  }
  n.parts = std::move(parts);
  return Term(std::make_shared<const Node>(std::move(n)));
}

namespace {

// Evaluation tree: output of every node, so that approximations of
// compositions can look up intermediate values.
struct Eval {
  std::vector<Rational> out;
  std::vector<Eval> kids;
};

Eval run(const Term::Node& n, const std::vector<Rational>& a, const Chain& chain) {
  using K = Term::Kind;
  if (a.size() != n.in)
    throw InvariantError("argument has " + std::to_string(a.size()) + " positions, term expects " + std::to_string(n.in));
  Eval e;
  switch (n.kind) {
    case K::Const:
      for (const auto& q : n.values)
        if (!chain.contains(q)) throw InvariantError("constant " + to_string(q) + " outside chain " + chain.describe());
      e.out = n.values;
      break;
    case K::Reindex:
      e.out.reserve(n.out);
      for (auto y : n.u) e.out.push_back(a[y]);
      break;
    case K::MinRel:
    case K::MaxRel: {
      const bool is_min = n.kind == K::MinRel;
      e.out.reserve(n.out);
      for (const auto& p : n.pre) {
        const Rational* best = &a[p.front()];
        for (auto y : p)
          if (is_min ? a[y] < *best : a[y] > *best) best = &a[y];
        e.out.push_back(*best);
      }
      break;
    }
    case K::Average:
      if (!chain.is_unit()) throw InvariantError("average is only defined on the unit interval");
      e.out.reserve(n.out);
      for (const auto& d : n.dists) {
        Rational s = 0;
        for (const auto& [y, p] : d) s += p * a[y];
        e.out.push_back(s);
      }
      break;
    case K::SubWeight: {
      if (!chain.is_finite() || chain.k() != n.k)
        throw InvariantError("sub_weight with bound " + std::to_string(n.k) + " applied on chain " + chain.describe());
      e.out.reserve(n.out);
      const Rational top = chain.top();
      for (std::size_t i = 0; i < n.w.size(); ++i) {
        Rational d = a[i] - from_int(n.w[i]);
        if (d < 0) d = 0;
        if (d > top) d = top;
        e.out.push_back(d);
      }
      break;
    }
    case K::Compose: {
      Eval inner = run(n.parts[1].node(), a, chain);
      Eval outer = run(n.parts[0].node(), inner.out, chain);
      e.out = outer.out;
      e.kids.push_back(std::move(outer));
      e.kids.push_back(std::move(inner));
      break;
    }
    case K::DisjointUnion:
      e.out.reserve(n.out);
      for (const auto& p : n.parts) {
        Eval part = run(p.node(), a, chain);
        e.out.insert(e.out.end(), part.out.begin(), part.out.end());
        e.kids.push_back(std::move(part));
      }
      break;
  }
  return e;
}

using Bits = std::vector<bool>;

Bits approx_raw(const Term::Node& n, const Eval& e, const std::vector<Rational>& a, const Bits& sub) {
  using K = Term::Kind;
  Bits out(n.out, false);
  switch (n.kind) {
    case K::Const:
      break;
    case K::Reindex:
      for (std::size_t z = 0; z < n.out; ++z) out[z] = sub[n.u[z]];
      break;
    case K::MinRel:
      for (std::size_t z = 0; z < n.out; ++z) {
        if (e.out[z] == 0) continue;
        for (auto y : n.pre[z])
          if (a[y] == e.out[z] && sub[y]) {
            out[z] = true;
            break;
          }
      }
      break;
    case K::MaxRel:
      for (std::size_t z = 0; z < n.out; ++z) {
        if (e.out[z] == 0) continue;
        bool all = true;
        for (auto y : n.pre[z])
          if (a[y] == e.out[z] && !sub[y]) {
            all = false;
            break;
          }
        out[z] = all;
      }
      break;
    case K::Average:
      for (std::size_t z = 0; z < n.out; ++z) {
        if (e.out[z] == 0) continue;
        out[z] = std::all_of(n.dists[z].begin(), n.dists[z].end(), [&](const auto& yp) { return sub[yp.first]; });
      }
      break;
    case K::SubWeight:
      for (std::size_t i = 0; i < n.out; ++i) {
        if (!sub[i]) continue;
        const Rational d = a[i] - from_int(n.w[i]);
        out[i] = d > 0 && d <= from_int(n.k);
      }
      break;
    case K::Compose: {
      const Bits mid = approx_raw(n.parts[1].node(), e.kids[1], a, sub);
      out = approx_raw(n.parts[0].node(), e.kids[0], e.kids[1].out, mid);
      break;
    }
    case K::DisjointUnion: {
      std::size_t off = 0;
      for (std::size_t i = 0; i < n.parts.size(); ++i) {
        const Bits part = approx_raw(n.parts[i].node(), e.kids[i], a, sub);
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
        off += part.size();
      }
      break;
    }
  }
  return out;
}

Bits to_bits(const PositionSet& s) {
  Bits b(s.universe(), false);
  for (auto i : s.members()) b[i] = true;
  return b;
}

PositionSet from_bits(const Bits& b) {
  PositionSet s(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) s.insert(i);
  return s;
}

std::vector<Rational> values_of(const Assignment& a) { return {a.raw().begin(), a.raw().end()}; }

void require_endo(const Term& f, const Assignment& a) {
  if (f.in_size() != a.size() || f.out_size() != a.size())
    throw InvariantError("expected an endo-term over " + std::to_string(a.size()) + " positions");
}

}  // namespace

std::vector<Rational> evaluate_raw(const Term& f, const std::vector<Rational>& a, const Chain& chain) {
  return run(f.node(), a, chain).out;
}

Assignment evaluate(const Term& f, const Assignment& a, DomainPtr codomain) {
  if (f.in_size() != a.size())
    throw InvariantError("term expects " + std::to_string(f.in_size()) + " positions, assignment has " +
                         std::to_string(a.size()));
  if (!codomain) codomain = f.out_size() == a.size() ? a.domain() : Domain::indexed(f.out_size());
  return Assignment(std::move(codomain), a.chain(), evaluate_raw(f, values_of(a), a.chain()));
}

PositionSet approx(const Term& f, const Assignment& a, const PositionSet& subset) {
  if (f.in_size() != a.size() || subset.universe() != a.size())
    throw InvariantError("approx: domain mismatch");
  if (!subset.subset_of(a.support())) throw InvariantError("approx: Y' is not contained in the support of a");
  const auto av = values_of(a);
  const Eval e = run(f.node(), av, a.chain());
  return from_bits(approx_raw(f.node(), e, av, to_bits(subset)));
}

namespace {

PositionSet descend(const Term& f, const Assignment& a, const Bits& carrier) {
  const auto av = values_of(a);
  const Eval e = run(f.node(), av, a.chain());
  Bits cur = carrier;
  for (;;) {
    Bits next = approx_raw(f.node(), e, av, cur);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = next[i] && carrier[i];
    if (next == cur) return from_bits(cur);
    cur = std::move(next);
  }
}

}  // namespace

PositionSet nu_approx(const Term& f, const Assignment& a) {
  require_endo(f, a);
  if (!(evaluate(f, a) == a)) throw InvariantError("nu_approx: assignment is not a fixpoint");
  return descend(f, a, to_bits(a.support()));
}

PositionSet nu_star(const Term& f, const Assignment& a) {
  require_endo(f, a);
  const Assignment fa = evaluate(f, a);
  if (!leq(a, fa)) throw InvariantError("nu_star: assignment is not a post-fixpoint");
  Bits carrier(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) carrier[i] = a[i] != 0 && a[i] == fa[i];
  return descend(f, a, carrier);
}

Decrease decrease_to_prefixpoint(const Evaluator& f, const Assignment& a, const PositionSet& subset,
                                 const std::vector<Rational>& extra) {
  if (subset.empty()) throw InvariantError("decrease_to_prefixpoint: empty set");
  if (!subset.subset_of(a.support())) throw InvariantError("decrease_to_prefixpoint: set leaves the support");
  const Chain& chain = a.chain();
  const Rational delta_a = a.min_nonzero()->rational();

  std::vector<Rational> order;
  std::set<Rational> seen;
  auto push = [&](const Rational& q) {
    if (q > 0 && chain.contains(q) && seen.insert(q).second) order.push_back(q);
  };
  {
    std::vector<Rational> ex = extra;
    std::sort(ex.begin(), ex.end(), std::greater<>());
    for (const auto& q : ex) push(q);
  }
  std::vector<Rational> generic;
  if (chain.is_finite()) {
    for (auto d = to_int64(delta_a); d >= 1; --d) generic.push_back(from_int(d));
  } else {
    std::set<Rational> vals(a.raw().begin(), a.raw().end());
    generic.push_back(delta_a);
    for (auto i = vals.begin(); i != vals.end(); ++i)
      for (auto j = std::next(i); j != vals.end(); ++j) generic.push_back(*j - *i);
    std::sort(generic.begin(), generic.end(), std::greater<>());
  }
  for (const auto& q : generic) push(q);

  auto attempt = [&](const Rational& q) -> std::optional<Decrease> {
    const Value delta(chain, q);
    Assignment next = decrease(a, subset, delta);
    if (next == a) return std::nullopt;
    if (!leq(f(next), next)) return std::nullopt;
    return Decrease{std::move(next), delta};
  };
  for (const auto& q : order)
    if (auto r = attempt(q)) return *r;
  if (chain.is_unit()) {
    Rational q = *std::min_element(order.begin(), order.end());
    for (int i = 0; i < 64; ++i) {
      q /= 2;
      if (auto r = attempt(q)) return *r;
    }
  }
  throw SoundnessError("no valid decrease found below a fixpoint with a non-empty vicious set");
}

Decrease decrease_to_prefixpoint(const Term& f, const Assignment& a, const PositionSet& subset,
                                 const std::vector<Rational>& extra) {
  require_endo(f, a);
  return decrease_to_prefixpoint([&](const Assignment& x) { return evaluate(f, x); }, a, subset, extra);
}

KleeneResult kleene_solve(const Term& f, DomainPtr domain, const Chain& chain) {
  if (!chain.is_finite()) throw InvariantError("kleene_solve requires a finite chain");
  if (f.in_size() != domain->size() || f.out_size() != domain->size())
    throw InvariantError("kleene_solve: term is not an endo-term over the domain");
  std::vector<Rational> cur(domain->size(), Rational(0));
  std::size_t steps = 0;
  for (;;) {
    auto next = evaluate_raw(f, cur, chain);
    if (next == cur) break;
    cur = std::move(next);
    ++steps;
  }
  return {Assignment(std::move(domain), chain, std::move(cur)), steps};
}

}  // namespace gsi

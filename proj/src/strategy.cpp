#include "gsi/strategy.hpp"

#include "gsi/errors.hpp"

#include <set>

namespace gsi {

namespace {

Term flatten(const std::vector<std::vector<Term>>& options) {
  std::vector<Term> parts;
  for (const auto& opts : options) parts.insert(parts.end(), opts.begin(), opts.end());
  return Term::disjoint_union(std::move(parts));
}

}  // namespace

Decomposition::Decomposition(DecompositionKind kind, DomainPtr domain, Chain chain,
                             std::vector<std::vector<Term>> options, std::vector<std::vector<std::string>> labels)
    : kind_(kind), domain_(std::move(domain)), chain_(chain), options_(std::move(options)), labels_(std::move(labels)),
      all_options_(options_.empty() ? Term::constant(0, {}) : flatten(options_)) {
  const std::size_t n = domain_->size();
  if (options_.size() != n) throw InvariantError("decomposition must list options for every position");
  for (std::size_t y = 0; y < n; ++y) {
    if (options_[y].empty()) throw InvariantError("no options at position '" + domain_->name(y) + "'");
    for (const auto& h : options_[y])
      if (h.in_size() != n || h.out_size() != 1)
        throw InvariantError("option at '" + domain_->name(y) + "' is not a term M^Y -> M");
  }
  if (labels_.empty()) {
    labels_.resize(n);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t i = 0; i < options_[y].size(); ++i) labels_[y].push_back(std::to_string(i));
  }
  if (labels_.size() != n) throw InvariantError("decomposition labels do not match positions");
  for (std::size_t y = 0; y < n; ++y)
    if (labels_[y].size() != options_[y].size()) throw InvariantError("decomposition labels do not match options");
}

std::vector<std::vector<Rational>> Decomposition::option_values(const Assignment& a) const {
  if (a.size() != size() || a.chain() != chain_) throw InvariantError("assignment does not match the decomposition");
  std::vector<std::vector<Rational>> out(size());
  if (size() == 0) return out;
  const auto flat = evaluate_raw(all_options_, {a.raw().begin(), a.raw().end()}, chain_);
  std::size_t off = 0;
  for (std::size_t y = 0; y < size(); ++y) {
    out[y].assign(flat.begin() + static_cast<std::ptrdiff_t>(off),
                  flat.begin() + static_cast<std::ptrdiff_t>(off + options_[y].size()));
    off += options_[y].size();
  }
  return out;
}

std::size_t Decomposition::strategy_count(std::size_t cap) const {
  BigInt total = 1;
  for (const auto& o : options_) total *= static_cast<unsigned long>(o.size());
  if (total > static_cast<unsigned long>(cap))
    throw CapacityError("strategy space of size " + total.get_str() + " exceeds the limit " + std::to_string(cap));
  return total.get_ui();
}

void Decomposition::check(const Strategy& c) const {
  if (c.size() != size()) throw InvariantError("strategy does not cover every position");
  for (std::size_t y = 0; y < size(); ++y)
    if (c[y] >= options_[y].size())
      throw InvariantError("strategy choice " + std::to_string(c[y]) + " out of range at '" + domain_->name(y) + "'");
}

Term induced_function(const Decomposition& dec) {
  const std::size_t n = dec.size();
  std::vector<Term> parts;
  std::vector<std::vector<std::size_t>> pre(n);
  for (std::size_t y = 0; y < n; ++y)
    for (const auto& h : dec.options(y)) {
      pre[y].push_back(parts.size());
      parts.push_back(h);
    }
  if (parts.empty()) return Term::constant(0, {});
  const std::size_t m = parts.size();
  Term select = dec.kind() == DecompositionKind::Min ? Term::min_rel(m, std::move(pre)) : Term::max_rel(m, std::move(pre));
  return Term::compose(std::move(select), Term::disjoint_union(std::move(parts)));
}

Term restrict(const Decomposition& dec, const Strategy& c) {
  dec.check(c);
  if (dec.size() == 0) return Term::constant(0, {});
  std::vector<Term> parts;
  for (std::size_t y = 0; y < dec.size(); ++y) parts.push_back(dec.options(y)[c[y]]);
  return Term::disjoint_union(std::move(parts));
}

namespace {

bool better(DecompositionKind kind, const Rational& x, const Rational& y) {
  return kind == DecompositionKind::Min ? x < y : x > y;
}

std::size_t best_index(DecompositionKind kind, const std::vector<Rational>& vals, TieBreak tie = TieBreak::Lowest) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (better(kind, vals[i], vals[best]) || (tie == TieBreak::Highest && vals[i] == vals[best])) best = i;
  return best;
}

void require_fixpoint_of_restriction(const Decomposition& dec, const Strategy& c, const Assignment& mu,
                                     const std::vector<std::vector<Rational>>& vals) {
  dec.check(c);
  for (std::size_t y = 0; y < dec.size(); ++y)
    if (vals[y][c[y]] != mu[y]) throw InvariantError("assignment is not a fixpoint of the restricted function");
}

// Stable improvement for either kind: changes only where the best option is
// strictly better than mu.
std::optional<Strategy> stable_improve(const Decomposition& dec, const Strategy& c, const Assignment& mu,
                                       DecompositionKind expected) {
  if (dec.kind() != expected) throw InvariantError("improvement called on a decomposition of the wrong kind");
  const auto vals = dec.option_values(mu);
  require_fixpoint_of_restriction(dec, c, mu, vals);
  Strategy next = c;
  bool changed = false;
  for (std::size_t y = 0; y < dec.size(); ++y) {
    const std::size_t b = best_index(dec.kind(), vals[y]);
    if (better(dec.kind(), vals[y][b], mu[y])) {
      next[y] = b;
      changed = true;
    }
  }
  if (!changed) return std::nullopt;
  return next;
}

}  // namespace

std::optional<Strategy> min_improve(const Decomposition& dec, const Strategy& c, const Assignment& mu) {
  return stable_improve(dec, c, mu, DecompositionKind::Min);
}

std::optional<Strategy> max_improve_stable(const Decomposition& dec, const Strategy& c, const Assignment& mu) {
  return stable_improve(dec, c, mu, DecompositionKind::Max);
}

std::optional<Strategy> improve_plain(const Decomposition& dec, const Strategy& c, const Assignment& mu, TieBreak tie) {
  const auto vals = dec.option_values(mu);
  require_fixpoint_of_restriction(dec, c, mu, vals);
  bool improvable = false;
  Strategy next(dec.size());
  for (std::size_t y = 0; y < dec.size(); ++y) {
    next[y] = best_index(dec.kind(), vals[y], tie);
    if (better(dec.kind(), vals[y][next[y]], mu[y])) improvable = true;
  }
  if (!improvable) return std::nullopt;
  return next;
}

Strategy best_response(const Decomposition& dec, const Assignment& a) {
  const auto vals = dec.option_values(a);
  Strategy c(dec.size());
  for (std::size_t y = 0; y < dec.size(); ++y) c[y] = best_index(dec.kind(), vals[y]);
  return c;
}

std::size_t SolveResult::skips() const {
  std::size_t n = 0;
  for (const auto& e : trace) n += e.event == TraceEvent::Skip;
  return n;
}

namespace {

Assignment solve_checked(const Decomposition& dec, const InnerSolver& solver, const Strategy& c, Term& fc) {
  fc = restrict(dec, c);
  Assignment mu = solver(c, fc);
  if (mu.size() != dec.size() || mu.chain() != dec.chain())
    throw SoundnessError("inner solver returned an assignment of the wrong shape");
  if (!(evaluate(fc, mu) == mu)) throw SoundnessError("inner solver returned a non-fixpoint: " + to_string(mu));
  return mu;
}

Strategy initial_strategy(const Decomposition& dec, const std::optional<Strategy>& initial) {
  Strategy c = initial ? *initial : Strategy(dec.size(), 0);
  dec.check(c);
  return c;
}

}  // namespace

SolveResult si_above(const Decomposition& dec, const InnerSolver& solver, const AboveOptions& opts) {
  if (dec.kind() != DecompositionKind::Min) throw InvariantError("si_above needs a min-decomposition");
  const Term f = induced_function(dec);
  Strategy c = initial_strategy(dec, opts.initial);
  std::set<Strategy> visited;
  std::vector<TraceEntry> trace;
  Term fc = f;
  for (;;) {
    if (!visited.insert(c).second) throw SoundnessError("strategy iteration revisited a strategy");
    Assignment mu = solve_checked(dec, solver, c, fc);
    if (auto next = min_improve(dec, c, mu)) {
      trace.push_back({trace.size(), c, mu, TraceEvent::Improve, {}, {}});
      c = std::move(*next);
      continue;
    }
    PositionSet vic = opts.vicious ? opts.vicious(mu) : nu_approx(f, mu);
    if (vic.empty()) {
      trace.push_back({trace.size(), c, mu, TraceEvent::Stop, {}, {}});
      return {std::move(mu), std::move(c), std::move(trace)};
    }
    const std::vector<Rational> extra = opts.extra_deltas ? opts.extra_deltas(mu, vic) : std::vector<Rational>{};
    Decrease d = decrease_to_prefixpoint(f, mu, vic, extra);
    trace.push_back({trace.size(), c, mu, TraceEvent::Skip, vic, d.delta.rational()});
    c = best_response(dec, d.result);
  }
}

SolveResult si_below(const Decomposition& dec, const InnerSolver& solver, std::optional<Strategy> initial) {
  if (dec.kind() != DecompositionKind::Max) throw InvariantError("si_below needs a max-decomposition");
  Strategy c = initial_strategy(dec, initial);
  std::set<Strategy> visited;
  std::vector<TraceEntry> trace;
  Term fc = Term::constant(0, {});
  for (;;) {
    if (!visited.insert(c).second) throw SoundnessError("strategy iteration revisited a strategy");
    Assignment mu = solve_checked(dec, solver, c, fc);
    auto next = max_improve_stable(dec, c, mu);
    if (!next) {
      trace.push_back({trace.size(), c, mu, TraceEvent::Stop, {}, {}});
      return {std::move(mu), std::move(c), std::move(trace)};
    }
    trace.push_back({trace.size(), c, mu, TraceEvent::Improve, {}, {}});
    c = std::move(*next);
  }
}

Assignment brute_force_mu(const Decomposition& dec, const InnerSolver& solver, std::size_t cap) {
  dec.strategy_count(cap);
  Strategy c(dec.size(), 0);
  std::optional<Assignment> acc;
  Term fc = Term::constant(0, {});
  for (;;) {
    Assignment mu = solve_checked(dec, solver, c, fc);
    if (!acc)
      acc = std::move(mu);
    else
      acc = dec.kind() == DecompositionKind::Min ? pointwise_meet(*acc, mu) : pointwise_join(*acc, mu);
    std::size_t y = 0;
    while (y < dec.size() && ++c[y] == dec.options(y).size()) c[y++] = 0;
    if (y == dec.size()) break;
  }
  return *acc;
}

Strategy recover_min_strategy(const Decomposition& dec, const Assignment& mu) {
  if (dec.kind() != DecompositionKind::Min) throw InvariantError("recover_min_strategy needs a min-decomposition");
  if (!(evaluate(induced_function(dec), mu) == mu)) throw InvariantError("recover_min_strategy: not a fixpoint");
  return best_response(dec, mu);
}

std::string to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::Improve: return "improve";
    case TraceEvent::Skip: return "skip";
    case TraceEvent::Stop: return "stop";
  }
  return "?";
}

std::string describe_strategy(const Decomposition& dec, const Strategy& c) {
  std::string out;
  for (std::size_t y = 0; y < dec.size(); ++y) {
    if (dec.options(y).size() < 2) continue;
    if (!out.empty()) out += ", ";
    out += dec.domain()->name(y) + "->" + dec.label(y, c[y]);
  }
  return out;
}

}  // namespace gsi

#pragma once

// Min/max-decompositions, strategies and the two strategy iteration loops
// (from above with vicious-cycle skips, and from below).

#include "gsi/mv.hpp"
#include "gsi/nonexp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gsi {

enum class DecompositionKind { Min, Max };

// Strategy: one option index per position.
using Strategy = std::vector<std::size_t>;

class Decomposition {
public:
  // options[y] lists terms M^Y -> M^{y}; labels[y] (optional) names them.
  Decomposition(DecompositionKind kind, DomainPtr domain, Chain chain, std::vector<std::vector<Term>> options,
                std::vector<std::vector<std::string>> labels = {});

  DecompositionKind kind() const noexcept { return kind_; }
  const DomainPtr& domain() const noexcept { return domain_; }
  const Chain& chain() const noexcept { return chain_; }
  std::size_t size() const noexcept { return options_.size(); }
  const std::vector<Term>& options(std::size_t y) const { return options_.at(y); }
  const std::string& label(std::size_t y, std::size_t i) const { return labels_.at(y).at(i); }

  // Values h(a) of every option, grouped per position.
  std::vector<std::vector<Rational>> option_values(const Assignment& a) const;
  // Number of strategies; throws CapacityError beyond `cap`.
  std::size_t strategy_count(std::size_t cap) const;
  void check(const Strategy& c) const;

private:
  DecompositionKind kind_;
  DomainPtr domain_;
  Chain chain_;
  std::vector<std::vector<Term>> options_;
  std::vector<std::vector<std::string>> labels_;
  Term all_options_;
};

// f(a)(y) = min (or max) over the options at y.
Term induced_function(const Decomposition& dec);
// f_C(a)(y) = C(y)(a)
Term restrict(const Decomposition& dec, const Strategy& c);

// Stable improvements; absent when mu is already a fixpoint of the induced f.
std::optional<Strategy> min_improve(const Decomposition& dec, const Strategy& c, const Assignment& mu);
std::optional<Strategy> max_improve_stable(const Decomposition& dec, const Strategy& c, const Assignment& mu);

enum class TieBreak { Lowest, Highest };
// Non-stable improvement: best option everywhere, ties broken by `tie`.
std::optional<Strategy> improve_plain(const Decomposition& dec, const Strategy& c, const Assignment& mu, TieBreak tie);

// argmin (Min) / argmax (Max) option at a, lowest index on ties.
Strategy best_response(const Decomposition& dec, const Assignment& a);

// Computes mu f_C for a fixed strategy; gets C and the term f_C.
using InnerSolver = std::function<Assignment(const Strategy&, const Term&)>;

enum class TraceEvent { Improve, Skip, Stop };

struct TraceEntry {
  std::size_t index = 0;
  Strategy strategy;
  Assignment values;
  TraceEvent event = TraceEvent::Stop;
  PositionSet vicious;          // Skip only
  std::optional<Rational> delta;  // Skip only
};

struct SolveResult {
  Assignment values;
  Strategy strategy;
  std::vector<TraceEntry> trace;
  std::size_t inner_solves() const { return trace.size(); }
  std::size_t skips() const;
};

struct AboveOptions {
  std::optional<Strategy> initial;
  // Replaces nu_approx on the induced function; gets a fixpoint of f.
  std::function<PositionSet(const Assignment&)> vicious;
  // Extra decrease candidates for the skip step.
  std::function<std::vector<Rational>(const Assignment&, const PositionSet&)> extra_deltas;
};

SolveResult si_above(const Decomposition& dec, const InnerSolver& solver, const AboveOptions& opts = {});
SolveResult si_below(const Decomposition& dec, const InnerSolver& solver, std::optional<Strategy> initial = {});

// Pointwise min (Min) / max (Max) of mu f_C over every strategy.
Assignment brute_force_mu(const Decomposition& dec, const InnerSolver& solver, std::size_t cap = 100000);

// argmin option at mu = mu f; satisfies mu f_C = mu f.
Strategy recover_min_strategy(const Decomposition& dec, const Assignment& mu);

std::string to_string(TraceEvent e);
std::string describe_strategy(const Decomposition& dec, const Strategy& c);

}  // namespace gsi

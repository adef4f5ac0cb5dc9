#pragma once

// Behavioural distance on probabilistic automata: Kantorovich and Hausdorff
// liftings, the function M, coupling structures and iteration from above.

#include "gsi/lp.hpp"
#include "gsi/mv.hpp"
#include "gsi/nonexp.hpp"
#include "gsi/strategy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsi {

struct PaState {
  std::string name;
  std::string label;
  std::vector<Distribution> dists;  // over state indices
};

class Pa {
public:
  explicit Pa(std::vector<PaState> states);

  std::size_t size() const noexcept { return states_.size(); }
  const PaState& state(std::size_t s) const { return states_.at(s); }
  const std::vector<PaState>& states() const noexcept { return states_; }
  const DomainPtr& domain() const noexcept { return domain_; }
  // Positions of S x S, named "(s,t)", index s * size() + t.
  const DomainPtr& pairs() const noexcept { return pairs_; }
  std::size_t pair(std::size_t s, std::size_t t) const { return s * size() + t; }
  bool same_label(std::size_t s, std::size_t t) const { return states_[s].label == states_[t].label; }

private:
  std::vector<PaState> states_;
  DomainPtr domain_;
  DomainPtr pairs_;
};

// kvals[i][j] for X = {x_i}, X' = {x'_j}; both non-empty.
Rational hausdorff(const std::vector<std::vector<Rational>>& kvals);

// Kantorovich lifting of d (over pairs of states) between two distributions.
TransportResult kantorovich(const Pa& pa, const Assignment& d, const Distribution& b, const Distribution& b2);

Assignment m_eval(const Pa& pa, const Assignment& d);

// Choice for one label-equal pair (s,t): a set-coupling of delta(s) and
// delta(t) (pairs of distribution indices) with one vertex plan per element.
struct PairCoupling {
  std::vector<std::pair<std::size_t, std::size_t>> relation;
  std::vector<TransportPlan> plans;

  friend bool operator==(const PairCoupling& x, const PairCoupling& y);
};

// Indexed by pair position; empty on label mismatch.
using CouplingStructure = std::vector<std::optional<PairCoupling>>;

std::string describe(const Pa& pa, const CouplingStructure& c);

// h_{R,f} as a term over S x S, and M_C.
Term coupling_option_term(const Pa& pa, const PairCoupling& pc);
Term coupling_term(const Pa& pa, const CouplingStructure& c);
Assignment m_c_eval(const Pa& pa, const CouplingStructure& c, const Assignment& d);

// Optimal minimal set-couplings with optimal vertex plans at d, everywhere.
CouplingStructure best_coupling(const Pa& pa, const Assignment& d);
// Stable improvement at the fixpoint d of M_C; absent when M(d) = d.
std::optional<CouplingStructure> improve_coupling(const Pa& pa, const CouplingStructure& c, const Assignment& d);

// mu M_C by linear programming.
Assignment solve_fixed_coupling(const Pa& pa, const CouplingStructure& c);

// Greatest fixpoint of the approximation of M at its fixpoint d.
PositionSet pa_vicious(const Pa& pa, const Assignment& d);

struct PaTraceEntry {
  std::size_t index = 0;
  Assignment values;
  TraceEvent event = TraceEvent::Stop;
  PositionSet vicious;
  std::optional<Rational> delta;
};

struct PaResult {
  Assignment values;
  CouplingStructure coupling;
  std::vector<PaTraceEntry> trace;
};

PaResult solve_pa_above(const Pa& pa);

// Explicit min-decomposition of M: every minimal set-coupling combined with
// every vertex plan. For small automata only.
struct PaDecomposition {
  Decomposition dec;
  std::vector<std::vector<std::optional<PairCoupling>>> choices;  // per pair position
  CouplingStructure structure(const Strategy& c) const;
};
PaDecomposition enumerate_pa_decomposition(const Pa& pa, std::size_t cap = 100000);

// Vertices of the coupling polytope of two distributions.
std::vector<TransportPlan> transport_vertices(const Distribution& b, const Distribution& b2);
// Minimal set-couplings of {0..m-1} and {0..n-1}.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> minimal_set_couplings(std::size_t m, std::size_t n);

}  // namespace gsi

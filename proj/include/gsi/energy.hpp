#pragma once

// Energy games: the function E over {0..k}, the finite-value transformation,
// and the four solvers.

#include "gsi/mv.hpp"
#include "gsi/nonexp.hpp"
#include "gsi/strategy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gsi {

struct EnergyEdge {
  std::size_t from;
  std::size_t to;
  std::int64_t w;
};

class EnergyGame {
public:
  // owner[v] is 0 or 1. Every state needs an outgoing edge.
  EnergyGame(std::vector<std::string> names, std::vector<int> owner, std::vector<EnergyEdge> edges);

  std::size_t size() const noexcept { return owner_.size(); }
  const DomainPtr& domain() const noexcept { return domain_; }
  const std::string& name(std::size_t v) const { return domain_->name(v); }
  int owner(std::size_t v) const { return owner_.at(v); }
  const std::vector<int>& owners() const noexcept { return owner_; }
  const std::vector<EnergyEdge>& edges() const noexcept { return edges_; }
  // Indices into edges(), in edge order.
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_.at(v); }
  std::int64_t max_abs_weight() const;

private:
  DomainPtr domain_;
  std::vector<int> owner_;
  std::vector<EnergyEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
};

// Minimal initial energy per state; nullopt is infinity.
struct ExtendedSolution {
  DomainPtr domain;
  std::vector<std::optional<std::int64_t>> values;

  friend bool operator==(const ExtendedSolution& x, const ExtendedSolution& y) { return x.values == y.values; }
};

std::string to_string(const std::optional<std::int64_t>& v);
std::string to_string(const ExtendedSolution& s);

// E(a)(v) = min/max over edges (v,v') of a(v') (-)_Z w(v,v').
Term energy_term(const EnergyGame& g, std::int64_t k);

// One option per edge of a Player-0 state (Min) or Player-1 state (Max).
Decomposition energy_min_decomposition(const EnergyGame& g, std::int64_t k);
Decomposition energy_max_decomposition(const EnergyGame& g, std::int64_t k);

struct FiniteTransform {
  EnergyGame game;
  std::vector<bool> removed;            // over original states
  std::vector<std::size_t> to_new;      // original -> transformed index (npos if removed)
  std::size_t sink;                     // index in the transformed game
  std::int64_t k;
  std::int64_t threshold;
  DomainPtr original;
};

FiniteTransform transform_finite(const EnergyGame& g);
ExtendedSolution reconstruct(const Assignment& solution, const FiniteTransform& t);

// Minimal-raise worklist iteration; `raises` counts value updates.
struct ValueIterationResult {
  Assignment value;
  std::size_t raises = 0;
};
ValueIterationResult value_iteration(const EnergyGame& g, std::int64_t k);

// Game restricted to the chosen edges of one player.
EnergyGame restrict_game(const EnergyGame& g, const Decomposition& dec, const Strategy& c);

// The approximation of E at a fixpoint a, in closed form.
PositionSet energy_vicious(const EnergyGame& g, std::int64_t k, const Assignment& a);
// Decrease candidate for skipping the fixpoint a.
Rational energy_delta(const EnergyGame& g, const Assignment& a);

struct EnergyRun {
  ExtendedSolution solution;
  FiniteTransform transform;
  std::optional<SolveResult> si;  // strategy iteration only
  std::size_t iterations = 0;     // Kleene steps, raises, or inner solves
};

EnergyRun solve_energy_kleene(const EnergyGame& g);
EnergyRun solve_energy_vi(const EnergyGame& g);
EnergyRun solve_energy_above(const EnergyGame& g);
EnergyRun solve_energy_below(const EnergyGame& g);

// Chosen successor per state of the given player, by name, for display.
std::string describe_energy_strategy(const FiniteTransform& t, const Decomposition& dec, const Strategy& c);

}  // namespace gsi

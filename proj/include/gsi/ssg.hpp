#pragma once

// Simple stochastic games over [0,1].

#include "gsi/mv.hpp"
#include "gsi/nonexp.hpp"
#include "gsi/strategy.hpp"

#include <string>
#include <vector>

namespace gsi {

enum class SsgKind { Min, Max, Average, Sink };

struct SsgState {
  std::string name;
  SsgKind kind;
  std::vector<std::size_t> succ;  // Min, Max
  Distribution dist;              // Average
  Rational payoff;                // Sink
};

class Ssg {
public:
  explicit Ssg(std::vector<SsgState> states);

  std::size_t size() const noexcept { return states_.size(); }
  const SsgState& state(std::size_t v) const { return states_.at(v); }
  const std::vector<SsgState>& states() const noexcept { return states_; }
  const DomainPtr& domain() const noexcept { return domain_; }

private:
  std::vector<SsgState> states_;
  DomainPtr domain_;
};

// V : [0,1]^V -> [0,1]^V
Term value_term(const Ssg& g);
// Min (Max) states get one option per successor, everything else one option.
Decomposition min_decomposition(const Ssg& g);
Decomposition max_decomposition(const Ssg& g);

// mu V_C by linear programming; C indexes the respective decomposition.
Assignment solve_fixed_min_strategy(const Ssg& g, const Strategy& c);
Assignment solve_fixed_max_strategy(const Ssg& g, const Strategy& c);
// States from which Min can keep the play away from sinks forever while Max
// follows the max-strategy C.
PositionSet forced_nontermination(const Ssg& g, const Strategy& c);

SolveResult solve_ssg_above(const Ssg& g, const AboveOptions& opts = {});
SolveResult solve_ssg_below(const Ssg& g, std::optional<Strategy> initial = {});

}  // namespace gsi

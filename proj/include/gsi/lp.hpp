#pragma once

// Exact linear programming (two-phase primal simplex, Bland's rule) and
// discrete optimal transport on top of it.

#include "gsi/mv.hpp"
#include "gsi/rational.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsi {

class LpInfeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class LpUnbounded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Relation { LessEq, Eq, GreaterEq };

using LinearRow = std::vector<std::pair<std::size_t, Rational>>;

// minimize c.x subject to rows and lo <= x <= hi.
class LinearProgram {
public:
  std::size_t add_variable(std::string name, Rational lo = 0, std::optional<Rational> hi = std::nullopt,
                           Rational cost = 0);
  void set_cost(std::size_t var, Rational cost);
  void add_constraint(LinearRow row, Relation rel, Rational rhs);

  std::size_t num_variables() const noexcept { return names_.size(); }
  std::size_t num_constraints() const noexcept { return rows_.size(); }
  const std::string& name(std::size_t var) const { return names_.at(var); }

  // Exact check of every constraint and bound.
  bool satisfied_by(const std::vector<Rational>& x) const;

  struct Constraint {
    LinearRow row;
    Relation rel;
    Rational rhs;
  };
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  const std::vector<Rational>& costs() const noexcept { return cost_; }
  const std::vector<Rational>& lower() const noexcept { return lo_; }
  const std::vector<std::optional<Rational>>& upper() const noexcept { return hi_; }

private:
  std::vector<std::string> names_;
  std::vector<Rational> cost_;
  std::vector<Rational> lo_;
  std::vector<std::optional<Rational>> hi_;
  std::vector<Constraint> rows_;
};

struct LpSolution {
  Rational optimum;
  std::vector<Rational> x;  // a basic optimal solution
};

// Throws LpInfeasible / LpUnbounded.
LpSolution solve_min(const LinearProgram& lp);

struct TransportPlan {
  struct Cell {
    std::size_t from;
    std::size_t to;
    Rational mass;
  };
  std::vector<Cell> cells;  // positive masses only
};

struct TransportResult {
  Rational value;
  TransportPlan plan;
};

using CostFn = std::function<Rational(std::size_t, std::size_t)>;

// min over couplings w of (beta, beta2) of sum cost(u,v) w(u,v); the plan is a
// vertex of the coupling polytope.
TransportResult transport(const CostFn& cost, const Distribution& beta, const Distribution& beta2);

}  // namespace gsi

#include "gsi/lp.hpp"

#include "gsi/errors.hpp"

#include <map>

namespace gsi {

std::size_t LinearProgram::add_variable(std::string name, Rational lo, std::optional<Rational> hi, Rational cost) {
  if (hi && *hi < lo) throw InvariantError("variable '" + name + "' has an empty range");
  names_.push_back(std::move(name));
  lo_.push_back(std::move(lo));
  hi_.push_back(std::move(hi));
  cost_.push_back(std::move(cost));
  return names_.size() - 1;
}

void LinearProgram::set_cost(std::size_t var, Rational cost) { cost_.at(var) = std::move(cost); }

void LinearProgram::add_constraint(LinearRow row, Relation rel, Rational rhs) {
  for (const auto& [j, c] : row)
    if (j >= names_.size()) throw InvariantError("constraint refers to unknown variable " + std::to_string(j));
  rows_.push_back({std::move(row), rel, std::move(rhs)});
}

bool LinearProgram::satisfied_by(const std::vector<Rational>& x) const {
  if (x.size() != names_.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lo_[j]) return false;
    if (hi_[j] && x[j] > *hi_[j]) return false;
  }
  for (const auto& c : rows_) {
    Rational s = 0;
    for (const auto& [j, a] : c.row) s += a * x[j];
    switch (c.rel) {
      case Relation::LessEq:
        if (s > c.rhs) return false;
        break;
      case Relation::Eq:
        if (s != c.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (s < c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

class Tableau {
public:
  std::vector<std::vector<Rational>> t;  // rows x (cols + 1), last column is the rhs
  std::vector<std::size_t> basis;
  std::vector<Rational> reduced;  // reduced costs, size cols
  std::vector<bool> allowed;      // columns that may enter
  std::size_t cols = 0;

  void price(const std::vector<Rational>& cost) {
    reduced = cost;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Rational& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (t[i][j] != 0) reduced[j] -= cb * t[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || t[i][c] == 0) continue;
      const Rational f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j)
        if (t[r][j] != 0) t[i][j] -= f * t[r][j];
    }
    if (reduced[c] != 0) {
      const Rational f = reduced[c];
      for (std::size_t j = 0; j < cols; ++j)
        if (t[r][j] != 0) reduced[j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Bland's rule; returns false when unbounded.
  bool optimize() {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j)
        if (allowed[j] && reduced[j] < 0) {
          enter = j;
          break;
        }
      if (enter == cols) return true;
      std::size_t leave = t.size();
      Rational best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i][enter] <= 0) continue;
        Rational ratio = t[i][cols] / t[i][enter];
        if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == t.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution solve_min(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> coeffs;
    Relation rel;
    Rational rhs;
  };
  std::vector<Row> rows;
  for (const auto& c : lp.constraints()) {
    std::map<std::size_t, Rational> merged;
    Rational rhs = c.rhs;
    for (const auto& [j, a] : c.row) {
      merged[j] += a;
      rhs -= a * lp.lower()[j];
    }
    Row r{{}, c.rel, rhs};
    for (auto& [j, a] : merged)
      if (a != 0) r.coeffs.emplace_back(j, a);
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (lp.upper()[j]) rows.push_back({{{j, Rational(1)}}, Relation::LessEq, *lp.upper()[j] - lp.lower()[j]});
  for (auto& r : rows)
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      for (auto& [j, a] : r.coeffs) a = -a;
      if (r.rel != Relation::Eq) r.rel = r.rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
    }

  std::size_t slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::Eq) ++slacks;
    if (r.rel != Relation::LessEq) ++artificials;
  }
  Tableau tab;
  tab.cols = n + slacks + artificials;
  const std::size_t first_art = n + slacks;
  tab.t.assign(rows.size(), std::vector<Rational>(tab.cols + 1));
  tab.basis.resize(rows.size());
  std::size_t s = n, art = first_art;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, a] : rows[i].coeffs) tab.t[i][j] = a;
    tab.t[i][tab.cols] = rows[i].rhs;
    if (rows[i].rel == Relation::LessEq) {
      tab.t[i][s] = 1;
      tab.basis[i] = s++;
    } else {
      if (rows[i].rel == Relation::GreaterEq) tab.t[i][s++] = -1;
      tab.t[i][art] = 1;
      tab.basis[i] = art++;
    }
  }

  tab.allowed.assign(tab.cols, true);
  if (artificials > 0) {
    std::vector<Rational> phase1(tab.cols);
    for (std::size_t j = first_art; j < tab.cols; ++j) phase1[j] = 1;
    tab.price(phase1);
    if (!tab.optimize()) throw SoundnessError("phase one of the simplex method is unbounded");
    Rational infeas = 0;
    for (std::size_t i = 0; i < tab.t.size(); ++i)
      if (tab.basis[i] >= first_art) infeas += tab.t[i][tab.cols];
    if (infeas != 0) throw LpInfeasible("linear program is infeasible");
    for (std::size_t i = 0; i < tab.t.size();) {
      if (tab.basis[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t j = 0;
      while (j < first_art && tab.t[i][j] == 0) ++j;
      if (j < first_art) {
        tab.pivot(i, j);
        ++i;
      } else {
        tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
        tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (std::size_t j = first_art; j < tab.cols; ++j) tab.allowed[j] = false;
  }

  std::vector<Rational> cost(tab.cols);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.costs()[j];
  tab.price(cost);
  if (!tab.optimize()) throw LpUnbounded("linear program is unbounded");

  LpSolution sol{0, std::vector<Rational>(lp.lower().begin(), lp.lower().end())};
  for (std::size_t i = 0; i < tab.t.size(); ++i)
    if (tab.basis[i] < n) sol.x[tab.basis[i]] += tab.t[i][tab.cols];
  for (std::size_t j = 0; j < n; ++j) sol.optimum += lp.costs()[j] * sol.x[j];
  if (!lp.satisfied_by(sol.x)) throw SoundnessError("simplex returned a point violating the constraints");
  return sol;
}

namespace {

void check_distribution(const Distribution& d, const char* which) {
  Rational total = 0;
  std::map<std::size_t, bool> seen;
  for (const auto& [u, p] : d) {
    if (p <= 0) throw InvariantError(std::string(which) + ": non-positive mass");
    if (seen[u]) throw InvariantError(std::string(which) + ": repeated support element");
    seen[u] = true;
    total += p;
  }
  if (total != 1) throw InvariantError(std::string(which) + ": masses sum to " + to_string(total) + ", not 1");
}

}  // namespace

TransportResult transport(const CostFn& cost, const Distribution& beta, const Distribution& beta2) {
  check_distribution(beta, "transport source");
  check_distribution(beta2, "transport target");
  LinearProgram lp;
  const std::size_t m = beta.size(), k = beta2.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      lp.add_variable("w", 0, std::nullopt, cost(beta[i].first, beta2[j].first));
  for (std::size_t i = 0; i < m; ++i) {
    LinearRow row;
    for (std::size_t j = 0; j < k; ++j) row.emplace_back(i * k + j, 1);
    lp.add_constraint(std::move(row), Relation::Eq, beta[i].second);
  }
  for (std::size_t j = 0; j < k; ++j) {
    LinearRow row;
    for (std::size_t i = 0; i < m; ++i) row.emplace_back(i * k + j, 1);
    lp.add_constraint(std::move(row), Relation::Eq, beta2[j].second);
  }
  LpSolution sol = solve_min(lp);
  TransportResult res{sol.optimum, {}};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sol.x[i * k + j] != 0) res.plan.cells.push_back({beta[i].first, beta2[j].first, sol.x[i * k + j]});
  return res;
}

}  // namespace gsi

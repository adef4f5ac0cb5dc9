#pragma once

// Non-expansive functions M^Y -> M^Z built from a fixed set of combinators,
// with evaluation and the a-approximation f#a.
//
// Positions are dense indices 0..in_size()-1 and 0..out_size()-1. Terms are
// immutable and cheap to copy.

#include "gsi/mv.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace gsi {

class Term {
public:
  enum class Kind { Const, Reindex, MinRel, MaxRel, Average, SubWeight, Compose, DisjointUnion };

  // z -> values[z]; values must lie in the chain of the argument.
  static Term constant(std::size_t in_size, std::vector<Rational> values);
  // z -> a(u[z])
  static Term reindex(std::size_t in_size, std::vector<std::size_t> u);
  // z -> min { a(y) | y in preimages[z] }; every preimage non-empty.
  static Term min_rel(std::size_t in_size, std::vector<std::vector<std::size_t>> preimages);
  static Term max_rel(std::size_t in_size, std::vector<std::vector<std::size_t>> preimages);
  // z -> sum_y p_z(y) a(y). Unit interval only.
  static Term average(std::size_t in_size, std::vector<Distribution> dists);
  // e -> min(max(a(e) - w(e), 0), k). Finite chain {0..k} only.
  static Term sub_weight(std::vector<std::int64_t> w, std::int64_t k);
  // outer o inner
  static Term compose(Term outer, Term inner);
  // Parts share the argument; their outputs are concatenated in order.
  static Term disjoint_union(std::vector<Term> parts);

  Kind kind() const noexcept;
  std::size_t in_size() const noexcept;
  std::size_t out_size() const noexcept;

  struct Node;
  const Node& node() const noexcept { return *node_; }

private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Raw evaluation over value vectors on a given chain.
std::vector<Rational> evaluate_raw(const Term& f, const std::vector<Rational>& a, const Chain& chain);

// f(a). The result lives over `codomain`; when null, over the domain of a for
// endo-terms and over indexed positions otherwise.
Assignment evaluate(const Term& f, const Assignment& a, DomainPtr codomain = nullptr);

// f#a(Y'); requires Y' to be a subset of [Y]^a.
PositionSet approx(const Term& f, const Assignment& a, const PositionSet& subset);

// Greatest fixpoint of Y' -> f#a(Y') for a fixpoint a of the endo-term f.
// Empty iff a is the least fixpoint.
PositionSet nu_approx(const Term& f, const Assignment& a);

// Greatest fixpoint of Y' -> f#a(Y') n [Y]^{a=f(a)} for a post-fixpoint a.
PositionSet nu_star(const Term& f, const Assignment& a);

struct Decrease {
  Assignment result;
  Value delta;
};

using Evaluator = std::function<Assignment(const Assignment&)>;

// Finds delta > 0 such that a' = a (-) delta_{Y'} is a pre-fixpoint, trying
// `extra` candidates first and then the generic candidate list, largest first.
Decrease decrease_to_prefixpoint(const Evaluator& f, const Assignment& a, const PositionSet& subset,
                                 const std::vector<Rational>& extra = {});
Decrease decrease_to_prefixpoint(const Term& f, const Assignment& a, const PositionSet& subset,
                                 const std::vector<Rational>& extra = {});

struct KleeneResult {
  Assignment value;
  std::size_t steps = 0;
};

// Least fixpoint by iteration from 0. Finite chains only.
KleeneResult kleene_solve(const Term& f, DomainPtr domain, const Chain& chain);

}  // namespace gsi

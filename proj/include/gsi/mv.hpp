#pragma once

// Complete MV-chains ([0,1] over exact rationals, and {0,...,k}), their
// values, and assignments a : Y -> M over a finite ordered position set.

#include "gsi/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gsi {

class Chain {
public:
  static Chain unit_interval() { return Chain(0); }
  // {0, ..., k}; k >= 1.
  static Chain finite(std::int64_t k);

  bool is_unit() const noexcept { return k_ == 0; }
  bool is_finite() const noexcept { return k_ != 0; }
  // Bound of a finite chain; 1 for the unit interval.
  std::int64_t k() const noexcept { return k_ == 0 ? 1 : k_; }
  Rational top() const { return from_int(k()); }
  bool contains(const Rational& q) const;
  std::string describe() const;

  friend bool operator==(const Chain&, const Chain&) = default;

private:
  explicit Chain(std::int64_t k) : k_(k) {}
  std::int64_t k_;  // 0 encodes the unit interval
};

class Value {
public:
  Value(Chain chain, Rational q);
  static Value zero(Chain chain) { return Value(chain, Rational(0)); }
  static Value top(Chain chain) { return Value(chain, chain.top()); }

  const Chain& chain() const noexcept { return chain_; }
  const Rational& rational() const noexcept { return q_; }
  bool is_zero() const { return q_ == 0; }

  // Natural order; comparing values of different chains throws.
  friend std::strong_ordering operator<=>(const Value& x, const Value& y);
  friend bool operator==(const Value& x, const Value& y);

private:
  Chain chain_;
  Rational q_;
};

// x (+) y = min(x + y, top)
Value oplus(const Value& x, const Value& y);
// x (-) y = max(x - y, 0)
Value ominus(const Value& x, const Value& y);
// top - x
Value complement(const Value& x);
Value join(const Value& x, const Value& y);
Value meet(const Value& x, const Value& y);

std::string to_string(const Value& v);

// Interned position names with a stable total order (the declaration order).
class Domain {
public:
  explicit Domain(std::vector<std::string> names);
  static std::shared_ptr<const Domain> make(std::vector<std::string> names);
  // Positions named "<prefix>0", "<prefix>1", ...
  static std::shared_ptr<const Domain> indexed(std::size_t n, const std::string& prefix = "#");

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using DomainPtr = std::shared_ptr<const Domain>;

// Subset of a finite position set {0, ..., n-1}.
class PositionSet {
public:
  PositionSet() = default;
  explicit PositionSet(std::size_t universe) : bits_(universe, false) {}
  static PositionSet all(std::size_t universe);
  static PositionSet of(std::size_t universe, std::initializer_list<std::size_t> members);

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(std::size_t i) const { return i < bits_.size() && bits_[i]; }
  void insert(std::size_t i) { bits_.at(i) = true; }
  void erase(std::size_t i) { bits_.at(i) = false; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> members() const;
  bool subset_of(const PositionSet& other) const;
  PositionSet intersect(const PositionSet& other) const;
  PositionSet unite(const PositionSet& other) const;

  friend bool operator==(const PositionSet&, const PositionSet&) = default;

private:
  std::vector<bool> bits_;
};

std::string to_string(const PositionSet& set, const Domain& domain);

class Assignment {
public:
  Assignment(DomainPtr domain, Chain chain, std::vector<Rational> values);
  static Assignment constant(DomainPtr domain, const Value& v);
  static Assignment zero(DomainPtr domain, Chain chain) { return constant(std::move(domain), Value::zero(chain)); }

  std::size_t size() const noexcept { return values_.size(); }
  const DomainPtr& domain() const noexcept { return domain_; }
  const Chain& chain() const noexcept { return chain_; }
  std::span<const Rational> raw() const noexcept { return values_; }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  Value at(std::size_t i) const { return Value(chain_, values_.at(i)); }
  Value at(const std::string& name) const { return at(domain_->index_of(name)); }

  // Copy with position i replaced.
  Assignment with(std::size_t i, Rational q) const;

  // [Y]^a = { y | a(y) != 0 }
  PositionSet support() const;
  // delta^a = min { a(y) | y in [Y]^a }; empty when a is constantly 0.
  std::optional<Value> min_nonzero() const;

  friend bool operator==(const Assignment& a, const Assignment& b);

private:
  DomainPtr domain_;
  Chain chain_;
  std::vector<Rational> values_;
};

// Pointwise order; requires equal domains and chains.
bool leq(const Assignment& a, const Assignment& b);
// a below b and a != b
bool strictly_below(const Assignment& a, const Assignment& b);

// ||a|| = max_y a(y); the domain must be non-empty.
Value norm(const Assignment& a);
Assignment ominus(const Assignment& a, const Assignment& b);
Assignment pointwise_join(const Assignment& a, const Assignment& b);
Assignment pointwise_meet(const Assignment& a, const Assignment& b);

// a (-) delta_{Y'}: subtract delta on Y' only.
Assignment decrease(const Assignment& a, const PositionSet& subset, const Value& delta);

std::string to_string(const Assignment& a);

// Finitely supported distribution over dense position indices.
using Distribution = std::vector<std::pair<std::size_t, Rational>>;

}  // namespace gsi

#include "gsi/mv.hpp"

#include "gsi/errors.hpp"

#include <algorithm>

namespace gsi {

Chain Chain::finite(std::int64_t k) {
  if (k < 1) throw InvariantError("finite chain bound must be >= 1, got " + std::to_string(k));
  return Chain(k);
}

bool Chain::contains(const Rational& q) const {
  if (q < 0 || q > top()) return false;
  return is_unit() || q.get_den() == 1;
}

std::string Chain::describe() const {
  return is_unit() ? std::string("[0,1]") : "{0.." + std::to_string(k_) + "}";
}

namespace {

void require_same_chain(const Chain& a, const Chain& b) {
  if (a != b) throw InvariantError("chain mismatch: " + a.describe() + " vs " + b.describe());
}

}  // namespace

Value::Value(Chain chain, Rational q) : chain_(chain), q_(std::move(q)) {
  q_.canonicalize();
  if (!chain_.contains(q_)) throw InvariantError("value " + gsi::to_string(q_) + " outside chain " + chain_.describe());
}

std::strong_ordering operator<=>(const Value& x, const Value& y) {
  require_same_chain(x.chain_, y.chain_);
  const int c = cmp(x.q_, y.q_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

bool operator==(const Value& x, const Value& y) {
  require_same_chain(x.chain_, y.chain_);
  return x.q_ == y.q_;
}

Value oplus(const Value& x, const Value& y) {
  require_same_chain(x.chain(), y.chain());
  Rational s = x.rational() + y.rational();
  const Rational top = x.chain().top();
  return Value(x.chain(), s > top ? top : s);
}

Value ominus(const Value& x, const Value& y) {
  require_same_chain(x.chain(), y.chain());
  Rational d = x.rational() - y.rational();
  return Value(x.chain(), d < 0 ? Rational(0) : d);
}

Value complement(const Value& x) { return Value(x.chain(), x.chain().top() - x.rational()); }

Value join(const Value& x, const Value& y) { return x < y ? y : x; }

Value meet(const Value& x, const Value& y) { return y < x ? y : x; }

std::string to_string(const Value& v) { return to_string(v.rational()); }

// --- Domain ---------------------------------------------------------------

Domain::Domain(std::vector<std::string> names) : names_(std::move(names)) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) throw InvariantError("duplicate position name '" + names_[i] + "'");
  }
}

std::shared_ptr<const Domain> Domain::make(std::vector<std::string> names) {
  return std::make_shared<const Domain>(std::move(names));
}

std::shared_ptr<const Domain> Domain::indexed(std::size_t n, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return make(std::move(names));
}

std::optional<std::size_t> Domain::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Domain::index_of(const std::string& name) const {
  auto i = find(name);
  if (!i) throw InvariantError("unknown position '" + name + "'");
  return *i;
}

// --- PositionSet ----------------------------------------------------------

PositionSet PositionSet::all(std::size_t universe) {
  PositionSet s(universe);
  s.bits_.assign(universe, true);
  return s;
}

PositionSet PositionSet::of(std::size_t universe, std::initializer_list<std::size_t> members) {
  PositionSet s(universe);
  for (auto m : members) s.insert(m);
  return s;
}

std::size_t PositionSet::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<std::size_t> PositionSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

bool PositionSet::subset_of(const PositionSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.contains(i)) return false;
  return true;
}

PositionSet PositionSet::intersect(const PositionSet& other) const {
  PositionSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && other.contains(i)) out.bits_[i] = true;
  return out;
}

PositionSet PositionSet::unite(const PositionSet& other) const {
  if (other.universe() != universe()) throw InvariantError("position sets over different universes");
  PositionSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] || other.bits_[i];
  return out;
}

std::string to_string(const PositionSet& set, const Domain& domain) {
  std::string out = "{";
  bool first = true;
  for (auto i : set.members()) {
    if (!first) out += ", ";
    out += domain.name(i);
    first = false;
  }
  return out + "}";
}

// --- Assignment -----------------------------------------------------------

Assignment::Assignment(DomainPtr domain, Chain chain, std::vector<Rational> values)
    : domain_(std::move(domain)), chain_(chain), values_(std::move(values)) {
  for (auto& q : values_) q.canonicalize();
  if (!domain_) throw InvariantError("assignment without a domain");
  if (domain_->size() != values_.size())
    throw InvariantError("assignment has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(domain_->size()) + " positions");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!chain_.contains(values_[i]))
      throw InvariantError("value " + gsi::to_string(values_[i]) + " at '" + domain_->name(i) + "' outside chain " +
                           chain_.describe());
}

Assignment Assignment::constant(DomainPtr domain, const Value& v) {
  const std::size_t n = domain->size();
  return Assignment(std::move(domain), v.chain(), std::vector<Rational>(n, v.rational()));
}

Assignment Assignment::with(std::size_t i, Rational q) const {
  auto values = values_;
  values.at(i) = std::move(q);
  return Assignment(domain_, chain_, std::move(values));
}

PositionSet Assignment::support() const {
  PositionSet s(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != 0) s.insert(i);
  return s;
}

std::optional<Value> Assignment::min_nonzero() const {
  const Rational* best = nullptr;
  for (const auto& q : values_)
    if (q != 0 && (!best || q < *best)) best = &q;
  if (!best) return std::nullopt;
  return Value(chain_, *best);
}

namespace {

void require_compatible(const Assignment& a, const Assignment& b) {
  require_same_chain(a.chain(), b.chain());
  if (a.domain() != b.domain() && a.domain()->names() != b.domain()->names())
    throw InvariantError("assignments over different domains");
}

}  // namespace

bool operator==(const Assignment& a, const Assignment& b) {
  require_compatible(a, b);
  return std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(), b.values_.end());
}

bool leq(const Assignment& a, const Assignment& b) {
  require_compatible(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool strictly_below(const Assignment& a, const Assignment& b) { return leq(a, b) && !(a == b); }

Value norm(const Assignment& a) {
  if (a.size() == 0) throw InvariantError("norm of an assignment over an empty domain");
  return Value(a.chain(), *std::max_element(a.raw().begin(), a.raw().end()));
}

Assignment ominus(const Assignment& a, const Assignment& b) {
  require_compatible(a, b);
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > b[i] ? Rational(a[i] - b[i]) : Rational(0);
  return Assignment(a.domain(), a.chain(), std::move(out));
}

Assignment pointwise_join(const Assignment& a, const Assignment& b) {
  require_compatible(a, b);
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] < b[i] ? b[i] : a[i];
  return Assignment(a.domain(), a.chain(), std::move(out));
}

Assignment pointwise_meet(const Assignment& a, const Assignment& b) {
  require_compatible(a, b);
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] < a[i] ? b[i] : a[i];
  return Assignment(a.domain(), a.chain(), std::move(out));
}

Assignment decrease(const Assignment& a, const PositionSet& subset, const Value& delta) {
  require_same_chain(a.chain(), delta.chain());
  if (subset.universe() != a.size()) throw InvariantError("decrease: subset is not over the assignment's domain");
  std::vector<Rational> out(a.raw().begin(), a.raw().end());
  for (auto i : subset.members()) {
    out[i] -= delta.rational();
    if (out[i] < 0) out[i] = 0;
  }
  return Assignment(a.domain(), a.chain(), std::move(out));
}

std::string to_string(const Assignment& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += a.domain()->name(i) + ":" + to_string(a[i]);
  }
  return out + "}";
}

}  // namespace gsi

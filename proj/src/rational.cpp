#include "gsi/rational.hpp"

#include "gsi/errors.hpp"

#include <cctype>

namespace gsi {

namespace {

bool is_integer_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
    throw InvariantError("malformed rational '" + std::string(text) + "' (expected p/q or an integer)");
  const std::string n(num.front() == '+' ? num.substr(1) : num);
  const BigInt d(std::string(den), 10);
  if (d == 0) throw InvariantError("zero denominator in '" + std::string(text) + "'");
  Rational q(BigInt(n, 10), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::int64_t to_int64(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p())
    throw InvariantError("value " + to_string(q) + " is not a machine integer");
  return q.get_num().get_si();
}

}  // namespace gsi

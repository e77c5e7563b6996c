#include "carnot/rational.hpp"

#include "carnot/errors.hpp"

#include <cctype>

namespace carnot {

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
      throw ParseError("bad rational literal: " + text);
    BigInt n(num), d(den);
    if (d == 0) throw ParseError("zero denominator: " + text);
    return Rational(n, d);
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (head.empty() || head == "+" || head == "-") head += "0";
    if (!is_integer_literal(head)) throw ParseError("bad rational literal: " + text);
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("bad rational literal: " + text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt n(head);
    bool neg = n < 0;
    if (neg) n = -n;
    n = n * scale + (tail.empty() ? BigInt(0) : BigInt(tail));
    if (neg) n = -n;
    return Rational(n, scale);
  }

  if (!is_integer_literal(s)) throw ParseError("bad rational literal: " + text);
  return Rational(BigInt(s));
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace carnot

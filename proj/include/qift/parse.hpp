#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/mpoly.hpp"
#include "qift/unipoly.hpp"

namespace qift {

inline constexpr const char* kMapGrammar =
    "map    := poly (';' poly)*\n"
    "poly   := term (('+' | '-') term)*\n"
    "term   := factor ('*' factor)*\n"
    "factor := ('+' | '-') factor | atom ('^' integer)?\n"
    "atom   := number | 'x' index | 't' | '(' poly ')'\n"
    "number := digits ('.' digits)? ([eE] [+-]? digits)? ('/' digits)?\n"
    "In a map of N components the variables are x0..x{N-1}; t names x{N-1}.\n"
    "Whitespace is insignificant.";

namespace detail {

using QPoly = MPoly<RationalField>;

class PolyParser {
 public:
  PolyParser(const std::string& text, std::size_t offset, std::size_t arity, std::optional<std::size_t> t_index)
      : s_(text), base_(offset), arity_(arity), t_index_(t_index) {}

  QPoly parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("empty polynomial");
    QPoly p = poly();
    skip_ws();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(base_ + pos_, what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  QPoly poly() {
    QPoly acc = term();
    while (true) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  QPoly term() {
    QPoly acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  QPoly factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    QPoly a = atom();
    if (accept('^')) {
      skip_ws();
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      if (digits.empty()) fail("expected a nonnegative integer exponent");
      if (digits.size() > 4) fail("exponent too large");
      a = a.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return a;
  }

  QPoly atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      QPoly p = poly();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == 'x') {
      ++pos_;
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      if (digits.empty() || digits.size() > 6) fail("expected variable index after 'x'");
      const std::size_t idx = std::stoul(digits);
      if (idx >= arity_) fail("variable x" + digits + " out of range");
      return QPoly::variable(RationalField{}, arity_, idx);
    }
    if (c == 't') {
      ++pos_;
      if (!t_index_) fail("variable t not allowed here");
      return QPoly::variable(RationalField{}, arity_, *t_index_);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      mpz_class num, den;
      std::size_t p = pos_;
      if (!read_rational_literal(s_, p, num, den)) fail("malformed number");
      pos_ = p;
      return QPoly::constant(RationalField{}, arity_, RationalField{}.from_rational(num, den));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t base_;
  std::size_t pos_ = 0;
  std::size_t arity_;
  std::optional<std::size_t> t_index_;
};

struct VariableScan {
  std::size_t max_x = 0;
  bool any_x = false;
  bool any_t = false;
};

inline VariableScan scan_variables(const std::string& s) {
  VariableScan v;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 't') v.any_t = true;
    if (s[i] == 'x') {
      std::size_t j = i + 1;
      std::string digits;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) digits += s[j++];
      if (!digits.empty() && digits.size() <= 6) {
        v.any_x = true;
        v.max_x = std::max<std::size_t>(v.max_x, std::stoul(digits));
      }
    }
  }
  return v;
}

}  // namespace detail

/// Parses one polynomial with exact rational coefficients. With arity 0 the arity is
/// inferred: one more than the largest x index, plus one trailing slot for t.
inline MPoly<RationalField> parse_poly(const std::string& text, std::size_t arity = 0) {
  std::optional<std::size_t> t_index;
  if (arity == 0) {
    const auto scan = detail::scan_variables(text);
    arity = scan.any_x ? scan.max_x + 1 : 0;
    if (scan.any_t) t_index = arity++;
    if (arity == 0) arity = 1;
  } else {
    t_index = arity - 1;
  }
  return detail::PolyParser(text, 0, arity, t_index).parse();
}

/// Parses `poly ; poly ; ...` into a square map.
inline PolyMap<RationalField> parse_map(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> parts;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    parts.emplace_back(start, text.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  const std::size_t n = parts.size();
  std::vector<MPoly<RationalField>> comps;
  for (const auto& [offset, part] : parts)
    comps.push_back(detail::PolyParser(part, offset, n, n - 1).parse());
  return PolyMap<RationalField>(RationalField{}, std::move(comps));
}

template <ValuedField F>
PolyMap<F> parse_map(const F& field, const std::string& text) {
  return PolyMap<F>::from_rational(field, parse_map(text));
}

/// Parses a univariate polynomial in t (or x0).
inline UniPoly<RationalField> parse_unipoly(const std::string& text) {
  const auto scan = detail::scan_variables(text);
  if (scan.any_x && (scan.any_t || scan.max_x > 0))
    throw ParseError(0, "univariate polynomial must use a single variable t or x0");
  return UniPoly<RationalField>::from_mpoly(detail::PolyParser(text, 0, 1, 0).parse());
}

template <ValuedField F>
UniPoly<F> lift(const F& field, const UniPoly<RationalField>& f) {
  std::vector<typename F::Scalar> c;
  for (const auto& q : f.coeffs()) c.push_back(field.from_rational(q.get_num(), q.get_den()));
  return UniPoly<F>(field, std::move(c));
}

template <ValuedField F>
UniPoly<F> parse_unipoly(const F& field, const std::string& text) {
  return lift(field, parse_unipoly(text));
}

}  // namespace qift

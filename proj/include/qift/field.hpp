#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qift/error.hpp"
#include "qift/padic.hpp"

namespace qift {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

inline double rational_to_double(const mpz_class& num, const mpz_class& den) {
  // Exact operands below 2^53 give a correctly rounded quotient.
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
    return num.get_d() / den.get_d();
  }
  mpq_class q(num, den);
  q.canonicalize();
  return q.get_d();
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace detail

/// The real numbers with the usual absolute value (double precision).
struct RealField {
  using Scalar = double;
  static constexpr bool archimedean = true;

  Scalar zero() const { return 0.0; }
  Scalar one() const { return 1.0; }
  Scalar from_int(long v) const { return static_cast<double>(v); }
  Scalar from_rational(const mpz_class& num, const mpz_class& den = 1) const {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    return detail::rational_to_double(num, den);
  }
  double abs(const Scalar& x) const { return std::abs(x); }
  bool is_zero(const Scalar& x) const { return x == 0.0; }
  std::string format(const Scalar& x, int = 8) const { return detail::format_double(x); }
  std::string name() const { return "real"; }
  friend bool operator==(const RealField&, const RealField&) { return true; }
};

/// The complex numbers with the usual modulus.
struct ComplexField {
  using Scalar = std::complex<double>;
  static constexpr bool archimedean = true;

  Scalar zero() const { return {0.0, 0.0}; }
  Scalar one() const { return {1.0, 0.0}; }
  Scalar from_int(long v) const { return {static_cast<double>(v), 0.0}; }
  Scalar from_rational(const mpz_class& num, const mpz_class& den = 1) const {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    return {detail::rational_to_double(num, den), 0.0};
  }
  double abs(const Scalar& x) const { return std::abs(x); }
  bool is_zero(const Scalar& x) const { return x == Scalar(0.0, 0.0); }
  std::string format(const Scalar& x, int = 8) const {
    if (x.imag() == 0.0) return detail::format_double(x.real());
    std::string im = detail::format_double(std::abs(x.imag()));
    return detail::format_double(x.real()) + (x.imag() < 0 ? "-" : "+") + im + "i";
  }
  std::string name() const { return "complex"; }
  friend bool operator==(const ComplexField&, const ComplexField&) { return true; }
};

/// Q_p truncated to a fixed number of p-adic digits, with |p| = 1/p.
struct PadicField {
  using Scalar = Padic;
  static constexpr bool archimedean = false;
  static constexpr std::int32_t kDefaultDigits = 64;

  std::uint32_t p = 2;
  std::int32_t digits = kDefaultDigits;

  PadicField() = default;
  PadicField(std::uint32_t prime, std::int32_t nd = kDefaultDigits) : p(prime), digits(nd) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    if (digits < 1) throw Error(ErrorCode::InvalidArgument, "p-adic precision must be >= 1 digit");
  }

  Scalar zero() const { return Padic::zero(p, digits); }
  Scalar one() const { return Padic::from_int(p, digits, 1); }
  Scalar from_int(long v) const { return Padic::from_int(p, digits, v); }
  Scalar from_rational(const mpz_class& num, const mpz_class& den = 1) const {
    return Padic::from_rational(p, digits, num, den);
  }
  double abs(const Scalar& x) const { return x.abs(); }
  bool is_zero(const Scalar& x) const { return x.is_zero(); }
  double log_p() const { return std::log(static_cast<double>(p)); }
  std::string format(const Scalar& x, int shown = 8) const { return x.to_digits(shown); }
  std::string name() const { return "padic:" + std::to_string(p) + ":" + std::to_string(digits); }
  friend bool operator==(const PadicField& a, const PadicField& b) {
    return a.p == b.p && a.digits == b.digits;
  }
};

/// Exact rationals; used for the symbolic identities only.
struct RationalField {
  using Scalar = mpq_class;
  static constexpr bool archimedean = true;

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(long v) const { return v; }
  Scalar from_rational(const mpz_class& num, const mpz_class& den = 1) const {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  double abs(const Scalar& x) const { return std::abs(x.get_d()); }
  bool is_zero(const Scalar& x) const { return x == 0; }
  std::string format(const Scalar& x, int = 8) const { return x.get_str(); }
  std::string name() const { return "rational"; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept ValuedField = requires(const F& f, const typename F::Scalar& x, const mpz_class& n) {
  typename F::Scalar;
  { F::archimedean } -> std::convertible_to<bool>;
  { f.zero() } -> std::same_as<typename F::Scalar>;
  { f.one() } -> std::same_as<typename F::Scalar>;
  { f.from_int(1L) } -> std::same_as<typename F::Scalar>;
  { f.from_rational(n, n) } -> std::same_as<typename F::Scalar>;
  { f.abs(x) } -> std::convertible_to<double>;
  { f.is_zero(x) } -> std::convertible_to<bool>;
  { f.format(x, 8) } -> std::convertible_to<std::string>;
  { x + x } -> std::convertible_to<typename F::Scalar>;
  { x - x } -> std::convertible_to<typename F::Scalar>;
  { x * x } -> std::convertible_to<typename F::Scalar>;
  { x / x } -> std::convertible_to<typename F::Scalar>;
};

using FieldSpec = std::variant<RealField, ComplexField, PadicField>;

/// Parses `real | complex | padic:<p>:<digits>` (digits optional, default 64).
inline FieldSpec parse_field_spec(const std::string& text) {
  if (text == "real") return RealField{};
  if (text == "complex") return ComplexField{};
  if (text.rfind("padic:", 0) == 0) {
    const std::string rest = text.substr(6);
    const auto colon = rest.find(':');
    try {
      const unsigned long p = std::stoul(rest.substr(0, colon));
      long digits = PadicField::kDefaultDigits;
      if (colon != std::string::npos) digits = std::stol(rest.substr(colon + 1));
      if (p > std::numeric_limits<std::uint32_t>::max() || digits > 100000)
        throw Error(ErrorCode::InvalidArgument, "p-adic parameters out of range");
      return PadicField(static_cast<std::uint32_t>(p), static_cast<std::int32_t>(digits));
    } catch (const std::logic_error&) {
      throw ParseError(6, "malformed p-adic field spec '" + text + "'");
    }
  }
  throw ParseError(0, "unknown field spec '" + text + "' (expected real | complex | padic:<p>:<digits>)");
}

template <ValuedField F>
using Vector = std::vector<typename F::Scalar>;

/// log(1/distance): +inf exactly when the compared quantities agree at working precision.
/// Over Q_p the value is also kept as an exact integer valuation.
struct LogDistance {
  double value = kInf;
  std::optional<std::int64_t> valuation;

  bool is_infinite() const { return std::isinf(value) && value > 0; }
};

/// Radii b2 > b1 > 0 of the inner and outer polydiscs.
struct Box {
  double b1 = 1.0;
  double b2 = 2.0;

  static Box checked(double inner, double outer) {
    if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer))
      throw Error(ErrorCode::InvalidBox, "need b2 > b1 > 0");
    return Box{inner, outer};
  }
};

template <ValuedField F>
double sup_norm(const F& field, const Vector<F>& x) {
  double m = 0.0;
  for (const auto& xi : x) m = std::max(m, field.abs(xi));
  return m;
}

template <ValuedField F>
Vector<F> vec_sub(const Vector<F>& a, const Vector<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  Vector<F> r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

template <ValuedField F>
Vector<F> vec_add(const Vector<F>& a, const Vector<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  Vector<F> r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

template <ValuedField F>
bool vec_is_zero(const F& field, const Vector<F>& v) {
  return std::all_of(v.begin(), v.end(), [&](const auto& c) { return field.is_zero(c); });
}

/// log(1/|x|) for a scalar; exact valuation over Q_p.
template <ValuedField F>
LogDistance log_inv_abs(const F& field, const typename F::Scalar& x) {
  LogDistance d;
  if constexpr (std::same_as<F, PadicField>) {
    if (x.is_zero()) {
      d.value = kInf;
      d.valuation = Padic::kInfinity;
    } else {
      d.valuation = x.valuation();
      d.value = static_cast<double>(x.valuation()) * field.log_p();
    }
  } else {
    const double a = field.abs(x);
    d.value = a == 0.0 ? kInf : -std::log(a);
  }
  return d;
}

/// log(1/||v||) for the sup norm.
template <ValuedField F>
LogDistance log_inv_norm(const F& field, const Vector<F>& v) {
  if constexpr (std::same_as<F, PadicField>) {
    std::int64_t m = Padic::kInfinity;
    for (const auto& c : v) m = std::min(m, c.valuation());
    LogDistance d;
    d.valuation = m;
    d.value = m >= Padic::kInfinity ? kInf : static_cast<double>(m) * field.log_p();
    return d;
  } else {
    const double n = sup_norm(field, v);
    return LogDistance{n == 0.0 ? kInf : -std::log(n), std::nullopt};
  }
}

/// Arithmetic distance log 1/||x - y||.
template <ValuedField F>
LogDistance delta(const F& field, const Vector<F>& x, const Vector<F>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "delta: dimension mismatch");
  Vector<F> d;
  d.reserve(x.size());
  // Componentwise |x_i - y_i| = |y_i - x_i| exactly, so the result is symmetric bit for bit.
  for (std::size_t i = 0; i < x.size(); ++i) d.push_back(x[i] - y[i]);
  return log_inv_norm(field, d);
}

/// Parses a scalar: integers, `num/den`, decimals with optional exponent; complex values
/// may carry an `i` suffixed imaginary part (`1.5-2i`, `3i`).
template <ValuedField F>
typename F::Scalar parse_scalar(const F& field, const std::string& text);

namespace detail {

// Reads an unsigned decimal/rational literal starting at pos into num/den.
inline bool read_rational_literal(const std::string& s, std::size_t& pos, mpz_class& num, mpz_class& den) {
  const std::size_t start = pos;
  std::string digits;
  std::int64_t exp10 = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      --exp10;
    }
  }
  if (digits.empty()) {
    pos = start;
    return false;
  }
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::size_t q = pos + 1;
    bool neg = false;
    if (q < s.size() && (s[q] == '+' || s[q] == '-')) neg = s[q++] == '-';
    std::string e;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) e += s[q++];
    if (!e.empty() && e.size() < 6) {
      exp10 += neg ? -std::stol(e) : std::stol(e);
      pos = q;
    }
  }
  num = mpz_class(digits, 10);
  den = 1;
  mpz_class ten = 10;
  if (exp10 > 0) {
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10));
    num *= m;
  } else if (exp10 < 0) {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-exp10));
  }
  if (pos < s.size() && s[pos] == '/' && den == 1) {
    std::size_t q = pos + 1;
    std::string d;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) d += s[q++];
    if (d.empty()) throw ParseError(q, "expected denominator");
    den = mpz_class(d, 10);
    if (den == 0) throw ParseError(q, "zero denominator");
    pos = q;
  }
  return true;
}

}  // namespace detail

template <ValuedField F>
typename F::Scalar parse_scalar(const F& field, const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError(0, "empty scalar");
  std::size_t pos = 0;
  using S = typename F::Scalar;
  S total = field.zero();
  bool any = false;
  while (pos < s.size()) {
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = s[pos] == '-';
      ++pos;
    } else if (any) {
      throw ParseError(pos, "expected sign between scalar parts");
    }
    mpz_class num = 1, den = 1;
    const bool has_number = detail::read_rational_literal(s, pos, num, den);
    bool imaginary = false;
    if (pos < s.size() && s[pos] == 'i') {
      imaginary = true;
      ++pos;
    }
    if (!has_number && !imaginary) throw ParseError(pos, "expected number");
    if (neg) num = -num;
    if (imaginary) {
      if constexpr (std::same_as<F, ComplexField>) {
        total += std::complex<double>(0.0, detail::rational_to_double(num, den));
      } else {
        throw ParseError(pos, "imaginary literal outside the complex field");
      }
    } else {
      total = total + field.from_rational(num, den);
    }
    any = true;
  }
  return total;
}

template <ValuedField F>
Vector<F> parse_vector(const F& field, const std::string& text) {
  Vector<F> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(parse_scalar(field, part));
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), "bad vector component '" + part + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace qift

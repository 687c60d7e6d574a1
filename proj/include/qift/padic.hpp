#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>

#include "qift/error.hpp"

namespace qift {

/**
 * p-adic number with capped relative precision.
 *
 * A nonzero value is p^val * unit with unit a p-adic unit known modulo
 * p^rel (1 <= rel <= cap). Its absolute precision is val + rel: the value is
 * known modulo p^(val + rel). Zero carries an absolute precision as well;
 * the exact zero has absolute precision +infinity.
 *
 * Sums aligned to the smaller absolute precision; products and quotients keep
 * the smaller relative precision, so valuations are always exactly additive.
 * A default constructed value is an untyped exact zero that adopts the prime
 * of the other operand.
 */
class Padic {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max() / 4;

  Padic() = default;

  static Padic zero(std::uint32_t p, std::int32_t cap, std::int64_t absprec = kInfinity) {
    Padic z;
    z.p_ = p;
    z.cap_ = cap;
    z.val_ = kInfinity;
    z.absprec_ = absprec;
    return z;
  }

  static Padic from_rational(std::uint32_t p, std::int32_t cap, const mpz_class& num,
                             const mpz_class& den = 1) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    if (num == 0) return zero(p, cap);
    mpz_class n = num, d = den;
    const std::int64_t vn = remove_p(n, p);
    const std::int64_t vd = remove_p(d, p);
    const mpz_class mod = pow_p(p, cap);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
    return make(p, cap, vn - vd, n * inv, cap);
  }

  static Padic from_int(std::uint32_t p, std::int32_t cap, long value) {
    return from_rational(p, cap, mpz_class(value), 1);
  }

  // Builds p^val * unit with unit known modulo p^rel; unit need not be coprime to p.
  static Padic make(std::uint32_t p, std::int32_t cap, std::int64_t val, mpz_class unit,
                    std::int64_t rel) {
    rel = std::min<std::int64_t>(rel, cap);
    if (rel <= 0) return zero(p, cap, val + std::max<std::int64_t>(rel, 0));
    mpz_class mod = pow_p(p, rel);
    unit %= mod;
    if (unit < 0) unit += mod;
    if (unit == 0) return zero(p, cap, val + rel);
    const std::int64_t k = remove_p(unit, p);
    Padic r;
    r.p_ = p;
    r.cap_ = cap;
    r.val_ = val + k;
    r.absprec_ = val + rel;
    r.unit_ = std::move(unit);
    return r;
  }

  std::uint32_t prime() const noexcept { return p_; }
  std::int32_t cap() const noexcept { return cap_; }
  std::int64_t valuation() const noexcept { return val_; }
  std::int64_t absprec() const noexcept { return absprec_; }
  std::int64_t relprec() const noexcept { return is_zero() ? 0 : absprec_ - val_; }
  const mpz_class& unit() const noexcept { return unit_; }

  bool is_zero() const noexcept { return val_ >= kInfinity; }
  bool is_exact_zero() const noexcept { return is_zero() && absprec_ >= kInfinity; }

  double abs() const {
    if (is_zero()) return 0.0;
    return std::pow(static_cast<double>(p_), -static_cast<double>(val_));
  }

  // log(1/|x|) in natural-log units; +inf for zero.
  double log_inv_abs() const {
    if (is_zero()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(val_) * std::log(static_cast<double>(p_));
  }

  // Same value with relative precision extended to the cap (unknown digits set to 0).
  Padic lifted() const {
    if (is_zero()) return *this;
    Padic r = *this;
    r.absprec_ = val_ + cap_;
    return r;
  }

  // Same value known only modulo p^absprec.
  Padic truncated(std::int64_t absprec) const {
    if (absprec >= absprec_) return *this;
    if (is_zero() || absprec <= val_) return zero(p_, cap_, absprec);
    return make(p_, cap_, val_, unit_, absprec - val_);
  }

  // Integer representative in [0, p^k) of a p-integral value.
  mpz_class residue(std::int64_t k) const {
    if (k > absprec_) throw Error(ErrorCode::PrecisionExhausted, "residue beyond known digits");
    if (is_zero() || val_ >= k) return 0;
    if (val_ < 0) throw Error(ErrorCode::InvalidArgument, "residue of a non-integral p-adic");
    const mpz_class mod = pow_p(p_, k);
    mpz_class r = unit_ * pow_p(p_, val_);
    r %= mod;
    return r;
  }

  // p^v * (d0 + d1*p + d2*p^2 + ...) with at most `count` digits of the unit.
  std::string to_digits(int count = 8) const {
    std::ostringstream os;
    if (is_zero()) {
      if (is_exact_zero()) return "0";
      os << "O(" << p_ << "^" << absprec_ << ")";
      return os.str();
    }
    os << p_ << "^" << val_ << " * (";
    mpz_class u = unit_;
    const std::int64_t known = relprec();
    const std::int64_t shown = std::min<std::int64_t>(known, std::max(count, 1));
    for (std::int64_t i = 0; i < shown; ++i) {
      mpz_class d;
      mpz_fdiv_qr_ui(u.get_mpz_t(), d.get_mpz_t(), u.get_mpz_t(), p_);
      if (i > 0) os << " + ";
      os << d.get_str();
      if (i == 1) os << "*" << p_;
      if (i > 1) os << "*" << p_ << "^" << i;
    }
    if (shown < known) os << " + ...";
    os << ")";
    return os.str();
  }

  Padic operator-() const {
    if (is_zero()) return *this;
    Padic r = *this;
    const mpz_class mod = pow_p(p_, relprec());
    r.unit_ = mod - unit_;
    return r;
  }

  friend Padic operator+(const Padic& x, const Padic& y) {
    const auto [p, cap] = common_field(x, y);
    const std::int64_t absprec = std::min(x.absprec_, y.absprec_);
    if (x.is_zero() && y.is_zero()) return zero(p, cap, absprec);
    if (x.is_zero()) return y.with_field(p, cap).truncated(absprec);
    if (y.is_zero()) return x.with_field(p, cap).truncated(absprec);
    const std::int64_t v = std::min(x.val_, y.val_);
    const std::int64_t n = absprec - v;
    if (n <= 0) return zero(p, cap, absprec);
    mpz_class s = 0;
    if (x.val_ - v < n) s += x.unit_ * pow_p(p, x.val_ - v);
    if (y.val_ - v < n) s += y.unit_ * pow_p(p, y.val_ - v);
    return make(p, cap, v, std::move(s), n);
  }

  friend Padic operator-(const Padic& x, const Padic& y) { return x + (-y); }

  friend Padic operator*(const Padic& x, const Padic& y) {
    const auto [p, cap] = common_field(x, y);
    if (x.is_zero() || y.is_zero()) {
      const std::int64_t ax = x.is_zero() ? sat_add(x.absprec_, y.val_) : kInfinity;
      const std::int64_t ay = y.is_zero() ? sat_add(y.absprec_, x.val_) : kInfinity;
      std::int64_t a = std::min(ax, ay);
      if (x.is_zero() && y.is_zero()) a = sat_add(x.absprec_, y.absprec_);
      return zero(p, cap, a);
    }
    const std::int64_t rel = std::min(x.relprec(), y.relprec());
    return make(p, cap, x.val_ + y.val_, x.unit_ * y.unit_, rel);
  }

  friend Padic operator/(const Padic& x, const Padic& y) {
    const auto [p, cap] = common_field(x, y);
    if (y.is_zero()) {
      if (y.is_exact_zero()) throw Error(ErrorCode::DivisionByZero, "p-adic division by zero");
      throw Error(ErrorCode::PrecisionExhausted, "divisor has no known nonzero digit");
    }
    if (x.is_zero()) return zero(p, cap, x.is_exact_zero() ? kInfinity : x.absprec_ - y.val_);
    const std::int64_t rel = std::min(x.relprec(), y.relprec());
    const mpz_class mod = pow_p(p, rel);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), y.unit_.get_mpz_t(), mod.get_mpz_t());
    return make(p, cap, x.val_ - y.val_, x.unit_ * inv, rel);
  }

  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }
  Padic& operator/=(const Padic& o) { return *this = *this / o; }

  // Equality at working precision: the difference has no known nonzero digit.
  friend bool operator==(const Padic& x, const Padic& y) { return (x - y).is_zero(); }

  static mpz_class pow_p(std::uint32_t p, std::int64_t k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(std::max<std::int64_t>(k, 0)));
    return r;
  }

  // Strips factors of p from x (x != 0) and returns how many were removed.
  static std::int64_t remove_p(mpz_class& x, std::uint32_t p) {
    if (x == 0) return kInfinity;
    mpz_class pp = p;
    return static_cast<std::int64_t>(mpz_remove(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
  }

 private:
  static std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a >= kInfinity || b >= kInfinity) return kInfinity;
    return a + b;
  }

  struct FieldKey {
    std::uint32_t p;
    std::int32_t cap;
  };

  static FieldKey common_field(const Padic& x, const Padic& y) {
    if (x.p_ == 0) return {y.p_, y.cap_};
    if (y.p_ == 0) return {x.p_, x.cap_};
    if (x.p_ != y.p_) throw Error(ErrorCode::InvalidArgument, "mixing p-adic numbers of different primes");
    return {x.p_, std::max(x.cap_, y.cap_)};
  }

  Padic with_field(std::uint32_t p, std::int32_t cap) const {
    Padic r = *this;
    r.p_ = p;
    r.cap_ = cap;
    return r;
  }

  std::uint32_t p_ = 0;
  std::int32_t cap_ = 0;
  std::int64_t val_ = kInfinity;
  std::int64_t absprec_ = kInfinity;
  mpz_class unit_ = 0;
};

}  // namespace qift

#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "accumlab/error.hpp"

namespace accumlab {

/// Exact rational number on int64 with overflow-checked arithmetic.
///
/// The whole symbolic core works over these; there is no floating point
/// anywhere in the library. Intermediate products run through __int128 and
/// anything escaping int64 after reduction is a hard "overflow" error rather
/// than silent wraparound. Values are always stored reduced with a positive
/// denominator, so structural equality is value equality.
class Rat {
 public:
  constexpr Rat() = default;
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make_i128(w(a.num_) * b.den_ + w(b.num_) * a.den_,
                     w(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make_i128(w(a.num_) * b.num_, w(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    require(b.num_ != 0, "division-by-zero", "rational division by zero");
    return make_i128(w(a.num_) * b.den_, w(a.den_) * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return w(a.num_) * b.den_ < w(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  Rat pow(unsigned e) const {
    Rat r(1);
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// "p/q" for non-integers, plain "p" for integers. parse() accepts both.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  static Rat parse(const std::string& s) {
    require(!s.empty(), "parse-error", "empty rational literal");
    std::size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      fail("parse-error", "bad rational literal: " + s);
    }
  }

 private:
  using i128 = __int128;
  static i128 w(std::int64_t v) { return static_cast<i128>(v); }

  static Rat make(std::int64_t n, std::int64_t d) {
    require(d != 0, "invalid-denominator", "rational with zero denominator");
    return make_i128(w(n), w(d));
  }

  static Rat make_i128(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    require(n >= lo && n <= hi && d <= hi, "overflow",
            "rational exceeds 64-bit range");
    Rat r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

struct RatHash {
  std::size_t operator()(const Rat& r) const {
    std::size_t h = std::hash<std::int64_t>{}(r.num());
    h ^= std::hash<std::int64_t>{}(r.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h;
  }
};

}  // namespace accumlab

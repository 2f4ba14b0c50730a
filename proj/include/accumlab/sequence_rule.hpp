#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accumlab/error.hpp"

namespace accumlab {

/// A strictly increasing positive integer sequence n_1 < n_2 < ... given by
/// a closed rule. Used for window boundaries in gap-complement sets and for
/// the certified basis construction.
///
/// Grammar accepted by parse():
///   "k^2", "k^3", ...        powers
///   "2^k", "3*2^k", ...      (scaled) exponentials
///   "3k+1", "k", "2k", ...   affine
///   "sq1(2)"                 recurrence n_{k+1} = n_k^2 + 1 from n_1
class SequenceRule {
 public:
  enum class Kind { Affine, Power, Exponential, SquarePlusOne };

  static SequenceRule affine(std::uint64_t a, std::uint64_t b) {
    require(a >= 1, "invalid-gaps", "affine rule needs slope >= 1");
    SequenceRule r;
    r.kind_ = Kind::Affine;
    r.a_ = a;
    r.b_ = b;
    return r;
  }

  static SequenceRule power(std::uint32_t degree) {
    require(degree >= 1, "invalid-gaps", "power rule needs degree >= 1");
    SequenceRule r;
    r.kind_ = Kind::Power;
    r.a_ = degree;
    return r;
  }

  static SequenceRule exponential(std::uint64_t scale, std::uint64_t base) {
    require(base >= 2 && scale >= 1, "invalid-gaps",
            "exponential rule needs base >= 2 and scale >= 1");
    SequenceRule r;
    r.kind_ = Kind::Exponential;
    r.a_ = scale;
    r.b_ = base;
    return r;
  }

  static SequenceRule square_plus_one(std::uint64_t first) {
    require(first >= 2, "invalid-gaps", "sq1 rule needs n_1 >= 2");
    SequenceRule r;
    r.kind_ = Kind::SquarePlusOne;
    r.a_ = first;
    return r;
  }

  Kind kind() const { return kind_; }

  /// n_k for k >= 1, overflow-checked.
  std::uint64_t value(std::uint64_t k) const {
    require(k >= 1, "invalid-gaps", "rule index starts at 1");
    switch (kind_) {
      case Kind::Affine:
        return checked_add(checked_mul(a_, k), b_);
      case Kind::Power: {
        std::uint64_t v = 1;
        for (std::uint32_t i = 0; i < a_; ++i) v = checked_mul(v, k);
        return v;
      }
      case Kind::Exponential: {
        std::uint64_t v = a_;
        for (std::uint64_t i = 0; i < k; ++i) v = checked_mul(v, b_);
        return v;
      }
      case Kind::SquarePlusOne: {
        std::uint64_t v = a_;
        for (std::uint64_t i = 1; i < k; ++i)
          v = checked_add(checked_mul(v, v), 1);
        return v;
      }
    }
    fail("invalid-gaps", "unreachable rule kind");
  }

  /// Whether n_{k+1} - n_k diverges.
  bool gaps_divergent() const {
    switch (kind_) {
      case Kind::Affine:
        return false;
      case Kind::Power:
        return a_ >= 2;
      default:
        return true;
    }
  }

  /// Largest k with n_k <= n, if any. A value overflowing 64 bits counts
  /// as > n.
  std::optional<std::uint64_t> block_index(std::uint64_t n) const {
    auto leq = [&](std::uint64_t k) {
      try {
        return value(k) <= n;
      } catch (const Error&) {
        return false;
      }
    };
    if (!leq(1)) return std::nullopt;
    std::uint64_t lo = 1, hi = 2;
    while (leq(hi) && hi < (std::uint64_t{1} << 62)) hi *= 2;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (leq(mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

  /// Whether n equals some n_k.
  bool hits(std::uint64_t n) const {
    auto k = block_index(n);
    return k && value(*k) == n;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Affine:
        if (a_ == 1 && b_ == 0) return "k";
        if (b_ == 0) return std::to_string(a_) + "k";
        return std::to_string(a_) + "k+" + std::to_string(b_);
      case Kind::Power:
        return "k^" + std::to_string(a_);
      case Kind::Exponential:
        if (a_ == 1) return std::to_string(b_) + "^k";
        return std::to_string(a_) + "*" + std::to_string(b_) + "^k";
      default:
        return "sq1(" + std::to_string(a_) + ")";
    }
  }

  static SequenceRule parse(const std::string& text) {
    std::string s;
    for (char c : text)
      if (c != ' ') s.push_back(c);
    require(!s.empty(), "parse-error", "empty rule");
    if (s.rfind("sq1(", 0) == 0 && s.back() == ')')
      return square_plus_one(parse_u64(s.substr(4, s.size() - 5)));
    std::size_t caret = s.find('^');
    if (caret != std::string::npos) {
      std::string lhs = s.substr(0, caret);
      std::string rhs = s.substr(caret + 1);
      if (lhs == "k") return power(parse_u32(rhs));
      require(rhs == "k", "parse-error", "bad rule: " + text);
      std::size_t star = lhs.find('*');
      if (star == std::string::npos) return exponential(1, parse_u64(lhs));
      return exponential(parse_u64(lhs.substr(0, star)),
                         parse_u64(lhs.substr(star + 1)));
    }
    std::size_t kpos = s.find('k');
    require(kpos != std::string::npos, "parse-error", "bad rule: " + text);
    std::uint64_t a = kpos == 0 ? 1 : parse_u64(s.substr(0, kpos));
    std::uint64_t b = 0;
    if (kpos + 1 < s.size()) {
      require(s[kpos + 1] == '+', "parse-error", "bad rule: " + text);
      b = parse_u64(s.substr(kpos + 2));
    }
    return affine(a, b);
  }

  friend bool operator==(const SequenceRule& x, const SequenceRule& y) {
    return x.kind_ == y.kind_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    require(b == 0 || a <= ~std::uint64_t{0} / b, "overflow",
            "rule value exceeds 64-bit range");
    return a * b;
  }
  static std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    require(a <= ~std::uint64_t{0} - b, "overflow",
            "rule value exceeds 64-bit range");
    return a + b;
  }
  static std::uint64_t parse_u64(const std::string& s) {
    require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos,
            "parse-error", "bad integer: " + s);
    try {
      return std::stoull(s);
    } catch (const std::logic_error&) {
      fail("parse-error", "bad integer: " + s);
    }
  }
  static std::uint32_t parse_u32(const std::string& s) {
    std::uint64_t v = parse_u64(s);
    require(v <= 0xffffffffULL, "parse-error", "integer too large: " + s);
    return static_cast<std::uint32_t>(v);
  }

  Kind kind_ = Kind::Affine;
  std::uint64_t a_ = 1;
  std::uint64_t b_ = 0;
};

}  // namespace accumlab

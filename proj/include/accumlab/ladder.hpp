#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/rational.hpp"

namespace accumlab {

/// Eventually periodic binary stream s_1 s_2 s_3 ...: a finite prefix
/// followed by a repeating nonempty period. Stands in for a real label; two
/// distinct streams agree only on a finite initial segment.
///
/// Grammar: "bin(prefix;period)", e.g. "bin(;0)" for 000..., "bin(1;01)".
class BinaryPattern {
 public:
  BinaryPattern(std::string prefix, std::string period) {
    require(!period.empty(), "parse-error", "pattern period must be nonempty");
    for (char c : prefix + period)
      require(c == '0' || c == '1', "parse-error",
              "pattern bits must be 0 or 1");
    prefix_ = std::move(prefix);
    period_ = std::move(period);
  }

  static BinaryPattern parse(const std::string& text) {
    require(text.rfind("bin(", 0) == 0 && text.back() == ')', "parse-error",
            "bin(prefix;period) expected: " + text);
    std::string body = text.substr(4, text.size() - 5);
    std::size_t semi = body.find(';');
    require(semi != std::string::npos, "parse-error",
            "bin(prefix;period) expected: " + text);
    return BinaryPattern(body.substr(0, semi), body.substr(semi + 1));
  }

  /// Bit at 1-based position i.
  bool bit(std::uint64_t i) const {
    require(i >= 1, "invalid-element", "positions start at 1");
    if (i <= prefix_.size()) return prefix_[i - 1] == '1';
    return period_[(i - 1 - prefix_.size()) % period_.size()] == '1';
  }

  /// Streams compare as infinite sequences; agreeing on a prefix of length
  /// |p1| + |p2| + lcm of the periods forces equality.
  friend bool operator==(const BinaryPattern& a, const BinaryPattern& b) {
    std::uint64_t horizon = a.prefix_.size() + b.prefix_.size() +
                            std::lcm(a.period_.size(), b.period_.size());
    for (std::uint64_t i = 1; i <= horizon; ++i)
      if (a.bit(i) != b.bit(i)) return false;
    return true;
  }
  friend bool operator!=(const BinaryPattern& a, const BinaryPattern& b) {
    return !(a == b);
  }

  /// Length of the longest common prefix with `o` (finite for distinct
  /// streams).
  std::uint64_t shared_prefix_length(const BinaryPattern& o) const {
    require(*this != o, "not-distinct", "streams are identical");
    std::uint64_t i = 1;
    while (bit(i) == o.bit(i)) ++i;
    return i - 1;
  }

  std::string to_string() const { return "bin(" + prefix_ + ";" + period_ + ")"; }

 private:
  std::string prefix_;
  std::string period_;
};

namespace detail {

/// code(w) for a finite binary string w = s_1..s_k: the value of "1 w" read
/// in binary. A bijection between finite strings and {1, 2, 3, ...};
/// code(empty) = 1 and the length-k codes fill [2^k, 2^(k+1)).
inline std::uint64_t prefix_code(const BinaryPattern& p, std::uint64_t k) {
  require(k <= 62, "size-limit", "prefix code exceeds 64-bit range");
  std::uint64_t v = 1;
  for (std::uint64_t i = 1; i <= k; ++i) v = (v << 1) | (p.bit(i) ? 1 : 0);
  return v;
}

/// Decode n >= 1 into (prefix length, matches-pattern).
inline bool decodes_to_prefix(const BinaryPattern& p, std::uint64_t n,
                              std::uint64_t* length) {
  require(n >= 1, "invalid-element", "naturals start at 1");
  std::uint64_t k = 63 - std::countl_zero(n);  // bit length minus one
  for (std::uint64_t i = 1; i <= k; ++i) {
    bool bit_n = ((n >> (k - i)) & 1) != 0;
    if (bit_n != p.bit(i)) return false;
  }
  *length = k;
  return true;
}

/// Cell index of the 0-based enumeration position k. The first two rounds
/// walk 0..4 directly (so the cells for small m all show up among the first
/// ten, desk-scale-observable elements); afterwards the assignment follows
/// the 2-adic valuation ruler, shifted to keep every cell infinite.
inline std::uint64_t ladder_cell_of_index(std::uint64_t k) {
  if (k < 10) return k % 5;
  return static_cast<std::uint64_t>(std::countr_zero(k - 9));
}

}  // namespace detail

/// Finitely many labels with pairwise almost-disjoint member sets: label s
/// owns A_s = {code of every finite prefix of s}, so two distinct labels
/// share exactly the codes of their common prefixes.
class AlmostDisjointFamily {
 public:
  explicit AlmostDisjointFamily(std::vector<BinaryPattern> labels)
      : labels_(std::move(labels)) {
    require(!labels_.empty(), "not-distinct", "family needs at least one label");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        require(labels_[i] != labels_[j], "not-distinct",
                "family labels must be pairwise distinct streams");
  }

  const std::vector<BinaryPattern>& labels() const { return labels_; }

  bool member(std::size_t label, std::uint64_t n) const {
    std::uint64_t k;
    return detail::decodes_to_prefix(labels_.at(label), n, &k);
  }

  /// First `count` members of A_s (the codes of prefixes of length 0, 1, ...).
  std::vector<std::uint64_t> enumerate(std::size_t label,
                                       std::uint64_t count) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 0; k < count; ++k)
      out.push_back(detail::prefix_code(labels_.at(label), k));
    return out;
  }

  /// |A_s with A_t| restricted to [1, bound]: exactly the shared prefixes.
  std::vector<std::uint64_t> intersection_members(std::size_t s, std::size_t t,
                                                  std::uint64_t bound) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 0;; ++k) {
      std::uint64_t c;
      try {
        c = detail::prefix_code(labels_.at(s), k);
      } catch (const Error&) {
        break;
      }
      if (c > bound) break;
      std::uint64_t dummy;
      if (detail::decodes_to_prefix(labels_.at(t), c, &dummy)) out.push_back(c);
    }
    return out;
  }

 private:
  std::vector<BinaryPattern> labels_;
};

/// The countable-accumulation building block: value ratio^m on cell m of
/// the label's member set, 0 elsewhere. The accumulation set is the full
/// value ladder {ratio^m : m >= 0} together with 0.
///
/// Evaluation is a pure function of (label, n); concurrent readers always
/// observe identical answers.
class LadderSequence {
 public:
  LadderSequence(BinaryPattern label, Rat ratio)
      : label_(std::move(label)), ratio_(ratio) {
    require(ratio > Rat(0) && ratio < Rat(1), "invalid-ratio",
            "ladder ratio must lie strictly between 0 and 1");
  }

  const BinaryPattern& label() const { return label_; }
  const Rat& ratio() const { return ratio_; }

  /// Ladder value c_m.
  Rat rung(std::uint64_t m) const { return ratio_.pow(static_cast<unsigned>(m)); }

  /// Cell index of member #k (0-based position in the enumeration of the
  /// base set).
  static std::uint64_t cell_of_index(std::uint64_t k) {
    return detail::ladder_cell_of_index(k);
  }

  Rat at(std::uint64_t n) const {
    std::uint64_t k;
    if (!detail::decodes_to_prefix(label_, n, &k)) return Rat(0);
    return rung(detail::ladder_cell_of_index(k));
  }

  std::vector<Rat> eval_prefix(std::uint64_t count) const {
    std::vector<Rat> out;
    out.reserve(count);
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(at(n));
    return out;
  }

  /// Members of cell m among the first `scan` enumeration positions.
  std::vector<std::uint64_t> cell_members(std::uint64_t m,
                                          std::uint64_t scan) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 0; k < scan; ++k)
      if (detail::ladder_cell_of_index(k) == m)
        out.push_back(detail::prefix_code(label_, k));
    return out;
  }

  /// {ratio^m : m <= truncation} plus 0 — the truncated accumulation set.
  std::vector<Rat> truncated_limits(std::uint64_t truncation) const {
    std::set<Rat> vals = {Rat(0)};
    for (std::uint64_t m = 0; m <= truncation; ++m) vals.insert(rung(m));
    return {vals.begin(), vals.end()};
  }

 private:
  BinaryPattern label_;
  Rat ratio_;
};

/// Ladder sequence over one family member, by label index.
inline LadderSequence omega_vector(const AlmostDisjointFamily& fam,
                                   std::size_t label, const Rat& ratio) {
  return LadderSequence(fam.labels().at(label), ratio);
}

/// Exact distance data for two ladder sequences.
struct LadderDistance {
  Rat distance;
  std::uint64_t witness = 0;  // index n with |x_n - y_n| = distance (if > 0)
};

/// Distinct labels with the same ratio sit at sup-distance exactly 1: both
/// take values in [0, 1], and the witness lies in the first label's top
/// cell past the shared prefix, where the other sequence vanishes.
inline LadderDistance pairwise_distance(const LadderSequence& x,
                                        const LadderSequence& y) {
  require(x.ratio() == y.ratio(), "invalid-ratio",
          "distance is defined for a common ladder ratio");
  if (x.label() == y.label()) return {Rat(0), 0};
  std::uint64_t p = x.label().shared_prefix_length(y.label());
  for (std::uint64_t k = p + 1;; ++k) {
    if (detail::ladder_cell_of_index(k) != 0) continue;
    std::uint64_t n = detail::prefix_code(x.label(), k);
    require(x.at(n) == Rat(1), "invariant-violation",
            "witness must sit on the top rung");
    require(y.at(n) == Rat(0), "invariant-violation",
            "witness must vanish on the other label");
    return {Rat(1), n};
  }
}

/// Finite combination sum a_i * ladder_i with pairwise distinct labels.
class LadderCombination {
 public:
  LadderCombination(std::vector<std::pair<Rat, LadderSequence>> terms)
      : terms_(std::move(terms)) {
    require(!terms_.empty(), "invalid-combination",
            "combination needs at least one term");
    for (const auto& [a, x] : terms_)
      require(!a.is_zero(), "invalid-combination",
              "combination coefficients must be nonzero");
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = i + 1; j < terms_.size(); ++j)
        require(terms_[i].second.label() != terms_[j].second.label(),
                "not-distinct", "combination labels must be distinct");
  }

  const std::vector<std::pair<Rat, LadderSequence>>& terms() const {
    return terms_;
  }

  Rat at(std::uint64_t n) const {
    Rat acc(0);
    for (const auto& [a, x] : terms_) acc += a * x.at(n);
    return acc;
  }

  std::vector<Rat> eval_prefix(std::uint64_t count) const {
    std::vector<Rat> out;
    out.reserve(count);
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(at(n));
    return out;
  }

  /// Predicted accumulation set truncated at rung `truncation`:
  /// {a_i * ratio^m : m <= truncation} plus 0.
  std::vector<Rat> truncated_limits(std::uint64_t truncation) const {
    std::set<Rat> vals = {Rat(0)};
    for (const auto& [a, x] : terms_)
      for (std::uint64_t m = 0; m <= truncation; ++m)
        vals.insert(a * x.rung(m));
    return {vals.begin(), vals.end()};
  }

 private:
  std::vector<std::pair<Rat, LadderSequence>> terms_;
};

inline std::vector<Rat> omega_combination_limits(const LadderCombination& c,
                                                 std::uint64_t truncation) {
  return c.truncated_limits(truncation);
}

}  // namespace accumlab

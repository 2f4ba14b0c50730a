#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/periodic_set.hpp"
#include "accumlab/rational.hpp"

namespace accumlab {

/// Cardinality of an accumulation set or of a set-arithmetic result:
/// a finite count, countably infinite, or continuum (symbolic only).
struct CardinalityClass {
  enum class Kind { Finite, CountablyInfinite, Continuum };

  Kind kind = Kind::Finite;
  std::uint64_t count = 0;  // meaningful only for Finite

  static CardinalityClass finite(std::uint64_t n) { return {Kind::Finite, n}; }
  static CardinalityClass countable() {
    return {Kind::CountablyInfinite, 0};
  }
  static CardinalityClass continuum() { return {Kind::Continuum, 0}; }

  bool is_finite() const { return kind == Kind::Finite; }

  friend bool operator==(const CardinalityClass& a, const CardinalityClass& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.count == b.count);
  }
  friend bool operator!=(const CardinalityClass& a, const CardinalityClass& b) {
    return !(a == b);
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Finite:
        return "finite(" + std::to_string(count) + ")";
      case Kind::CountablyInfinite:
        return "countably-infinite";
      default:
        return "continuum";
    }
  }
};

namespace detail {
struct ValueTable;
// Construction tag for parts already in canonical form (distinct values,
// disjoint covering cells); skips the partition re-validation.
struct CanonicalParts {};
}

/// A bounded sequence taking finitely many rational values, each on an
/// eventually periodic cell, the cells partitioning N exactly.
///
/// Canonical form: parts sorted by value ascending, equal values merged,
/// no empty cells. The accumulation set is then simply the values carried
/// by infinite cells. Construction validates the partition exactly via
/// residue algebra and rejects overlaps or gaps with "invalid-partition".
/// Instances are immutable.
class StepSequence {
 public:
  struct Part {
    Rat value;
    EventuallyPeriodicSet cell;
  };

  explicit StepSequence(std::vector<Part> parts) {
    require(!parts.empty(), "invalid-partition", "no parts given");
    // Drop empty cells, merge equal values.
    std::map<Rat, EventuallyPeriodicSet> merged;
    for (auto& p : parts) {
      if (p.cell.is_empty()) continue;
      auto it = merged.find(p.value);
      if (it == merged.end())
        merged.emplace(p.value, std::move(p.cell));
      else
        it->second = it->second.unite(p.cell);
    }
    require(!merged.empty(), "invalid-partition", "all cells empty");
    for (auto& [v, cell] : merged) parts_.push_back({v, std::move(cell)});
    validate_partition();
  }

  // Internal fast path: `parts` must already be canonical.
  StepSequence(std::vector<Part> parts, detail::CanonicalParts)
      : parts_(std::move(parts)) {}

  static StepSequence constant(const Rat& v) {
    return StepSequence({{v, EventuallyPeriodicSet::naturals()}});
  }

  const std::vector<Part>& parts() const { return parts_; }

  Rat at(std::uint64_t n) const {
    for (const auto& p : parts_)
      if (p.cell.member(n)) return p.value;
    fail("invalid-partition", "no cell contains " + std::to_string(n));
  }

  /// [x_1, ..., x_count].
  std::vector<Rat> eval_prefix(std::uint64_t count) const;

  /// Values carried by infinite cells, ascending. Always nonempty.
  std::vector<Rat> accumulation_values() const {
    std::vector<Rat> out;
    for (const auto& p : parts_)
      if (p.cell.is_infinite()) out.push_back(p.value);
    require(!out.empty(), "invalid-partition",
            "a finite partition of N must contain an infinite cell");
    return out;
  }

  CardinalityClass accumulation_card() const {
    return CardinalityClass::finite(accumulation_values().size());
  }

  /// Sup norm: the largest |value| over all nonempty cells.
  Rat sup_norm() const {
    Rat best(0);
    for (const auto& p : parts_) best = max(best, p.value.abs());
    return best;
  }

  /// lcm of the cells' moduli; the sequence is periodic mod this beyond
  /// table_threshold().
  std::uint64_t table_modulus() const {
    std::uint64_t l = 1;
    for (const auto& p : parts_) {
      l = std::lcm(l, p.cell.modulus());
      require(l <= EventuallyPeriodicSet::kModulusCap, "size-limit",
              "combined modulus exceeds cap");
    }
    return l;
  }

  std::uint64_t table_threshold() const {
    std::uint64_t t = 1;
    for (const auto& p : parts_) t = std::max(t, p.cell.threshold());
    return t;
  }

  friend bool operator==(const StepSequence& a, const StepSequence& b) {
    if (a.parts_.size() != b.parts_.size()) return false;
    for (std::size_t i = 0; i < a.parts_.size(); ++i)
      if (a.parts_[i].value != b.parts_[i].value ||
          a.parts_[i].cell != b.parts_[i].cell)
        return false;
    return true;
  }
  friend bool operator!=(const StepSequence& a, const StepSequence& b) {
    return !(a == b);
  }

 private:
  void validate_partition() const {
    std::uint64_t l = table_modulus();
    std::uint64_t thr = table_threshold();
    // Beyond every threshold, membership is pure residue pattern: each
    // residue class mod l must lie in exactly one cell.
    for (std::uint64_t r = 0; r < l; ++r) {
      std::uint64_t n = thr + ((r + l - thr % l) % l);  // smallest n >= thr, n = r mod l
      int hits = 0;
      for (const auto& p : parts_)
        if (p.cell.member(n)) ++hits;
      require(hits == 1, "invalid-partition",
              hits == 0 ? "cells do not cover N" : "cells overlap");
    }
    for (std::uint64_t n = 1; n < thr; ++n) {
      int hits = 0;
      for (const auto& p : parts_)
        if (p.cell.member(n)) ++hits;
      require(hits == 1, "invalid-partition",
              hits == 0 ? "cells do not cover N" : "cells overlap");
    }
  }

  std::vector<Part> parts_;
};

/// Re-canonicalizes a raw part list (the constructor does the same work;
/// this spelling exists for call sites holding loose parts).
inline StepSequence canonicalize(std::vector<StepSequence::Part> parts) {
  return StepSequence(std::move(parts));
}

namespace detail {

/// Dense finite description of a rational-valued sequence on N: explicit
/// values below `threshold`, one value per residue class mod `modulus`
/// beyond it. All exact linear algebra on step sequences runs through this.
struct ValueTable {
  std::uint64_t modulus = 1;
  std::uint64_t threshold = 1;
  std::vector<Rat> pattern;  // size modulus, indexed by n % modulus
  std::vector<Rat> prefix;   // values for n = 1 .. threshold-1

  static ValueTable of(const StepSequence& x) {
    ValueTable t;
    t.modulus = x.table_modulus();
    t.threshold = x.table_threshold();
    t.pattern.resize(t.modulus, Rat(0));
    for (std::uint64_t r = 0; r < t.modulus; ++r) {
      std::uint64_t n =
          t.threshold + ((r + t.modulus - t.threshold % t.modulus) % t.modulus);
      t.pattern[r] = x.at(n);
    }
    t.prefix.reserve(t.threshold - 1);
    for (std::uint64_t n = 1; n < t.threshold; ++n) t.prefix.push_back(x.at(n));
    return t;
  }

  Rat at(std::uint64_t n) const {
    if (n < threshold) return prefix[n - 1];
    return pattern[n % modulus];
  }

  /// Groups equal values back into eventually periodic cells.
  StepSequence to_sequence() const {
    std::map<Rat, std::vector<std::uint64_t>> residues_by_value;
    for (std::uint64_t r = 0; r < modulus; ++r)
      residues_by_value[pattern[r]].push_back(r);
    std::map<Rat, std::vector<std::uint64_t>> added, removed;
    for (std::uint64_t n = 1; n < threshold; ++n) {
      const Rat& actual = prefix[n - 1];
      const Rat& pat = pattern[n % modulus];
      if (actual != pat) {
        added[actual].push_back(n);
        removed[pat].push_back(n);
      }
    }
    std::vector<StepSequence::Part> parts;
    for (auto& [v, res] : residues_by_value) {
      auto add_it = added.find(v);
      auto rem_it = removed.find(v);
      parts.push_back(
          {v, EventuallyPeriodicSet::make_ap(
                  res, modulus,
                  add_it == added.end() ? std::vector<std::uint64_t>{}
                                        : add_it->second,
                  rem_it == removed.end() ? std::vector<std::uint64_t>{}
                                          : rem_it->second)});
    }
    // Values occurring only below the threshold become finite cells.
    for (auto& [v, where] : added)
      if (!residues_by_value.count(v))
        parts.push_back({v, EventuallyPeriodicSet::finite(where)});
    std::sort(parts.begin(), parts.end(),
              [](const StepSequence::Part& a, const StepSequence::Part& b) {
                return a.value < b.value;
              });
    // The grouping above is a partition by construction.
    return StepSequence(std::move(parts), CanonicalParts{});
  }
};

template <typename Fn>
ValueTable combine_tables(const std::vector<ValueTable>& tables, Fn term) {
  ValueTable out;
  for (const auto& t : tables) {
    out.modulus = std::lcm(out.modulus, t.modulus);
    require(out.modulus <= EventuallyPeriodicSet::kModulusCap, "size-limit",
            "combined modulus exceeds cap");
    out.threshold = std::max(out.threshold, t.threshold);
  }
  out.pattern.resize(out.modulus, Rat(0));
  for (std::uint64_t r = 0; r < out.modulus; ++r) {
    std::uint64_t n = out.threshold +
                      ((r + out.modulus - out.threshold % out.modulus) %
                       out.modulus);
    Rat acc(0);
    for (std::size_t i = 0; i < tables.size(); ++i)
      acc += term(i, tables[i].at(n));
    out.pattern[r] = acc;
  }
  out.prefix.reserve(out.threshold - 1);
  for (std::uint64_t n = 1; n < out.threshold; ++n) {
    Rat acc(0);
    for (std::size_t i = 0; i < tables.size(); ++i)
      acc += term(i, tables[i].at(n));
    out.prefix.push_back(acc);
  }
  return out;
}

}  // namespace detail

inline std::vector<Rat> StepSequence::eval_prefix(std::uint64_t count) const {
  auto t = detail::ValueTable::of(*this);
  std::vector<Rat> out;
  out.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n) out.push_back(t.at(n));
  return out;
}

/// Exact linear combination: the result lives on the common refinement of
/// the terms' cells and evaluates pointwise to the coefficient-weighted sum.
inline StepSequence linear_combine(
    const std::vector<std::pair<Rat, StepSequence>>& terms) {
  require(!terms.empty(), "invalid-combination",
          "linear_combine needs at least one term");
  std::vector<detail::ValueTable> tables;
  tables.reserve(terms.size());
  for (const auto& [c, x] : terms) tables.push_back(detail::ValueTable::of(x));
  auto table = detail::combine_tables(
      tables, [&](std::size_t i, const Rat& v) { return terms[i].first * v; });
  return table.to_sequence();
}

inline StepSequence scale(const Rat& c, const StepSequence& x) {
  return linear_combine({{c, x}});
}

/// sup_n |x_n - y_n|, computed exactly on the common refinement (finite
/// cells' explicit members included).
inline Rat sup_distance(const StepSequence& x, const StepSequence& y) {
  std::vector<detail::ValueTable> tables = {detail::ValueTable::of(x),
                                            detail::ValueTable::of(y)};
  auto diff = detail::combine_tables(tables, [](std::size_t i, const Rat& v) {
    return i == 0 ? v : -v;
  });
  Rat best(0);
  for (const Rat& v : diff.pattern) best = max(best, v.abs());
  for (const Rat& v : diff.prefix) best = max(best, v.abs());
  return best;
}

/// The accumulation set as (values, cardinality class).
inline std::pair<std::vector<Rat>, CardinalityClass> accumulation_set(
    const StepSequence& x) {
  auto values = x.accumulation_values();
  auto card = CardinalityClass::finite(values.size());
  return {std::move(values), card};
}

}  // namespace accumlab

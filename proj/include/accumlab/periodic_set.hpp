#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "accumlab/error.hpp"

namespace accumlab {

/// Exact, decidable encoding of a subset of N = {1, 2, 3, ...}.
///
/// Beyond `threshold` the set equals a union of residue classes mod
/// `modulus`; below it, the same pattern adjusted by the finite exception
/// lists `added` (members the pattern misses) and `removed` (pattern hits
/// excluded from the set). Canonical form: minimal modulus, no redundant
/// exceptions, minimal threshold. Two encodings of the same set compare
/// equal after construction, and intersections, unions and complements all
/// stay inside the class, so infiniteness stays decidable throughout.
///
/// Instances are immutable after construction and safe to share across
/// threads.
class EventuallyPeriodicSet {
 public:
  // Combined moduli are capped so common refinements stay desk-scale.
  static constexpr std::uint64_t kModulusCap = 1'000'000;

  EventuallyPeriodicSet() = default;  // empty set

  /// Union of residue classes with finite exception lists.
  static EventuallyPeriodicSet make_ap(std::vector<std::uint64_t> residues,
                                       std::uint64_t modulus,
                                       std::vector<std::uint64_t> added = {},
                                       std::vector<std::uint64_t> removed = {}) {
    require(modulus != 0, "invalid-modulus", "modulus must be positive");
    require(modulus <= kModulusCap, "size-limit", "modulus exceeds cap");
    for (std::uint64_t r : residues)
      require(r < modulus, "invalid-residues", "residue out of range");
    for (std::uint64_t n : added)
      require(n >= 1, "invalid-exceptions", "added element below 1");
    for (std::uint64_t n : removed)
      require(n >= 1, "invalid-exceptions", "removed element below 1");
    EventuallyPeriodicSet s;
    s.modulus_ = modulus;
    s.residues_ = std::move(residues);
    s.added_ = std::move(added);
    s.removed_ = std::move(removed);
    sort_unique(s.residues_);
    sort_unique(s.added_);
    sort_unique(s.removed_);
    for (std::uint64_t n : s.added_)
      require(!contains(s.removed_, n), "invalid-exceptions",
              "element both added and removed");
    s.canonicalize();
    return s;
  }

  static EventuallyPeriodicSet naturals() { return make_ap({0}, 1); }

  static EventuallyPeriodicSet empty_set() { return make_ap({}, 1); }

  static EventuallyPeriodicSet finite(std::vector<std::uint64_t> members) {
    return make_ap({}, 1, std::move(members));
  }

  /// Builds the set from a membership predicate known to be eventually
  /// periodic with the given modulus from the given threshold on. The
  /// pattern is sampled on [threshold, threshold + modulus); everything
  /// below the threshold is recorded exactly as exceptions.
  static EventuallyPeriodicSet from_window(
      const std::function<bool(std::uint64_t)>& member, std::uint64_t modulus,
      std::uint64_t threshold) {
    require(modulus != 0 && modulus <= kModulusCap, "size-limit",
            "window modulus out of range");
    if (threshold < 1) threshold = 1;
    std::vector<bool> pattern(modulus, false);
    for (std::uint64_t n = threshold; n < threshold + modulus; ++n)
      pattern[n % modulus] = member(n);
    std::vector<std::uint64_t> residues;
    for (std::uint64_t r = 0; r < modulus; ++r)
      if (pattern[r]) residues.push_back(r);
    std::vector<std::uint64_t> added, removed;
    for (std::uint64_t n = 1; n < threshold; ++n) {
      bool actual = member(n);
      bool pat = pattern[n % modulus];
      if (actual && !pat) added.push_back(n);
      if (!actual && pat) removed.push_back(n);
    }
    return make_ap(std::move(residues), modulus, std::move(added),
                   std::move(removed));
  }

  bool member(std::uint64_t n) const {
    require(n >= 1, "invalid-element", "naturals start at 1");
    if (n < threshold_) {
      if (contains(added_, n)) return true;
      if (contains(removed_, n)) return false;
    }
    return pattern_hit(n);
  }

  /// Infinite iff the canonical residue set is nonempty.
  bool is_infinite() const { return !residues_.empty(); }

  bool is_empty() const { return residues_.empty() && added_.empty(); }

  /// Number of members; only valid for finite sets.
  std::uint64_t finite_size() const {
    require(!is_infinite(), "not-finite", "finite_size of an infinite set");
    return added_.size();
  }

  /// First `count` members in increasing order.
  std::vector<std::uint64_t> enumerate(std::uint64_t count) const {
    std::vector<std::uint64_t> out;
    if (count == 0) return out;
    if (!is_infinite())
      require(count <= added_.size(), "insufficient-elements",
              "finite set has fewer elements than requested");
    out.reserve(count);
    // Beyond the threshold every full period contributes |residues| members,
    // so the scan below is bounded.
    std::uint64_t bound =
        threshold_ + modulus_ * (count + 2) + (added_.empty() ? 0 : added_.back());
    for (std::uint64_t n = 1; n <= bound && out.size() < count; ++n)
      if (member(n)) out.push_back(n);
    require(out.size() == count, "insufficient-elements",
            "enumeration fell short of requested count");
    return out;
  }

  EventuallyPeriodicSet intersect(const EventuallyPeriodicSet& o) const {
    return combine(o, [](bool a, bool b) { return a && b; });
  }

  EventuallyPeriodicSet unite(const EventuallyPeriodicSet& o) const {
    return combine(o, [](bool a, bool b) { return a || b; });
  }

  EventuallyPeriodicSet difference(const EventuallyPeriodicSet& o) const {
    return combine(o, [](bool a, bool b) { return a && !b; });
  }

  EventuallyPeriodicSet complement() const {
    std::vector<std::uint64_t> res;
    for (std::uint64_t r = 0; r < modulus_; ++r)
      if (!contains(residues_, r)) res.push_back(r);
    return make_ap(std::move(res), modulus_, removed_, added_);
  }

  /// Shift by -k: membership(n) of the result equals member(n + k).
  EventuallyPeriodicSet shift_down(std::uint64_t k) const {
    std::uint64_t thr = threshold_ > k ? threshold_ - k : 1;
    return from_window([&](std::uint64_t n) { return member(n + k); },
                       modulus_, thr);
  }

  /// Cell m of the partition of this (infinite) set by the 2-adic valuation
  /// of the 0-based enumeration index. Cells are pairwise disjoint, each
  /// infinite, and together cover everything but the first element (index 0
  /// has no valuation). Each cell is again eventually periodic with modulus
  /// dividing modulus * 2^(m+1).
  EventuallyPeriodicSet dyadic_cell(std::uint64_t m) const {
    require(is_infinite(), "not-infinite",
            "dyadic cells need an infinite base set");
    require(m < 20, "size-limit", "dyadic cell depth exceeds cap");
    std::uint64_t two_pow = std::uint64_t{1} << (m + 1);
    std::uint64_t cell_modulus = modulus_ * two_pow;
    require(cell_modulus <= kModulusCap, "size-limit",
            "dyadic cell modulus exceeds cap");
    std::uint64_t first = enumerate(1)[0];
    std::uint64_t thr = std::max(threshold_, first + 1);
    // One pass computing 0-based member indices; the index mod 2^(m+1) is
    // periodic in n with period cell_modulus once n >= threshold.
    std::uint64_t limit = thr + cell_modulus;
    std::vector<bool> in_cell(limit, false);
    std::uint64_t index = 0;
    bool seen_any = false;
    for (std::uint64_t n = 1; n < limit; ++n) {
      if (!member(n)) continue;
      if (seen_any) ++index;
      seen_any = true;
      // index 0 (the first element) has no valuation and lands in no cell.
      if (index >= 1 && std::countr_zero(index) == static_cast<int>(m))
        in_cell[n] = true;
    }
    return from_window([&](std::uint64_t n) { return in_cell[n]; },
                       cell_modulus, thr);
  }

  std::uint64_t modulus() const { return modulus_; }
  const std::vector<std::uint64_t>& residues() const { return residues_; }
  const std::vector<std::uint64_t>& added() const { return added_; }
  const std::vector<std::uint64_t>& removed() const { return removed_; }
  std::uint64_t threshold() const { return threshold_; }

  friend bool operator==(const EventuallyPeriodicSet& a,
                         const EventuallyPeriodicSet& b) {
    return a.modulus_ == b.modulus_ && a.threshold_ == b.threshold_ &&
           a.residues_ == b.residues_ && a.added_ == b.added_ &&
           a.removed_ == b.removed_;
  }
  friend bool operator!=(const EventuallyPeriodicSet& a,
                         const EventuallyPeriodicSet& b) {
    return !(a == b);
  }

 private:
  static void sort_unique(std::vector<std::uint64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  static bool contains(const std::vector<std::uint64_t>& v, std::uint64_t n) {
    return std::binary_search(v.begin(), v.end(), n);
  }

  bool pattern_hit(std::uint64_t n) const {
    return contains(residues_, n % modulus_);
  }

  template <typename Op>
  EventuallyPeriodicSet combine(const EventuallyPeriodicSet& o, Op op) const {
    std::uint64_t l = std::lcm(modulus_, o.modulus_);
    require(l <= kModulusCap, "size-limit", "combined modulus exceeds cap");
    std::uint64_t thr = std::max(threshold_, o.threshold_);
    return from_window(
        [&](std::uint64_t n) { return op(member(n), o.member(n)); }, l, thr);
  }

  void canonicalize() {
    // Exceptions that agree with the pattern are redundant.
    std::erase_if(added_, [&](std::uint64_t n) { return pattern_hit(n); });
    std::erase_if(removed_, [&](std::uint64_t n) { return !pattern_hit(n); });
    threshold_ = 1;
    if (!added_.empty()) threshold_ = std::max(threshold_, added_.back() + 1);
    if (!removed_.empty())
      threshold_ = std::max(threshold_, removed_.back() + 1);
    // Minimal modulus: the smallest divisor d under which the residue set is
    // shift-invariant, i.e. a union of full d-classes. Invariance under +d
    // is checked directly on the sorted residues; no per-candidate scan of
    // the whole residue space.
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t i = 1; i * i <= modulus_; ++i) {
      if (modulus_ % i != 0) continue;
      divisors.push_back(i);
      if (i != modulus_ / i) divisors.push_back(modulus_ / i);
    }
    std::sort(divisors.begin(), divisors.end());
    for (std::uint64_t d : divisors) {
      if (d == modulus_) break;
      if (residues_.size() % (modulus_ / d) != 0) continue;
      bool invariant = true;
      for (std::uint64_t r : residues_) {
        if (!contains(residues_, (r + d) % modulus_)) {
          invariant = false;
          break;
        }
      }
      if (!invariant) continue;
      std::vector<std::uint64_t> reduced;
      for (std::uint64_t r : residues_)
        if (r < d) reduced.push_back(r);
      residues_ = std::move(reduced);
      modulus_ = d;
      break;
    }
  }

  std::uint64_t modulus_ = 1;
  std::vector<std::uint64_t> residues_;
  std::vector<std::uint64_t> added_;
  std::vector<std::uint64_t> removed_;
  std::uint64_t threshold_ = 1;
};

}  // namespace accumlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "accumlab/ladder.hpp"
#include "accumlab/prng.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

// Seeded instance builders for the randomized verification suites. Values
// come off a quarter-integer grid in [-5, 5], so distinct values are at
// least 1/4 apart (the tolerant-oracle suites rely on that spacing).

struct StepSequenceOptions {
  std::vector<std::uint64_t> moduli = {4,  6,  8,  9,  10, 12, 15,
                                       16, 18, 20, 24, 30, 36, 60};
  std::uint64_t min_parts = 2;
  std::uint64_t max_parts = 6;
  bool sprinkle_exceptions = true;
};

inline std::vector<Rat> distinct_grid_values(Rng& rng, std::uint64_t count) {
  std::set<Rat> used;
  std::vector<Rat> out;
  while (out.size() < count) {
    Rat v = rng.rat_grid(-20, 20, 4);
    if (used.insert(v).second) out.push_back(v);
  }
  return out;
}

/// Partition of the residues mod `modulus` into `parts` nonempty groups.
inline std::vector<std::vector<std::uint64_t>> random_residue_partition(
    Rng& rng, std::uint64_t modulus, std::uint64_t parts) {
  std::vector<std::uint64_t> residues(modulus);
  for (std::uint64_t r = 0; r < modulus; ++r) residues[r] = r;
  rng.shuffle(residues);
  std::vector<std::vector<std::uint64_t>> groups(parts);
  for (std::uint64_t i = 0; i < modulus; ++i)
    groups[i < parts ? i : rng.below(parts)].push_back(residues[i]);
  return groups;
}

inline StepSequence random_step_sequence(Rng& rng,
                                         const StepSequenceOptions& opts = {}) {
  std::uint64_t modulus = rng.pick(opts.moduli);
  std::uint64_t hi = std::min(opts.max_parts, modulus);
  std::uint64_t parts = opts.min_parts + rng.below(hi - opts.min_parts + 1);
  auto groups = random_residue_partition(rng, modulus, parts);
  auto values = distinct_grid_values(rng, parts);
  std::vector<StepSequence::Part> out;
  for (std::uint64_t i = 0; i < parts; ++i)
    out.push_back({values[i], EventuallyPeriodicSet::make_ap(groups[i], modulus)});
  if (opts.sprinkle_exceptions && parts >= 2 && rng.below(3) == 0) {
    // Move a few small elements between two cells; thresholds stay below
    // the oracle burn-in of 200.
    std::uint64_t from = rng.below(parts);
    std::uint64_t to = (from + 1 + rng.below(parts - 1)) % parts;
    std::vector<std::uint64_t> moved;
    auto members = out[from].cell.enumerate(3 + rng.below(3));
    for (std::uint64_t n : members)
      if (n < 150 && rng.coin()) moved.push_back(n);
    if (!moved.empty()) {
      out[from].cell = out[from].cell.difference(
          EventuallyPeriodicSet::finite(moved));
      out[to].cell =
          out[to].cell.unite(EventuallyPeriodicSet::finite(moved));
    }
  }
  return StepSequence(std::move(out));
}

/// Dominant pair: y on `rows` cells, x on `cols` < rows cells that are
/// unions of y's cells, so the interaction count equals |L_y| exactly.
struct DominantPair {
  StepSequence x;
  StepSequence y;
  std::uint64_t cols = 0;
  std::uint64_t rows = 0;
};

inline DominantPair random_dominant_pair(Rng& rng) {
  std::vector<std::uint64_t> moduli = {8, 12, 16, 18, 24, 30, 36, 48, 60};
  std::uint64_t modulus = rng.pick(moduli);
  std::uint64_t rows = 3 + rng.below(std::min<std::uint64_t>(modulus, 6) - 2);
  std::uint64_t cols = 2 + rng.below(rows - 2);
  auto groups = random_residue_partition(rng, modulus, rows);
  auto y_values = distinct_grid_values(rng, rows);
  std::sort(y_values.begin(), y_values.end());
  std::vector<StepSequence::Part> y_parts;
  for (std::uint64_t j = 0; j < rows; ++j)
    y_parts.push_back(
        {y_values[j], EventuallyPeriodicSet::make_ap(groups[j], modulus)});

  // Surjective assignment of rows onto columns.
  std::vector<std::uint64_t> owner(rows);
  for (std::uint64_t j = 0; j < rows; ++j)
    owner[j] = j < cols ? j : rng.below(cols);
  rng.shuffle(owner);
  std::vector<EventuallyPeriodicSet> col_cells(
      cols, EventuallyPeriodicSet::empty_set());
  for (std::uint64_t j = 0; j < rows; ++j)
    col_cells[owner[j]] = col_cells[owner[j]].unite(y_parts[j].cell);
  auto x_values = distinct_grid_values(rng, cols);
  std::vector<StepSequence::Part> x_parts;
  for (std::uint64_t l = 0; l < cols; ++l)
    x_parts.push_back({x_values[l], col_cells[l]});
  return {StepSequence(std::move(x_parts)), StepSequence(std::move(y_parts)),
          cols, rows};
}

/// Nonconstant sequence on a 2^a*3^b modulus with value gaps >= 1/4 and sup
/// norm <= 5 (the decrement suite's preconditions).
inline StepSequence random_decrement_target(Rng& rng) {
  std::vector<std::uint64_t> moduli = {4, 6, 8, 9, 12, 16, 18, 24, 36};
  std::uint64_t modulus = rng.pick(moduli);
  std::uint64_t parts =
      2 + rng.below(std::min<std::uint64_t>(modulus, 5) - 1);
  auto groups = random_residue_partition(rng, modulus, parts);
  auto values = distinct_grid_values(rng, parts);
  std::vector<StepSequence::Part> out;
  for (std::uint64_t i = 0; i < parts; ++i)
    out.push_back({values[i], EventuallyPeriodicSet::make_ap(groups[i], modulus)});
  return StepSequence(std::move(out));
}

/// Family for the product-bound suite: sizes <= 4, per-member cards <= 6,
/// moduli drawn from a pool with lcm 360.
inline std::vector<StepSequence> random_bound_family(Rng& rng,
                                                     std::uint64_t size) {
  StepSequenceOptions opts;
  opts.moduli = {2, 3, 4, 5, 6, 8, 9, 12};
  opts.max_parts = 6;
  opts.sprinkle_exceptions = false;
  std::vector<StepSequence> out;
  for (std::uint64_t i = 0; i < size; ++i)
    out.push_back(random_step_sequence(rng, opts));
  return out;
}

/// Family of 3 sequences on pairwise coprime moduli, each with 2-3 values:
/// generic combinations multiply the cardinalities, guaranteeing overflow
/// past n = 3.
inline std::vector<StepSequence> random_peel_family(Rng& rng) {
  std::vector<std::vector<std::uint64_t>> pools = {
      {2, 4}, {3, 9}, {5, 7}};
  std::vector<StepSequence> out;
  for (auto& pool : pools) {
    std::uint64_t modulus = rng.pick(pool);
    std::uint64_t parts = 2 + rng.below(std::min<std::uint64_t>(modulus, 3) - 1);
    auto groups = random_residue_partition(rng, modulus, parts);
    auto values = distinct_grid_values(rng, parts);
    std::vector<StepSequence::Part> ps;
    for (std::uint64_t i = 0; i < parts; ++i)
      ps.push_back({values[i], EventuallyPeriodicSet::make_ap(groups[i], modulus)});
    out.push_back(StepSequence(std::move(ps)));
  }
  return out;
}

/// Five binary patterns with pairwise distinct three-bit prefixes, so member
/// sets share at most the codes of prefixes of length <= 2.
inline std::vector<BinaryPattern> random_pattern_family(Rng& rng,
                                                        std::size_t count) {
  require(count <= 8, "invalid-bound", "at most 8 distinct 3-bit prefixes");
  std::vector<std::uint64_t> heads = {0, 1, 2, 3, 4, 5, 6, 7};
  rng.shuffle(heads);
  std::vector<std::string> periods = {"0", "1", "01", "10", "011", "001"};
  std::vector<BinaryPattern> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string prefix;
    for (int b = 2; b >= 0; --b)
      prefix.push_back(((heads[i] >> b) & 1) ? '1' : '0');
    out.emplace_back(prefix, periods[rng.below(periods.size())]);
  }
  return out;
}

inline Rat nonzero_grid_coef(Rng& rng) {
  Rat c(0);
  while (c.is_zero()) c = rng.rat_grid(-12, 12, 1 + rng.below(4));
  return c;
}

}  // namespace accumlab

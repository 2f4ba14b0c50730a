#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/sequence_rule.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

/// A step sequence with exactly `card` accumulation points: values
/// 0, 1, ..., card-1 on residue classes mod `modulus` (modulus defaults to
/// `card`; a larger modulus folds the surplus residues into the last cell).
inline StepSequence step_with_card(std::uint64_t card,
                                   std::optional<std::vector<Rat>> values =
                                       std::nullopt,
                                   std::uint64_t modulus = 0) {
  require(card >= 1, "invalid-cardinality", "need at least one value");
  if (modulus == 0) modulus = card;
  require(modulus >= card, "invalid-modulus",
          "modulus must offer at least `card` residue classes");
  std::vector<Rat> vals;
  if (values) {
    vals = *values;
    require(vals.size() == card, "invalid-cardinality",
            "value list length must equal card");
  } else {
    for (std::uint64_t i = 0; i < card; ++i)
      vals.push_back(Rat(static_cast<std::int64_t>(i)));
  }
  std::vector<StepSequence::Part> parts;
  for (std::uint64_t i = 0; i < card; ++i) {
    std::vector<std::uint64_t> res;
    if (i + 1 < card) {
      res.push_back(i);
    } else {
      for (std::uint64_t r = i; r < modulus; ++r) res.push_back(r);
    }
    parts.push_back({vals[i], EventuallyPeriodicSet::make_ap(res, modulus)});
  }
  return StepSequence(std::move(parts));
}

/// One step of the certified-basis audit trail: an exact inequality with the
/// numbers spelled out.
struct Certificate {
  std::string text;
  bool holds = false;
};

/// Inductively built family whose nonzero combinations have accumulation
/// counts certified to avoid the windows [n_k, n_{k+1}) selected by
/// `window_keys`. Greedy-minimal at every step.
struct BasisReport {
  std::vector<StepSequence> basis;
  std::vector<std::uint64_t> cards;        // |L_{x_r}| per member
  std::vector<std::uint64_t> moduli;       // pairwise coprime cell moduli
  std::vector<std::uint64_t> window_keys;  // selected window indices, increasing
  std::vector<Certificate> certificates;
  SequenceRule rule = SequenceRule::affine(1, 0);
};

namespace detail {

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
  require(b == 0 || a <= ~std::uint64_t{0} / b, "overflow",
          "product exceeds 64-bit range");
  return a * b;
}

/// Smallest k with n_k > bound.
inline std::uint64_t first_index_above(const SequenceRule& rule,
                                       std::uint64_t bound) {
  auto bi = rule.block_index(bound);  // largest k with n_k <= bound
  return bi ? *bi + 1 : 1;
}

}  // namespace detail

/// Builds the size-`r` certified basis for the given boundary rule.
///
/// Step 1 fixes card 2; step j takes the smallest card with
/// card / (prod of previous cards) >= n_{k_{j-1}+1} and then the smallest
/// window key k_j with n_{k_j} > product of all cards so far. Cells live on
/// pairwise coprime moduli so every combined residue class is infinite,
/// which both realizes the product upper bound and keeps the family
/// linearly independent.
inline BasisReport certified_basis(const SequenceRule& rule, std::uint64_t r) {
  require(r >= 1, "invalid-cardinality", "basis size must be >= 1");
  require(rule.value(2) > rule.value(1), "invalid-gaps",
          "boundary rule must be strictly increasing");
  constexpr std::uint64_t kCap = EventuallyPeriodicSet::kModulusCap;

  BasisReport out;
  out.rule = rule;
  std::uint64_t product = 1;  // product of cards so far
  std::uint64_t lcm_moduli = 1;
  for (std::uint64_t j = 1; j <= r; ++j) {
    std::uint64_t card;
    if (j == 1) {
      card = 2;
    } else {
      std::uint64_t target = rule.value(out.window_keys.back() + 1);
      card = detail::checked_mul_u64(product, target);
      require(card <= kCap, "size-limit",
              "basis cardinality exceeds the modulus cap");
      out.certificates.push_back(
          {std::to_string(card) + "/" + std::to_string(product) + " = " +
               std::to_string(card / product) +
               " >= rule(key[" + std::to_string(j - 2) + "]+1) = " +
               std::to_string(target),
           card / product >= target});
    }
    // Smallest modulus >= card coprime to everything chosen before.
    std::uint64_t modulus = card;
    while (std::gcd(modulus, lcm_moduli) != 1) ++modulus;
    require(detail::checked_mul_u64(lcm_moduli, modulus) <= kCap, "size-limit",
            "combined basis modulus exceeds the cap");
    lcm_moduli *= modulus;
    product = detail::checked_mul_u64(product, card);
    std::uint64_t key = detail::first_index_above(rule, product);
    std::uint64_t key_value_text = 0;
    bool key_holds = false;
    try {
      key_value_text = rule.value(key);
      key_holds = key_value_text > product;
    } catch (const Error&) {
      key_holds = true;  // value beyond 64 bits is certainly > product
    }
    out.certificates.push_back(
        {"rule(key[" + std::to_string(j - 1) + "]) = " +
             (key_value_text ? std::to_string(key_value_text)
                             : std::string("(beyond 2^64)")) +
             " > " + std::to_string(product),
         key_holds});
    require(out.window_keys.empty() || key > out.window_keys.back(),
            "invariant-violation", "window keys must increase");
    out.cards.push_back(card);
    out.moduli.push_back(modulus);
    out.window_keys.push_back(key);
    out.basis.push_back(step_with_card(card, std::nullopt, modulus));
  }
  for (const auto& c : out.certificates)
    require(c.holds, "invariant-violation", "certificate failed: " + c.text);
  return out;
}

/// Exact |L_z| for z = sum coefs[i] * basis[i], using the coprime-moduli
/// structure: every cell combination is infinite, so the accumulation set is
/// the full value grid image. Runs in O(prod cards) without building the
/// refinement.
inline std::uint64_t basis_combination_card(const BasisReport& report,
                                            const std::vector<Rat>& coefs) {
  require(coefs.size() == report.basis.size(), "invalid-combination",
          "coefficient count must match the basis size");
  bool any = false;
  for (const auto& c : coefs) any = any || !c.is_zero();
  require(any, "invalid-combination", "all-zero combination");
  // Clear denominators so the grid sums stay in plain integers.
  std::int64_t denom_lcm = 1;
  for (const auto& c : coefs)
    denom_lcm = std::lcm(denom_lcm, c.den());
  std::vector<std::int64_t> scaled;
  for (const auto& c : coefs)
    scaled.push_back(c.num() * (denom_lcm / c.den()));
  std::vector<std::int64_t> sums = {0};
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (scaled[i] == 0) continue;
    std::vector<std::int64_t> next;
    next.reserve(sums.size() * report.cards[i]);
    for (std::int64_t base : sums)
      for (std::uint64_t g = 0; g < report.cards[i]; ++g)
        next.push_back(base + scaled[i] * static_cast<std::int64_t>(g));
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sums.size();
}

/// Checks the two window properties of a combination: the count avoids
/// every selected window [n_k, n_{k+1}), and at the top nonzero index j it
/// sits in the certified sandwich
///   cards[j]/(cards[0]...cards[j-1]) <= |L_z| <= cards[0]...cards[j] <
///   rule(key[j]).
struct WindowMembership {
  bool ok = false;
  std::uint64_t card = 0;
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  bool avoids_windows = false;
  bool sandwich = false;
};

inline WindowMembership verify_window_membership(const BasisReport& report,
                                                 const std::vector<Rat>& coefs) {
  WindowMembership w;
  w.card = basis_combination_card(report, coefs);
  std::size_t top = 0;
  bool any = false;
  for (std::size_t i = 0; i < coefs.size(); ++i)
    if (!coefs[i].is_zero()) {
      top = i;
      any = true;
    }
  require(any, "invalid-combination", "all-zero combination");
  std::uint64_t head = 1;
  for (std::size_t i = 0; i < top; ++i)
    head = detail::checked_mul_u64(head, report.cards[i]);
  w.lower = report.cards[top] / head;  // exact by construction
  w.upper = detail::checked_mul_u64(head, report.cards[top]);
  bool below_key = false;
  try {
    below_key = w.upper < report.rule.value(report.window_keys[top]);
  } catch (const Error&) {
    below_key = true;
  }
  w.sandwich = w.lower <= w.card && w.card <= w.upper && below_key;
  w.avoids_windows = true;
  for (std::uint64_t key : report.window_keys) {
    std::uint64_t lo, hi;
    try {
      lo = report.rule.value(key);
      hi = report.rule.value(key + 1);
    } catch (const Error&) {
      continue;  // window beyond 64 bits cannot contain a 64-bit count
    }
    if (w.card >= lo && w.card < hi) w.avoids_windows = false;
  }
  w.ok = w.sandwich && w.avoids_windows;
  return w;
}

}  // namespace accumlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/rational.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

/// Interaction data of two step sequences: the index pairs whose cells
/// intersect in an infinite set, the corresponding value points in Q^2, and
/// per-column extremes. Columns index x's accumulation values ascending,
/// rows index y's.
struct SpanInteraction {
  std::vector<Rat> x_values;  // ascending
  std::vector<Rat> y_values;  // ascending
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (col, row), lex sorted
  std::vector<std::size_t> column_min;  // col -> least interacting row
  std::vector<std::size_t> column_max;  // col -> greatest interacting row

  std::size_t pair_count() const { return pairs.size(); }

  std::vector<std::pair<Rat, Rat>> points() const {
    std::vector<std::pair<Rat, Rat>> out;
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) out.push_back({x_values[i], y_values[j]});
    return out;
  }
};

/// A vector in span{x, y} (or a longer span) together with its exact
/// accumulation count. `target_interval`, when present, is the open interval
/// the cardinality was required to land in.
struct WitnessReport {
  std::vector<Rat> coefficients;
  StepSequence witness;
  std::uint64_t cardinality = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> target_interval;
};

/// Exact interaction of x and y, computed on the common refinement.
/// Because both part families partition N, every column meets at least one
/// row and vice versa; this is checked and a violation is a hard error.
inline SpanInteraction interaction(const StepSequence& x,
                                   const StepSequence& y) {
  SpanInteraction si;
  si.x_values = x.accumulation_values();
  si.y_values = y.accumulation_values();
  auto tx = detail::ValueTable::of(x);
  auto ty = detail::ValueTable::of(y);
  std::uint64_t l = std::lcm(tx.modulus, ty.modulus);
  require(l <= EventuallyPeriodicSet::kModulusCap, "size-limit",
          "combined modulus exceeds cap");
  std::uint64_t thr = std::max(tx.threshold, ty.threshold);
  std::set<std::pair<std::size_t, std::size_t>> found;
  for (std::uint64_t r = 0; r < l; ++r) {
    std::uint64_t n = thr + ((r + l - thr % l) % l);
    const Rat& vx = tx.at(n);
    const Rat& vy = ty.at(n);
    auto ix = std::lower_bound(si.x_values.begin(), si.x_values.end(), vx);
    auto iy = std::lower_bound(si.y_values.begin(), si.y_values.end(), vy);
    require(ix != si.x_values.end() && *ix == vx, "uncovered-column",
            "pattern value missing from accumulation set");
    require(iy != si.y_values.end() && *iy == vy, "uncovered-column",
            "pattern value missing from accumulation set");
    found.insert({static_cast<std::size_t>(ix - si.x_values.begin()),
                  static_cast<std::size_t>(iy - si.y_values.begin())});
  }
  si.pairs.assign(found.begin(), found.end());
  si.column_min.assign(si.x_values.size(), si.y_values.size());
  si.column_max.assign(si.x_values.size(), 0);
  std::vector<bool> col_seen(si.x_values.size(), false),
      row_seen(si.y_values.size(), false);
  for (auto [i, j] : si.pairs) {
    col_seen[i] = true;
    row_seen[j] = true;
    si.column_min[i] = std::min(si.column_min[i], j);
    si.column_max[i] = std::max(si.column_max[i], j);
  }
  for (bool b : col_seen)
    require(b, "uncovered-column", "an x-cell meets no y-cell infinitely");
  for (bool b : row_seen)
    require(b, "uncovered-column", "a y-cell meets no x-cell infinitely");
  return si;
}

/// |{lambda*xi_i + mu*eta_j : (i,j) interacting}|.
inline std::uint64_t combo_cardinality(const SpanInteraction& si,
                                       const Rat& lambda, const Rat& mu) {
  require(!(lambda.is_zero() && mu.is_zero()), "zero-direction",
          "(0,0) is not a direction");
  std::set<Rat> values;
  for (auto [i, j] : si.pairs)
    values.insert(lambda * si.x_values[i] + mu * si.y_values[j]);
  return values.size();
}

/// The attainable cardinality spectrum plus one witness direction per value.
///
/// Directions are enumerated exactly by slope class: two interaction points
/// collide under (lambda, mu) iff the direction is orthogonal to their
/// segment, so sweeping (0,1), (1, f) for every forbidden ratio f derived
/// from a point pair, and one generic (1, mu*) covers every cardinality any
/// direction can produce.
struct SpectrumResult {
  std::vector<std::uint64_t> cardinalities;  // sorted ascending, distinct
  std::map<std::uint64_t, std::pair<Rat, Rat>> direction;  // first witness
  Rat generic_mu;  // the deterministic generic choice
};

namespace detail {

/// Forbidden ratios f: (1, f) collapses some pair. Pairs with equal eta
/// collapse only under (0,1) and contribute nothing here; pairs with equal
/// xi contribute f = 0.
inline std::vector<Rat> forbidden_ratios(const SpanInteraction& si) {
  auto pts = si.points();
  std::set<Rat> out;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      Rat dxi = pts[b].first - pts[a].first;
      Rat deta = pts[b].second - pts[a].second;
      if (!deta.is_zero()) out.insert(-(dxi / deta));
    }
  return {out.begin(), out.end()};
}

/// Midpoint of the first bounded gap between forbidden ratios, or one past
/// the extreme when there is no bounded gap.
inline Rat generic_ratio(const std::vector<Rat>& forbidden) {
  if (forbidden.empty()) return Rat(1);
  if (forbidden.size() == 1) return forbidden[0] + Rat(1);
  return (forbidden[0] + forbidden[1]) / Rat(2);
}

}  // namespace detail

inline SpectrumResult spectrum(const SpanInteraction& si) {
  require(si.pair_count() >= 1, "zero-direction", "empty interaction");
  auto forbidden = detail::forbidden_ratios(si);
  Rat mu_star = detail::generic_ratio(forbidden);
  SpectrumResult out;
  out.generic_mu = mu_star;
  std::vector<std::pair<Rat, Rat>> candidates;
  candidates.push_back({Rat(0), Rat(1)});
  for (const Rat& f : forbidden) candidates.push_back({Rat(1), f});
  candidates.push_back({Rat(1), mu_star});
  std::set<std::uint64_t> cards;
  for (const auto& [l, m] : candidates) {
    std::uint64_t c = combo_cardinality(si, l, m);
    cards.insert(c);
    out.direction.emplace(c, std::make_pair(l, m));
  }
  out.cardinalities.assign(cards.begin(), cards.end());
  // The generic direction collapses nothing, so the maximum is always the
  // full pair count.
  require(out.cardinalities.back() == si.pair_count(), "invariant-violation",
          "generic direction failed to reach the pair count");
  return out;
}

namespace detail {

inline WitnessReport make_witness(const Rat& lambda, const Rat& mu,
                                  const StepSequence& x,
                                  const StepSequence& y) {
  StepSequence z = linear_combine({{lambda, x}, {mu, y}});
  WitnessReport r{{lambda, mu}, z, z.accumulation_values().size(),
                  std::nullopt};
  return r;
}

}  // namespace detail

/// Max witness (full pair count, generic direction) and a strict sub-max
/// witness (direction parallel to some segment of the interaction points).
inline std::pair<WitnessReport, WitnessReport> witness_max_and_submax(
    const StepSequence& x, const StepSequence& y) {
  auto si = interaction(x, y);
  require(si.pair_count() >= 2, "no-submax",
          "a single interaction pair admits no sub-max direction");
  auto spec = spectrum(si);
  auto [lmax, mmax] = spec.direction.at(si.pair_count());
  auto zmax = detail::make_witness(lmax, mmax, x, y);
  require(zmax.cardinality == si.pair_count(), "invariant-violation",
          "max witness cardinality mismatch");
  std::uint64_t smallest = spec.cardinalities.front();
  require(smallest < si.pair_count(), "invariant-violation",
          "no sub-max value in spectrum");
  auto [lsub, msub] = spec.direction.at(smallest);
  auto zsub = detail::make_witness(lsub, msub, x, y);
  require(zsub.cardinality == smallest, "invariant-violation",
          "sub-max witness cardinality mismatch");
  return {std::move(zmax), std::move(zsub)};
}

/// Result of the minimal-column-slope construction z = -C x + y.
struct GapWitnessResult {
  WitnessReport report;
  Rat slope;                     // C, the minimal inter-column slope
  std::uint64_t multiplicity;    // r = how often the minimum is attained
  std::vector<Rat> column_slopes;  // the slope set, by column index
};

/// For |L_x| = n1 < |L_y| = n2 = pair count, collapses exactly the r
/// minimal inter-column slopes: the returned cardinality is n2 - r, which
/// lands strictly inside (n2 - n1, n2).
inline GapWitnessResult gap_witness(const StepSequence& x,
                                    const StepSequence& y) {
  auto si = interaction(x, y);
  std::uint64_t n1 = si.x_values.size();
  std::uint64_t n2 = si.y_values.size();
  require(n1 < n2, "bad-order", "|L_x| must be smaller than |L_y|");
  require(si.pair_count() == n2, "not-dominant",
          "interaction count must equal |L_y|");
  require(n1 >= 2, "degenerate", "x must have at least two accumulation points");
  const auto& a = si.x_values;
  const auto& b = si.y_values;
  std::vector<Rat> slopes;
  for (std::size_t l = 0; l + 1 < n1; ++l)
    slopes.push_back((b[si.column_min[l + 1]] - b[si.column_max[l]]) /
                     (a[l + 1] - a[l]));
  Rat c = slopes[0];
  for (const Rat& s : slopes) c = min(c, s);
  std::uint64_t r = 0;
  for (const Rat& s : slopes)
    if (s == c) ++r;
  StepSequence z = linear_combine({{-c, x}, {Rat(1), y}});
  std::uint64_t card = z.accumulation_values().size();
  require(card == si.pair_count() - r, "invariant-violation",
          "gap witness cardinality != pair count - multiplicity");
  require(card > n2 - n1 && card < n2, "invariant-violation",
          "gap witness escaped the open interval");
  GapWitnessResult out{
      {{-c, Rat(1)}, std::move(z), card, std::make_pair(n2 - n1, n2)},
      c,
      r,
      std::move(slopes)};
  return out;
}

/// Result of the two-plateau decrement construction.
struct DecrementResult {
  WitnessReport report;
  Rat slope;        // C, the extreme cross-plateau slope actually used
  bool flipped;     // y was replaced by -y to escape C = 0
  StepSequence plateau;  // the x used
};

namespace detail {

/// Shared core: x must take values inside [-1-eps, -1+eps] and
/// [1-eps, 1+eps] for an eps small against y's value gaps and norm. Then
/// z = -C x + y with C the maximal cross-plateau slope (minimal instead,
/// via flipping y, when the maximum degenerates to 0) drops the pair count
/// by exactly one.
inline DecrementResult decrement_core(const StepSequence& x,
                                      const StepSequence& y, bool flipped) {
  auto yv = y.accumulation_values();
  require(yv.size() >= 2, "degenerate", "y must be nonconstant");
  Rat delta = yv[1] - yv[0];
  for (std::size_t i = 1; i + 1 < yv.size(); ++i)
    delta = min(delta, yv[i + 1] - yv[i]);
  Rat norm = y.sup_norm();
  Rat eps_cap = min(delta / (Rat(8) * norm), Rat(1, 2));
  std::vector<Rat> xv = x.accumulation_values();
  Rat eps_x(0);
  for (const Rat& v : xv)
    eps_x = max(eps_x, min((v - Rat(1)).abs(), (v + Rat(1)).abs()));
  require(eps_x <= eps_cap, "epsilon-too-large",
          "plateau spread exceeds min(delta/(8*norm), 1/2)");
  std::size_t n_neg = 0;
  while (n_neg < xv.size() && xv[n_neg] < Rat(0)) ++n_neg;
  require(n_neg > 0 && n_neg < xv.size(), "missing-plateau",
          "x needs values near both -1 and +1");

  auto si = interaction(x, y);
  // Maximal slope between a point over the negative plateau and a point
  // over the positive plateau.
  std::optional<Rat> cmax;
  for (auto [l, i] : si.pairs) {
    if (l >= n_neg) continue;
    for (auto [j, k] : si.pairs) {
      if (j < n_neg) continue;
      Rat s = (si.y_values[k] - si.y_values[i]) /
              (si.x_values[j] - si.x_values[l]);
      if (!cmax || s > *cmax) cmax = s;
    }
  }
  require(cmax.has_value(), "missing-plateau",
          "no cross-plateau interaction pair");
  if (cmax->is_zero()) {
    require(!flipped, "invariant-violation",
            "cross-plateau slope still degenerate after flipping y");
    auto res = decrement_core(x, scale(Rat(-1), y), true);
    // Express the coefficients against the caller's y, not the flipped one.
    res.report.coefficients = {res.report.coefficients[0], Rat(-1)};
    return res;
  }
  Rat c = *cmax;
  StepSequence z = linear_combine({{-c, x}, {Rat(1), y}});
  std::uint64_t card = z.accumulation_values().size();
  require(card == si.pair_count() - 1, "invariant-violation",
          "decrement witness cardinality != pair count - 1");
  return DecrementResult{{{-c, Rat(1)}, std::move(z), card, std::nullopt},
                         c,
                         flipped,
                         x};
}

}  // namespace detail

/// Decrement construction with a caller-supplied plateau sequence x.
inline DecrementResult decrement_from_plateau(const StepSequence& x,
                                              const StepSequence& y) {
  return detail::decrement_core(x, y, false);
}

/// Builds the plateau sequence internally: every cell of y is split into
/// infinite sub-cells so that all intersections are infinite, with x-values
/// exactly +-1 when eps = 0 and +-1 -+ eps/2 otherwise. eps must satisfy
/// eps <= min(delta/(8*norm), 1/2) where delta is y's least value gap.
inline DecrementResult decrement_witness(const StepSequence& y,
                                         const Rat& eps) {
  require(eps >= Rat(0), "epsilon-too-large", "eps must be nonnegative");
  auto yv = y.accumulation_values();
  require(yv.size() >= 2, "degenerate", "y must be nonconstant");
  Rat delta = yv[1] - yv[0];
  for (std::size_t i = 1; i + 1 < yv.size(); ++i)
    delta = min(delta, yv[i + 1] - yv[i]);
  Rat eps_cap = min(delta / (Rat(8) * y.sup_norm()), Rat(1, 2));
  require(eps <= eps_cap, "epsilon-too-large",
          "eps exceeds min(delta/(8*norm), 1/2)");

  std::size_t pieces = eps.is_zero() ? 2 : 4;
  std::vector<EventuallyPeriodicSet> unions(
      pieces, EventuallyPeriodicSet::empty_set());
  bool finite_assigned = false;
  for (const auto& part : y.parts()) {
    if (!part.cell.is_infinite()) {
      // Finite cells carry no interactions; park them on the first plateau.
      unions[0] = unions[0].unite(part.cell);
      finite_assigned = true;
      continue;
    }
    auto half0 = part.cell.dyadic_cell(0);
    auto half1 = part.cell.difference(half0);
    if (pieces == 2) {
      unions[0] = unions[0].unite(half0);
      unions[1] = unions[1].unite(half1);
    } else {
      auto q0 = half0.dyadic_cell(0);
      auto q1 = half0.difference(q0);
      auto q2 = half1.dyadic_cell(0);
      auto q3 = half1.difference(q2);
      unions[0] = unions[0].unite(q0);
      unions[1] = unions[1].unite(q1);
      unions[2] = unions[2].unite(q2);
      unions[3] = unions[3].unite(q3);
    }
  }
  (void)finite_assigned;
  std::vector<StepSequence::Part> parts;
  if (pieces == 2) {
    parts.push_back({Rat(-1), unions[0]});
    parts.push_back({Rat(1), unions[1]});
  } else {
    Rat h = eps / Rat(2);
    parts.push_back({Rat(-1) - h, unions[0]});
    parts.push_back({Rat(-1) + h, unions[1]});
    parts.push_back({Rat(1) - h, unions[2]});
    parts.push_back({Rat(1) + h, unions[3]});
  }
  StepSequence x(std::move(parts));
  return detail::decrement_core(x, y, false);
}

/// Lower and upper bounds n_k/(n_1...n_{k-1}) and n_1...n_k on the
/// accumulation count of a combination whose last coefficient is nonzero.
inline std::pair<Rat, std::uint64_t> combination_card_bounds(
    const std::vector<std::uint64_t>& cards) {
  require(!cards.empty(), "invalid-combination", "empty cardinality list");
  for (auto c : cards)
    require(c >= 1, "invalid-combination", "cardinalities must be >= 1");
  Rat product_head(1);
  std::uint64_t product_all = 1;
  for (std::size_t i = 0; i + 1 < cards.size(); ++i)
    product_head *= Rat(static_cast<std::int64_t>(cards[i]));
  for (auto c : cards) {
    require(product_all <= (std::uint64_t{1} << 62) / c, "overflow",
            "cardinality product exceeds 64-bit range");
    product_all *= c;
  }
  Rat lower = Rat(static_cast<std::int64_t>(cards.back())) / product_head;
  return {lower, product_all};
}

/// Result of peeling trailing terms off an overflowing combination.
struct PeelResult {
  std::vector<Rat> coefficients;  // the kept prefix of the input coefficients
  StepSequence witness;
  std::uint64_t cardinality = 0;
  std::pair<std::uint64_t, std::uint64_t> bounds;  // inclusive [n+1, n^2]
  std::uint64_t kept_terms = 0;
};

/// Given n sequences each with at most n accumulation points whose full
/// combination exceeds n points, drops trailing terms while the count stays
/// above n; the stopping combination is pinched into [n+1, n^2] by the
/// product bound applied to the last dropped term.
inline PeelResult overflow_peel(const std::vector<StepSequence>& family,
                                const std::vector<Rat>& coefs,
                                std::uint64_t n) {
  require(family.size() == n && coefs.size() == n, "invalid-family",
          "family and coefficient list must both have length n");
  for (const auto& x : family)
    require(x.accumulation_values().size() <= n, "invalid-family",
            "every family member must have at most n accumulation points");
  auto combine_prefix = [&](std::size_t count) {
    std::vector<std::pair<Rat, StepSequence>> terms;
    for (std::size_t i = 0; i < count; ++i) terms.push_back({coefs[i], family[i]});
    return linear_combine(terms);
  };
  StepSequence z = combine_prefix(n);
  std::uint64_t card = z.accumulation_values().size();
  require(card >= n + 1, "no-overflow",
          "the full combination does not exceed n accumulation points");
  std::size_t kept = n;
  while (kept > 1) {
    StepSequence next = combine_prefix(kept - 1);
    std::uint64_t next_card = next.accumulation_values().size();
    if (next_card <= n) break;
    z = std::move(next);
    card = next_card;
    --kept;
  }
  require(card >= n + 1 && card <= n * n, "invariant-violation",
          "peeling escaped [n+1, n^2]");
  PeelResult out{std::vector<Rat>(coefs.begin(), coefs.begin() + kept),
                 std::move(z),
                 card,
                 {n + 1, n * n},
                 kept};
  return out;
}

}  // namespace accumlab

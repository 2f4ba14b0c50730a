#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/periodic_set.hpp"
#include "accumlab/rational.hpp"
#include "accumlab/sequence_rule.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

/// Index set K for a gap-complement: either an eventually periodic set of
/// indices (covers finite sets and arithmetic families) or the image of a
/// divergent-gap rule. Affine rule images are normalized into the periodic
/// form at construction.
class IndexSet {
 public:
  static IndexSet from_eps(EventuallyPeriodicSet s) {
    IndexSet k;
    k.periodic_ = std::move(s);
    return k;
  }

  static IndexSet from_members(std::vector<std::uint64_t> members) {
    return from_eps(EventuallyPeriodicSet::finite(std::move(members)));
  }

  static IndexSet from_rule(const SequenceRule& rule) {
    if (!rule.gaps_divergent()) {
      // Affine images are plain arithmetic progressions.
      std::uint64_t first = rule.value(1);
      std::uint64_t step = rule.value(2) - first;
      return from_eps(EventuallyPeriodicSet::from_window(
          [&](std::uint64_t n) {
            return n >= first && (n - first) % step == 0;
          },
          step, first + 1));
    }
    IndexSet k;
    k.rule_ = rule;
    return k;
  }

  bool is_image() const { return rule_.has_value(); }

  bool member(std::uint64_t k) const {
    if (rule_) return rule_->hits(k);
    return periodic_.member(k);
  }

  bool is_finite() const { return !rule_ && !periodic_.is_infinite(); }

  bool complement_finite() const {
    if (rule_) return false;
    return !periodic_.complement().is_infinite();
  }

  const EventuallyPeriodicSet& periodic() const {
    require(!rule_, "undecidable-pattern", "index set is a rule image");
    return periodic_;
  }

  std::uint64_t periodic_threshold() const {
    return rule_ ? 1 : periodic_.threshold();
  }

  std::uint64_t periodic_modulus() const {
    return rule_ ? 1 : periodic_.modulus();
  }

  std::string to_string() const {
    if (rule_) return "image(" + rule_->to_string() + ")";
    if (is_finite()) {
      std::string s = "{";
      const auto& m = periodic_.added();
      for (std::size_t i = 0; i < m.size(); ++i)
        s += (i ? "," : "") + std::to_string(m[i]);
      return s + "}";
    }
    return "periodic(mod " + std::to_string(periodic_.modulus()) + ")";
  }

 private:
  EventuallyPeriodicSet periodic_;
  std::optional<SequenceRule> rule_;
};

namespace detail {

/// Coefficients of p as given (highest degree first) evaluated at x.
inline Rat poly_eval(const std::vector<Rat>& coeffs, const Rat& x) {
  Rat acc(0);
  for (const Rat& c : coeffs) acc = acc * x + c;
  return acc;
}

/// Exact coefficients of the forward difference q(x) = p(x+1) - p(x),
/// low degree first. deg(q) = deg(p) - 1.
inline std::vector<Rat> gap_poly(const std::vector<Rat>& coeffs) {
  std::size_t d = coeffs.size() - 1;
  std::vector<Rat> a(d + 1);  // low -> high
  for (std::size_t i = 0; i <= d; ++i) a[d - i] = coeffs[i];
  // Binomial table up to degree d.
  std::vector<std::vector<std::int64_t>> binom(d + 1,
                                               std::vector<std::int64_t>(d + 1, 0));
  for (std::size_t t = 0; t <= d; ++t) {
    binom[t][0] = 1;
    for (std::size_t m = 1; m <= t; ++m)
      binom[t][m] = binom[t - 1][m - 1] + (m <= t - 1 ? binom[t - 1][m] : 0);
  }
  std::vector<Rat> q(d, Rat(0));  // low -> high, degree d-1
  for (std::size_t m = 0; m < d; ++m) {
    Rat acc(0);
    for (std::size_t t = m; t <= d; ++t) acc += a[t] * Rat(binom[t][m]);
    q[m] = acc - a[m];
  }
  return q;
}

/// Integer B such that q(n) - shift > 0 for every integer n > B, where q is
/// given low degree first with a positive leading coefficient (Cauchy root
/// bound of q - shift).
inline std::uint64_t positive_beyond(const std::vector<Rat>& q,
                                     const Rat& shift) {
  Rat lead = q.back();
  require(lead > Rat(0), "invalid-poly", "gap polynomial must eventually grow");
  Rat m(0);
  for (std::size_t i = 0; i + 1 < q.size(); ++i) m = max(m, q[i].abs());
  m = max(m, (q[0] - shift).abs());
  Rat bound = Rat(1) + m / lead;
  std::uint64_t out = 1;
  while (Rat(static_cast<std::int64_t>(out)) < bound) out *= 2;
  return out + 1;
}

}  // namespace detail

/// Symbolic subset A of {2, 3, 4, ...} with decidable membership and exact
/// shift-intersection analysis. The variants mirror the shapes the gate
/// theory distinguishes: eventually periodic families, polynomial and
/// exponential images (divergent gaps), complements of index-selected
/// windows, and explicit finite sets.
class PrescribedSet {
 public:
  struct Periodic {
    EventuallyPeriodicSet set;  // already clamped to >= 2
  };
  struct PolyImage {
    std::vector<Rat> coeffs;  // highest degree first, degree >= 1
    std::uint64_t n0 = 1;
  };
  struct ExpImage {
    std::uint64_t scale = 1;
    std::uint64_t base = 2;
    std::uint64_t n0 = 1;
  };
  struct WindowComplement {
    SequenceRule rule;
    IndexSet removed;  // K: indices of removed windows [n_k, n_{k+1})
  };
  struct FiniteSet {
    std::vector<std::uint64_t> members;  // sorted, all >= 2
  };

  using Variant =
      std::variant<Periodic, PolyImage, ExpImage, WindowComplement, FiniteSet>;

  static PrescribedSet periodic(const EventuallyPeriodicSet& s) {
    // A lives inside N \ {1}: clamp silently.
    auto clamped = s.difference(EventuallyPeriodicSet::finite({1}));
    return PrescribedSet(Periodic{std::move(clamped)});
  }

  static PrescribedSet poly_image(std::vector<Rat> coeffs, std::uint64_t n0) {
    require(coeffs.size() >= 2, "invalid-poly",
            "polynomial must have degree >= 1");
    require(coeffs.front() > Rat(0), "invalid-poly",
            "leading coefficient must be positive");
    PolyImage p{std::move(coeffs), n0};
    std::size_t degree = p.coeffs.size() - 1;
    // Integer-valued at degree+1 consecutive points => integer-valued beyond.
    for (std::uint64_t n = n0; n <= n0 + degree; ++n)
      require(
          detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(n))).is_integer(),
          "invalid-poly", "polynomial is not integer-valued from n0");
    // Strict increase from n0: the forward difference must be positive on
    // [n0, B] and stays positive past its root bound B.
    auto q = detail::gap_poly(p.coeffs);
    std::uint64_t b = detail::positive_beyond(q, Rat(0));
    for (std::uint64_t n = n0; n <= b; ++n)
      require(detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(n) + 1)) >
                  detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(n))),
              "invalid-poly", "polynomial is not strictly increasing from n0");
    Rat first = detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(n0)));
    require(first >= Rat(2), "invalid-poly", "values must be >= 2");
    return PrescribedSet(std::move(p));
  }

  static PrescribedSet exp_image(std::uint64_t scale, std::uint64_t base,
                                 std::uint64_t n0) {
    require(base >= 2 && scale >= 1, "invalid-exp",
            "exponential image needs base >= 2 and scale >= 1");
    ExpImage e{scale, base, n0};
    require(exp_value(e, n0) >= 2, "invalid-exp", "values must be >= 2");
    return PrescribedSet(std::move(e));
  }

  static PrescribedSet window_complement(const SequenceRule& rule,
                                         IndexSet removed) {
    require(rule.value(2) > rule.value(1), "invalid-gaps",
            "window boundaries must be strictly increasing");
    return PrescribedSet(WindowComplement{rule, std::move(removed)});
  }

  static PrescribedSet finite_set(std::vector<std::uint64_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members)
      require(m >= 2, "invalid-element", "prescribed sets live in N \\ {1}");
    return PrescribedSet(FiniteSet{std::move(members)});
  }

  const Variant& variant() const { return v_; }

  bool member(std::uint64_t n) const {
    if (n < 2) return false;
    if (const auto* p = std::get_if<Periodic>(&v_)) return p->set.member(n);
    if (const auto* p = std::get_if<PolyImage>(&v_)) return poly_member(*p, n);
    if (const auto* p = std::get_if<ExpImage>(&v_)) return exp_member(*p, n);
    if (const auto* p = std::get_if<WindowComplement>(&v_)) {
      auto k = p->rule.block_index(n);
      if (!k) return true;  // below n_1, no window covers n
      return !p->removed.member(*k);
    }
    const auto& f = std::get<FiniteSet>(v_);
    return std::binary_search(f.members.begin(), f.members.end(), n);
  }

  /// Divergent consecutive gaps: the gate analysis is uniform in the shift.
  bool gaps_divergent() const {
    if (const auto* p = std::get_if<PolyImage>(&v_))
      return p->coeffs.size() >= 3;  // degree >= 2
    return std::holds_alternative<ExpImage>(v_);
  }

  std::string describe() const {
    if (const auto* p = std::get_if<Periodic>(&v_))
      return "periodic(mod " + std::to_string(p->set.modulus()) + ")";
    if (const auto* p = std::get_if<PolyImage>(&v_)) {
      std::string s = "poly(";
      for (std::size_t i = 0; i < p->coeffs.size(); ++i)
        s += (i ? "," : "") + p->coeffs[i].to_string();
      return s + ")@" + std::to_string(p->n0);
    }
    if (const auto* p = std::get_if<ExpImage>(&v_)) {
      std::string s = "exp(";
      if (p->scale != 1) s += std::to_string(p->scale) + ",";
      return s + std::to_string(p->base) + ")@" + std::to_string(p->n0);
    }
    if (const auto* p = std::get_if<WindowComplement>(&v_))
      return "gaps(" + p->rule.to_string() + "; K=" + p->removed.to_string() +
             ")";
    const auto& f = std::get<FiniteSet>(v_);
    std::string s = "finite{";
    for (std::size_t i = 0; i < f.members.size(); ++i)
      s += (i ? "," : "") + std::to_string(f.members[i]);
    return s + "}";
  }

  static std::uint64_t exp_value(const ExpImage& e, std::uint64_t n) {
    std::uint64_t v = e.scale;
    for (std::uint64_t i = 0; i < n; ++i) {
      require(v <= ~std::uint64_t{0} / e.base, "overflow",
              "exponential value exceeds 64-bit range");
      v *= e.base;
    }
    return v;
  }

 private:
  explicit PrescribedSet(Variant v) : v_(std::move(v)) {}

  static bool poly_member(const PolyImage& p, std::uint64_t n) {
    // p is strictly increasing from n0; binary search the preimage.
    Rat target(static_cast<std::int64_t>(n));
    std::uint64_t lo = p.n0, hi = p.n0 + 1;
    while (detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(hi))) < target)
      hi = hi * 2 + 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(mid))) < target)
        lo = mid + 1;
      else
        hi = mid;
    }
    return detail::poly_eval(p.coeffs, Rat(static_cast<std::int64_t>(lo))) == target;
  }

  static bool exp_member(const ExpImage& e, std::uint64_t n) {
    if (n < e.scale || n % e.scale != 0) return false;
    std::uint64_t q = n / e.scale;
    std::uint64_t steps = 0;
    while (q % e.base == 0) {
      q /= e.base;
      ++steps;
    }
    return q == 1 && steps >= e.n0;
  }

  Variant v_;
};

/// Exact shift-intersection A with (A - k): the cardinality class plus the
/// finite part (all members when finite, leading members when infinite) and
/// a reason tag describing how the decision was reached.
struct ShiftIntersection {
  CardinalityClass card;
  std::vector<std::uint64_t> members;
  std::string reason;
};

namespace detail {

inline ShiftIntersection shift_periodic(const EventuallyPeriodicSet& s,
                                        std::uint64_t k) {
  auto inter = s.intersect(s.shift_down(k));
  if (inter.is_infinite()) {
    return {CardinalityClass::countable(), inter.enumerate(5), "periodicity"};
  }
  std::vector<std::uint64_t> members(inter.added().begin(),
                                     inter.added().end());
  std::string reason = s.modulus() == 2 ? "parity" : "periodicity";
  return {CardinalityClass::finite(members.size()), std::move(members),
          reason};
}

/// Evidence members for a window complement whose kept windows grow without
/// bound: walk kept windows and harvest pairs n, n+k inside one window.
inline std::vector<std::uint64_t> kept_window_members(
    const PrescribedSet& a, const SequenceRule& rule, const IndexSet& removed,
    std::uint64_t k, std::size_t want) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n + k < rule.value(1) && out.size() < want; ++n)
    if (a.member(n) && a.member(n + k)) out.push_back(n);
  for (std::uint64_t kk = 1; kk <= 10'000 && out.size() < want; ++kk) {
    if (removed.member(kk)) continue;
    std::uint64_t lo;
    try {
      lo = rule.value(kk);
    } catch (const Error&) {
      break;
    }
    for (std::uint64_t n = lo; n < lo + 6 * k + 8 && out.size() < want; ++n)
      if (a.member(n) && a.member(n + k)) out.push_back(n);
  }
  require(!out.empty(), "invariant-violation",
          "kept windows produced no shift-intersection members");
  return out;
}

}  // namespace detail

/// Cardinality class of A with (A - k), decided exactly per variant.
inline ShiftIntersection shift_intersection(const PrescribedSet& a,
                                            std::uint64_t k) {
  require(k >= 1, "invalid-shift", "shift must be >= 1");
  using PS = PrescribedSet;

  if (const auto* p = std::get_if<PS::Periodic>(&a.variant()))
    return detail::shift_periodic(p->set, k);

  if (const auto* p = std::get_if<PS::FiniteSet>(&a.variant())) {
    std::vector<std::uint64_t> members;
    for (auto m : p->members)
      if (std::binary_search(p->members.begin(), p->members.end(), m + k))
        members.push_back(m);
    return {CardinalityClass::finite(members.size()), std::move(members),
            "finite-set"};
  }

  if (const auto* p = std::get_if<PS::PolyImage>(&a.variant())) {
    if (p->coeffs.size() == 2) {
      // Degree 1: an arithmetic progression; decide via residue algebra.
      std::uint64_t step = static_cast<std::uint64_t>(p->coeffs[0].num());
      std::uint64_t start = static_cast<std::uint64_t>(
          detail::poly_eval(p->coeffs, Rat(static_cast<std::int64_t>(p->n0)))
              .num());
      auto eps = EventuallyPeriodicSet::from_window(
          [&](std::uint64_t n) {
            return n >= start && (n - start) % step == 0;
          },
          step, start + 1);
      return detail::shift_periodic(eps, k);
    }
    // Degree >= 2: a member pair n, n+k needs a forward gap <= k, which can
    // only happen below the root bound of (gap - k).
    auto q = detail::gap_poly(p->coeffs);
    std::uint64_t bound =
        detail::positive_beyond(q, Rat(static_cast<std::int64_t>(k)));
    std::vector<std::uint64_t> members;
    for (std::uint64_t n = p->n0; n <= std::max(bound, p->n0) + 1; ++n) {
      Rat v = detail::poly_eval(p->coeffs, Rat(static_cast<std::int64_t>(n)));
      std::uint64_t vi = static_cast<std::uint64_t>(v.num());
      if (a.member(vi) && a.member(vi + k)) members.push_back(vi);
    }
    return {CardinalityClass::finite(members.size()), std::move(members),
            "gap-divergence"};
  }

  if (const auto* p = std::get_if<PS::ExpImage>(&a.variant())) {
    // scale*base^e + k lands on another member only while the forward gap
    // scale*base^e*(base-1) stays <= k.
    std::vector<std::uint64_t> members;
    for (std::uint64_t e = p->n0;; ++e) {
      std::uint64_t v;
      try {
        v = PS::exp_value(*p, e);
      } catch (const Error&) {
        break;
      }
      if (v > k / (p->base - 1)) break;  // gap v*(base-1) now exceeds k
      if (a.member(v) && a.member(v + k)) members.push_back(v);
    }
    return {CardinalityClass::finite(members.size()), std::move(members),
            "gap-divergence"};
  }

  const auto& wc = std::get<PS::WindowComplement>(a.variant());
  if (wc.removed.is_finite()) {
    // Finitely many removed windows: A is cofinite in [2, inf).
    return {CardinalityClass::countable(),
            detail::kept_window_members(a, wc.rule, wc.removed, k, 5),
            "cofinite"};
  }
  if (wc.removed.complement_finite()) {
    // All but finitely many windows removed: A is finite.
    std::uint64_t max_kept = 0;
    auto kept = wc.removed.periodic().complement();
    if (!kept.is_empty()) max_kept = kept.added().back();
    std::uint64_t hi = wc.rule.value(max_kept + 2);
    std::vector<std::uint64_t> members;
    for (std::uint64_t n = 2; n <= hi; ++n)
      if (a.member(n) && a.member(n + k)) members.push_back(n);
    return {CardinalityClass::finite(members.size()), std::move(members),
            "cofinite-windows"};
  }
  if (wc.rule.gaps_divergent()) {
    // Infinitely many kept windows of diverging length: pairs n, n+k fit
    // inside a single kept window eventually.
    return {CardinalityClass::countable(),
            detail::kept_window_members(a, wc.rule, wc.removed, k, 5),
            "kept-windows"};
  }
  // Affine boundaries: A itself is eventually periodic when K is periodic.
  if (!wc.removed.is_image()) {
    std::uint64_t step = wc.rule.value(2) - wc.rule.value(1);
    std::uint64_t modulus = step * wc.removed.periodic_modulus();
    std::uint64_t thr = wc.rule.value(wc.removed.periodic_threshold() + 1) + 1;
    auto eps = EventuallyPeriodicSet::from_window(
        [&](std::uint64_t n) { return a.member(n); }, modulus, thr);
    return detail::shift_periodic(eps, k);
  }
  fail("undecidable-pattern",
       "affine window boundaries with a non-periodic index set");
}

/// Verdict of a necessary-condition gate. `holds == true` always comes with
/// member evidence; `holds == false` always comes with a decidable reason.
struct GateVerdict {
  std::string gate;
  bool holds = false;
  std::optional<std::uint64_t> witness_k;
  std::vector<std::uint64_t> evidence;
  std::string reason;
  std::string note;
};

namespace detail {

inline const char* kLineableNote =
    "necessary condition only: a passing gate does not establish "
    "lineability itself, which remains open in general (the even numbers "
    "being the prominent undecided case)";

inline const char* kDenseNote =
    "necessary condition only: a passing gate does not establish dense "
    "lineability itself";

}  // namespace detail

/// Necessary condition for lineability: some shift k <= k_max with A and
/// (A - k) sharing infinitely many members. Divergent-gap images fail
/// uniformly in k; the bound only limits the search for periodic shapes.
inline GateVerdict lineable_gate(const PrescribedSet& a, std::uint64_t k_max) {
  GateVerdict v;
  v.gate = "lineable-necessary";
  v.note = detail::kLineableNote;
  if (a.gaps_divergent()) {
    v.holds = false;
    v.reason = "gap-divergence";
    return v;
  }
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    auto si = shift_intersection(a, k);
    if (si.card == CardinalityClass::countable()) {
      v.holds = true;
      v.witness_k = k;
      v.evidence = si.members;
      return v;
    }
  }
  v.holds = false;
  v.reason = shift_intersection(a, 1).reason;
  v.note = std::string(detail::kLineableNote) +
           "; search bounded at k <= " + std::to_string(k_max);
  return v;
}

/// Necessary condition for dense lineability: A and (A - 1) share
/// infinitely many members.
inline GateVerdict dense_gate(const PrescribedSet& a) {
  GateVerdict v;
  v.gate = "densely-lineable-necessary";
  v.note = detail::kDenseNote;
  auto si = shift_intersection(a, 1);
  if (si.card == CardinalityClass::countable()) {
    v.holds = true;
    v.witness_k = 1;
    v.evidence = si.members;
  } else {
    v.holds = false;
    v.reason = si.reason;
  }
  return v;
}

/// [2, inf) minus the windows [n_k, n_{k+1}) selected by K.
inline PrescribedSet gap_complement_build(const SequenceRule& rule,
                                          IndexSet removed) {
  return PrescribedSet::window_complement(rule, std::move(removed));
}

}  // namespace accumlab

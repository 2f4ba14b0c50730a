#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/ladder.hpp"
#include "accumlab/rational.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

/// Knobs of the brute-force verifier. Tolerance 0 is the default for exact
/// rational prefixes; a positive tolerance exists for vanishing-perturbation
/// runs. min_recurrence separates transient values (finite cells, shared
/// prefixes) from genuine accumulation values at desk scale.
struct OracleConfig {
  std::uint64_t prefix_len = 2000;
  std::uint64_t burn_in = 200;
  Rat tolerance = Rat(0);
  std::uint32_t min_recurrence = 3;

  void validate() const {
    require(burn_in < prefix_len, "inadequate-config",
            "burn-in must be smaller than the prefix");
    require(min_recurrence >= 2, "inadequate-config",
            "min_recurrence must be at least 2");
    require(tolerance >= Rat(0), "inadequate-config",
            "tolerance must be nonnegative");
  }
};

/// One detected cluster: a representative value and how many prefix entries
/// it absorbed.
struct Cluster {
  Rat representative;
  std::uint64_t count = 0;
};

/// Single-linkage clustering of the post-burn-in values. At tolerance 0 the
/// representatives are exactly the distinct values seen at least
/// min_recurrence times; at positive tolerance adjacent values within the
/// tolerance chain into one cluster represented by its midpoint.
inline std::vector<Cluster> cluster_accumulation(const std::vector<Rat>& values,
                                                 const OracleConfig& cfg) {
  cfg.validate();
  require(values.size() == cfg.prefix_len, "inadequate-config",
          "value list length must equal prefix_len");
  std::map<Rat, std::uint64_t> counts;
  for (std::uint64_t i = cfg.burn_in; i < values.size(); ++i)
    ++counts[values[i]];
  std::vector<Cluster> out;
  if (counts.empty()) return out;
  auto it = counts.begin();
  Rat lo = it->first, hi = it->first;
  std::uint64_t total = it->second;
  auto flush = [&]() {
    if (total >= cfg.min_recurrence)
      out.push_back({(lo + hi) / Rat(2), total});
  };
  for (++it; it != counts.end(); ++it) {
    if (it->first - hi <= cfg.tolerance) {
      hi = it->first;
      total += it->second;
    } else {
      flush();
      lo = hi = it->first;
      total = it->second;
    }
  }
  flush();
  return out;
}

inline std::vector<Rat> cluster_values(const std::vector<Rat>& values,
                                       const OracleConfig& cfg) {
  std::vector<Rat> out;
  for (const auto& c : cluster_accumulation(values, cfg))
    out.push_back(c.representative);
  return out;
}

/// Independent check of a step sequence's symbolic accumulation set against
/// the clustered prefix. The config must be adequate: at least twenty full
/// periods and a burn-in covering every threshold, so that each residue
/// class recurs often enough and finite-cell values are burnt away.
inline bool check_against_symbolic(const StepSequence& x,
                                   const OracleConfig& cfg) {
  cfg.validate();
  std::uint64_t l = x.table_modulus();
  require(cfg.prefix_len >= 20 * l, "inadequate-config",
          "prefix must cover at least twenty full periods");
  require(cfg.burn_in >= x.table_threshold(), "inadequate-config",
          "burn-in must cover the exceptional prefix");
  auto clusters = cluster_values(x.eval_prefix(cfg.prefix_len), cfg);
  auto symbolic = x.accumulation_values();
  if (clusters.size() != symbolic.size()) return false;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if ((clusters[i] - symbolic[i]).abs() > cfg.tolerance) return false;
  return true;
}

namespace detail {

/// How often each rung's cell occurs among member codes <= prefix_len.
inline std::map<std::uint64_t, std::uint64_t> observable_rung_counts(
    const BinaryPattern& label, std::uint64_t prefix_len) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t k = 0; k < 64; ++k) {
    try {
      if (prefix_code(label, k) <= prefix_len)
        ++counts[ladder_cell_of_index(k)];
    } catch (const Error&) {
      break;
    }
  }
  return counts;
}

/// The truncation must match the observable horizon of the prefix: every
/// rung up to it recurs at least min_recurrence times, and no rung beyond
/// it does.
inline void require_horizon(const BinaryPattern& label,
                            std::uint64_t truncation,
                            const OracleConfig& cfg) {
  auto counts = observable_rung_counts(label, cfg.prefix_len);
  for (std::uint64_t m = 0; m <= truncation; ++m)
    require(counts.count(m) && counts[m] >= cfg.min_recurrence,
            "inadequate-config",
            "prefix too short to observe every requested rung");
  for (const auto& [m, count] : counts)
    require(m <= truncation || count < cfg.min_recurrence,
            "inadequate-config",
            "prefix observes rungs beyond the requested truncation");
}

}  // namespace detail

/// Truncated check for a ladder sequence: the clustered prefix must equal
/// {ratio^m : m <= truncation} plus 0. The truncation must be the prefix's
/// observable horizon (see require_horizon).
inline bool check_ladder_against_symbolic(const LadderSequence& x,
                                          std::uint64_t truncation,
                                          const OracleConfig& cfg) {
  cfg.validate();
  detail::require_horizon(x.label(), truncation, cfg);
  auto clusters = cluster_values(x.eval_prefix(cfg.prefix_len), cfg);
  auto expect = x.truncated_limits(truncation);
  if (clusters.size() != expect.size()) return false;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if ((clusters[i] - expect[i]).abs() > cfg.tolerance) return false;
  return true;
}

/// Truncated check for a finite ladder combination, mirroring the single
/// sequence variant: the truncation must be the observable horizon for
/// every term's label, and the clustered prefix must equal the predicted
/// truncated set.
inline bool check_combination_against_symbolic(const LadderCombination& c,
                                               std::uint64_t truncation,
                                               const OracleConfig& cfg) {
  cfg.validate();
  for (const auto& [a, x] : c.terms())
    detail::require_horizon(x.label(), truncation, cfg);
  auto clusters = cluster_values(c.eval_prefix(cfg.prefix_len), cfg);
  auto expect = c.truncated_limits(truncation);
  if (clusters.size() != expect.size()) return false;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if ((clusters[i] - expect[i]).abs() > cfg.tolerance) return false;
  return true;
}

/// The sequence x_n + amplitude/n: a vanishing perturbation of x. The
/// perturbed prefix feeds the tolerant oracle; with tolerance at least
/// amplitude/burn_in the cluster structure of x is recovered unchanged.
class VanishingPerturbation {
 public:
  VanishingPerturbation(StepSequence base, Rat amplitude)
      : base_(std::move(base)), amplitude_(amplitude) {
    require(amplitude >= Rat(0), "invalid-amplitude",
            "amplitude must be nonnegative");
  }

  Rat at(std::uint64_t n) const {
    return base_.at(n) + amplitude_ / Rat(static_cast<std::int64_t>(n));
  }

  std::vector<Rat> eval_prefix(std::uint64_t count) const {
    auto out = base_.eval_prefix(count);
    for (std::uint64_t n = 1; n <= count; ++n)
      out[n - 1] += amplitude_ / Rat(static_cast<std::int64_t>(n));
    return out;
  }

  const StepSequence& base() const { return base_; }
  const Rat& amplitude() const { return amplitude_; }

 private:
  StepSequence base_;
  Rat amplitude_;
};

inline VanishingPerturbation perturb_c0(const StepSequence& x,
                                        const Rat& amplitude) {
  return VanishingPerturbation(x, amplitude);
}

}  // namespace accumlab

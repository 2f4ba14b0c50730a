#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "accumlab/constructors.hpp"
#include "accumlab/error.hpp"
#include "accumlab/ladder.hpp"
#include "accumlab/periodic_set.hpp"
#include "accumlab/rational.hpp"
#include "accumlab/set_gates.hpp"
#include "accumlab/span_geometry.hpp"
#include "accumlab/step_sequence.hpp"

namespace accumlab {

// Wire formats. Rationals always travel as exact "p/q" strings (plain "p"
// for integers) so reports never pick up float drift; nlohmann's default
// object keeps keys sorted, which makes every dump canonical.

using Json = nlohmann::json;

inline Json to_json(const Rat& r) { return r.to_string(); }

inline Rat rat_from_json(const Json& j) {
  require(j.is_string(), "parse-error", "rational must be a \"p/q\" string");
  return Rat::parse(j.get<std::string>());
}

inline Json to_json(const EventuallyPeriodicSet& s) {
  return Json{{"mod", s.modulus()},
              {"res", s.residues()},
              {"add", s.added()},
              {"rem", s.removed()},
              {"thr", s.threshold()}};
}

inline EventuallyPeriodicSet eps_from_json(const Json& j) {
  return EventuallyPeriodicSet::make_ap(
      j.at("res").get<std::vector<std::uint64_t>>(),
      j.at("mod").get<std::uint64_t>(),
      j.value("add", std::vector<std::uint64_t>{}),
      j.value("rem", std::vector<std::uint64_t>{}));
}

inline Json to_json(const StepSequence& x) {
  Json parts = Json::array();
  for (const auto& p : x.parts())
    parts.push_back(Json{{"val", to_json(p.value)}, {"cell", to_json(p.cell)}});
  return Json{{"parts", parts}};
}

inline StepSequence step_sequence_from_json(const Json& j) {
  std::vector<StepSequence::Part> parts;
  for (const auto& p : j.at("parts"))
    parts.push_back({rat_from_json(p.at("val")), eps_from_json(p.at("cell"))});
  return StepSequence(std::move(parts));
}

inline Json to_json(const CardinalityClass& c) {
  switch (c.kind) {
    case CardinalityClass::Kind::Finite:
      return Json{{"kind", "finite"}, {"count", c.count}};
    case CardinalityClass::Kind::CountablyInfinite:
      return Json{{"kind", "countably-infinite"}};
    default:
      return Json{{"kind", "continuum"}};
  }
}

inline Json to_json(const WitnessReport& w) {
  Json j;
  if (w.coefficients.size() == 2) {
    j["lambda"] = to_json(w.coefficients[0]);
    j["mu"] = to_json(w.coefficients[1]);
  } else {
    Json coefs = Json::array();
    for (const auto& c : w.coefficients) coefs.push_back(to_json(c));
    j["coefs"] = coefs;
  }
  j["card"] = w.cardinality;
  if (w.target_interval)
    j["interval"] = Json::array(
        {w.target_interval->first, w.target_interval->second});
  j["witness"] = to_json(w.witness);
  return j;
}

inline Json to_json(const GateVerdict& v) {
  Json j{{"gate", v.gate}, {"holds", v.holds}, {"note", v.note}};
  if (v.witness_k) j["witness_k"] = *v.witness_k;
  if (!v.evidence.empty()) j["evidence"] = v.evidence;
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline Json to_json(const ShiftIntersection& s) {
  return Json{{"cardinality", to_json(s.card)},
              {"members", s.members},
              {"reason", s.reason}};
}

inline Json to_json(const BasisReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates)
    certs.push_back(Json{{"text", c.text}, {"holds", c.holds}});
  Json basis = Json::array();
  for (const auto& x : r.basis) basis.push_back(to_json(x));
  return Json{{"rule", r.rule.to_string()},
              {"cards", r.cards},
              {"moduli", r.moduli},
              {"window_keys", r.window_keys},
              {"certificates", certs},
              {"basis", basis}};
}

/// Canonical dump: sorted keys (nlohmann default), two-space indent, one
/// trailing newline. Byte-identical across runs for equal inputs.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace accumlab

#pragma once

#include <string>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/set_gates.hpp"

namespace accumlab {

// Set-expression grammar used on the command line:
//   "N"                 every integer >= 2
//   "2N", "2N+1", ...   {a*n + b : n >= 1}, clamped to >= 2
//   "poly(1,0,0)@2"     {p(n) : n >= 2}, coefficients highest degree first
//   "exp(3)@1"          {3^n : n >= 1}; "exp(2,3)@1" scales by 2
//   "gaps(k^2; K={2,7})" window complement; K may be "{...}", an AP form
//                        like "2N", or a rule like "k^2"
//   "finite{4,9,25}"    explicit finite set

namespace detail {

inline std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out.push_back(c);
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::uint64_t parse_nat(const std::string& s) {
  require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos,
          "parse-error", "bad integer: " + s);
  try {
    return std::stoull(s);
  } catch (const std::logic_error&) {
    fail("parse-error", "bad integer: " + s);
  }
}

/// {a*n + b : n >= 1} as an eventually periodic set.
inline EventuallyPeriodicSet ap_form(std::uint64_t a, std::uint64_t b) {
  require(a >= 1, "parse-error", "AP slope must be >= 1");
  std::uint64_t first = a + b;
  return EventuallyPeriodicSet::from_window(
      [&](std::uint64_t n) { return n >= first && (n - first) % a == 0; }, a,
      first + 1);
}

/// Parses "aN+b" | "aN" | "N+b" | "N"; returns false if the shape is absent.
inline bool try_parse_ap(const std::string& s, EventuallyPeriodicSet* out) {
  std::size_t npos = s.find('N');
  if (npos == std::string::npos) return false;
  std::uint64_t a = npos == 0 ? 1 : parse_nat(s.substr(0, npos));
  std::uint64_t b = 0;
  if (npos + 1 < s.size()) {
    if (s[npos + 1] != '+') return false;
    b = parse_nat(s.substr(npos + 2));
  }
  *out = ap_form(a, b);
  return true;
}

inline IndexSet parse_index_set(const std::string& text) {
  std::string s = strip_spaces(text);
  require(!s.empty(), "parse-error", "empty index set");
  if (s.front() == '{') {
    require(s.back() == '}', "parse-error", "unterminated index set");
    std::vector<std::uint64_t> members;
    std::string body = s.substr(1, s.size() - 2);
    if (!body.empty())
      for (const auto& piece : split(body, ','))
        members.push_back(parse_nat(piece));
    return IndexSet::from_members(std::move(members));
  }
  EventuallyPeriodicSet eps;
  if (try_parse_ap(s, &eps)) return IndexSet::from_eps(eps);
  return IndexSet::from_rule(SequenceRule::parse(s));
}

}  // namespace detail

inline PrescribedSet parse_set_expr(const std::string& text) {
  std::string s = detail::strip_spaces(text);
  require(!s.empty(), "parse-error", "empty set expression");

  if (s == "N")
    return PrescribedSet::periodic(EventuallyPeriodicSet::naturals());

  if (s.rfind("poly(", 0) == 0) {
    std::size_t close = s.find(')');
    require(close != std::string::npos && close + 1 < s.size() &&
                s[close + 1] == '@',
            "parse-error", "poly(...)@n0 expected: " + text);
    std::vector<Rat> coeffs;
    for (const auto& piece : detail::split(s.substr(5, close - 5), ','))
      coeffs.push_back(Rat::parse(piece));
    return PrescribedSet::poly_image(std::move(coeffs),
                                     detail::parse_nat(s.substr(close + 2)));
  }

  if (s.rfind("exp(", 0) == 0) {
    std::size_t close = s.find(')');
    require(close != std::string::npos && close + 1 < s.size() &&
                s[close + 1] == '@',
            "parse-error", "exp(...)@n0 expected: " + text);
    auto args = detail::split(s.substr(4, close - 4), ',');
    require(args.size() == 1 || args.size() == 2, "parse-error",
            "exp takes (base) or (scale,base): " + text);
    std::uint64_t scale = args.size() == 2 ? detail::parse_nat(args[0]) : 1;
    std::uint64_t base = detail::parse_nat(args.back());
    return PrescribedSet::exp_image(scale, base,
                                    detail::parse_nat(s.substr(close + 2)));
  }

  if (s.rfind("gaps(", 0) == 0) {
    require(s.back() == ')', "parse-error", "unterminated gaps(...): " + text);
    auto parts = detail::split(s.substr(5, s.size() - 6), ';');
    require(parts.size() == 2 && parts[1].rfind("K=", 0) == 0, "parse-error",
            "gaps(rule; K=...) expected: " + text);
    return gap_complement_build(SequenceRule::parse(parts[0]),
                                detail::parse_index_set(parts[1].substr(2)));
  }

  if (s.rfind("finite{", 0) == 0) {
    require(s.back() == '}', "parse-error", "unterminated finite{...}: " + text);
    std::vector<std::uint64_t> members;
    std::string body = s.substr(7, s.size() - 8);
    if (!body.empty())
      for (const auto& piece : detail::split(body, ','))
        members.push_back(detail::parse_nat(piece));
    return PrescribedSet::finite_set(std::move(members));
  }

  EventuallyPeriodicSet eps;
  if (detail::try_parse_ap(s, &eps)) return PrescribedSet::periodic(eps);
  fail("parse-error", "unrecognized set expression: " + text);
}

}  // namespace accumlab

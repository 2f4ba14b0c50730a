#include "accumlab/json_io.hpp"

#include "doctest.h"

using namespace accumlab;

namespace {

using EPS = EventuallyPeriodicSet;

StepSequence pm_one() {
  return StepSequence({{Rat(-1), EPS::make_ap({1}, 2)},
                       {Rat(1), EPS::make_ap({0}, 2)}});
}

}  // namespace

TEST_CASE("rationals serialize as exact strings") {
  CHECK(to_json(Rat(1, 2)) == "1/2");
  CHECK(to_json(Rat(-3, 4)) == "-3/4");
  CHECK(to_json(Rat(7)) == "7");
  CHECK(rat_from_json(Json("1/2")) == Rat(1, 2));
  CHECK(rat_from_json(Json("-5")) == Rat(-5));
  CHECK_THROWS_AS(rat_from_json(Json(0.5)), Error);
}

TEST_CASE("periodic set round-trip") {
  auto s = EPS::make_ap({1}, 2, {2}, {1});
  auto j = to_json(s);
  CHECK(j["mod"] == 2);
  CHECK(j["thr"] == 3);
  CHECK(eps_from_json(j) == s);
}

TEST_CASE("step sequence round-trip preserves canonical form") {
  auto x = pm_one();
  auto j = to_json(x);
  CHECK(j["parts"].size() == 2);
  CHECK(j["parts"][0]["val"] == "-1");
  CHECK(step_sequence_from_json(j) == x);
}

TEST_CASE("witness report embeds the full witness") {
  auto y = StepSequence({{Rat(0), EPS::make_ap({0, 1}, 4)},
                         {Rat(1), EPS::make_ap({2, 3}, 4)}});
  auto dec = decrement_witness(y, Rat(0));
  auto j = to_json(dec.report);
  CHECK(j["lambda"] == "-1/2");
  CHECK(j["mu"] == "1");
  CHECK(j["card"] == 3);
  auto back = step_sequence_from_json(j["witness"]);
  CHECK(back == dec.report.witness);
}

TEST_CASE("gap witness interval appears in the report") {
  auto x = StepSequence({{Rat(0), EPS::make_ap({0, 1, 2, 3}, 8)},
                         {Rat(1), EPS::make_ap({4, 5, 6, 7}, 8)}});
  auto y = StepSequence({{Rat(0), EPS::make_ap({0, 1}, 8)},
                         {Rat(1), EPS::make_ap({2, 3}, 8)},
                         {Rat(2), EPS::make_ap({4, 5}, 8)},
                         {Rat(3), EPS::make_ap({6, 7}, 8)}});
  auto j = to_json(gap_witness(x, y).report);
  CHECK(j["interval"] == Json::array({2, 4}));
}

TEST_CASE("canonical dumps are byte-stable") {
  auto j1 = to_json(pm_one());
  auto j2 = to_json(pm_one());
  CHECK(canonical_dump(j1) == canonical_dump(j2));
  CHECK(canonical_dump(j1).back() == '\n');
}

TEST_CASE("basis report serializes certificates as audit strings") {
  auto rep = certified_basis(SequenceRule::power(2), 2);
  auto j = to_json(rep);
  CHECK(j["cards"] == Json::array({2, 18}));
  CHECK(j["certificates"].size() == 3);
  for (const auto& c : j["certificates"]) CHECK(c["holds"] == true);
}

#include "accumlab/step_sequence.hpp"

#include <vector>

#include "accumlab/prng.hpp"
#include "doctest.h"

using accumlab::CardinalityClass;
using accumlab::Error;
using accumlab::EventuallyPeriodicSet;
using accumlab::linear_combine;
using accumlab::Rat;
using accumlab::Rng;
using accumlab::StepSequence;
using accumlab::sup_distance;

namespace {

using EPS = EventuallyPeriodicSet;
using Part = StepSequence::Part;

StepSequence pm_one() {
  // -1 on odds, +1 on evens.
  return StepSequence({{Rat(-1), EPS::make_ap({1}, 2)},
                       {Rat(1), EPS::make_ap({0}, 2)}});
}

StepSequence mod4_seq() {
  // 0 on {0 mod 4}, 1 on {1 mod 4}, 2 on {2,3 mod 4}.
  return StepSequence({{Rat(0), EPS::make_ap({0}, 4)},
                       {Rat(1), EPS::make_ap({1}, 4)},
                       {Rat(2), EPS::make_ap({2, 3}, 4)}});
}

}  // namespace

TEST_CASE("canonicalize merges equal values and sorts") {
  auto s = StepSequence({{Rat(1), EPS::make_ap({0}, 2)},
                         {Rat(1), EPS::make_ap({1}, 2)}});
  CHECK(s.parts().size() == 1);
  CHECK(s.parts()[0].cell == EPS::naturals());

  auto desc = StepSequence({{Rat(5), EPS::make_ap({1}, 2)},
                            {Rat(-3), EPS::make_ap({0}, 2)}});
  CHECK(desc.parts()[0].value == Rat(-3));
  CHECK(desc.parts()[1].value == Rat(5));
  for (std::uint64_t n = 1; n <= 50; ++n)
    CHECK(desc.at(n) == (n % 2 == 1 ? Rat(5) : Rat(-3)));
}

TEST_CASE("overlapping or non-covering cells are rejected") {
  CHECK_THROWS_AS(StepSequence({{Rat(0), EPS::make_ap({0}, 2)},
                                {Rat(1), EPS::make_ap({0, 1}, 2)}}),
                  Error);
  CHECK_THROWS_AS(StepSequence({{Rat(0), EPS::make_ap({0}, 2)}}), Error);
}

TEST_CASE("accumulation sets") {
  auto c5 = StepSequence::constant(Rat(5));
  CHECK(c5.accumulation_values() == std::vector<Rat>{Rat(5)});
  CHECK(c5.accumulation_card() == CardinalityClass::finite(1));

  CHECK(pm_one().accumulation_values() == std::vector<Rat>{Rat(-1), Rat(1)});

  // Three residue classes mod 3 with one made finite by exceptions: its
  // tail is absorbed into the value-0 cell.
  std::vector<std::uint64_t> small_two;  // members of {2 mod 3} below 30
  for (std::uint64_t n = 1; n < 30; ++n)
    if (n % 3 == 2) small_two.push_back(n);
  auto absorbed = EPS::make_ap({0, 2}, 3, {}, small_two);
  auto finite_cell = EPS::finite(small_two);
  auto one_cell = EPS::make_ap({1}, 3);
  auto s = StepSequence({{Rat(0), absorbed}, {Rat(2), finite_cell},
                         {Rat(1), one_cell}});
  CHECK(s.accumulation_values() == std::vector<Rat>{Rat(0), Rat(1)});

  // Oracle: distinct values occurring beyond any fixed point of a prefix.
  auto prefix = s.eval_prefix(500);
  std::vector<Rat> tail_values;
  for (std::uint64_t n = 100; n < 500; ++n) {
    if (std::find(tail_values.begin(), tail_values.end(), prefix[n]) ==
        tail_values.end())
      tail_values.push_back(prefix[n]);
  }
  CHECK(tail_values.size() == 2);
}

TEST_CASE("linear_combine identity and mod-4 worked examples") {
  auto x = pm_one();
  CHECK(linear_combine({{Rat(1), x}}) == x);

  auto y = mod4_seq();
  auto z = linear_combine({{Rat(1), x}, {Rat(1), y}});
  CHECK(z.accumulation_values() == std::vector<Rat>{Rat(0), Rat(1), Rat(3)});
  CHECK(z.accumulation_card() == CardinalityClass::finite(3));

  auto z3 = linear_combine({{Rat(3), x}, {Rat(1), y}});
  CHECK(z3.accumulation_values() ==
        std::vector<Rat>{Rat(-2), Rat(-1), Rat(3), Rat(5)});
  CHECK(z3.accumulation_card() == CardinalityClass::finite(4));

  // Brute-force oracle over the refinement mod 4.
  for (std::uint64_t n = 1; n <= 64; ++n) {
    CHECK(z.at(n) == x.at(n) + y.at(n));
    CHECK(z3.at(n) == Rat(3) * x.at(n) + y.at(n));
  }
}

TEST_CASE("eval_prefix") {
  CHECK(StepSequence::constant(Rat(5)).eval_prefix(3) ==
        std::vector<Rat>{Rat(5), Rat(5), Rat(5)});
  CHECK(pm_one().eval_prefix(4) ==
        std::vector<Rat>{Rat(-1), Rat(1), Rat(-1), Rat(1)});

  auto z = linear_combine({{Rat(1), pm_one()}, {Rat(1), mod4_seq()}});
  auto zp = z.eval_prefix(8);
  auto xp = pm_one().eval_prefix(8);
  auto yp = mod4_seq().eval_prefix(8);
  for (int i = 0; i < 8; ++i) CHECK(zp[i] == xp[i] + yp[i]);
}

TEST_CASE("sup_distance") {
  auto x = pm_one();
  CHECK(sup_distance(x, x) == Rat(0));
  CHECK(sup_distance(StepSequence::constant(Rat(1)),
                     StepSequence::constant(Rat(-1))) == Rat(2));
  CHECK(sup_distance(x, StepSequence::constant(Rat(0))) == Rat(1));
}

TEST_CASE("finite cells count toward the sup norm and sup distance") {
  // Value 100 on the single point {5}, 0 elsewhere: no accumulation point at
  // 100, but the norm and the distance to zero see it.
  auto spike = StepSequence(
      {{Rat(100), EPS::finite({5})},
       {Rat(0), EPS::naturals().difference(EPS::finite({5}))}});
  CHECK(spike.accumulation_values() == std::vector<Rat>{Rat(0)});
  CHECK(spike.sup_norm() == Rat(100));
  CHECK(sup_distance(spike, StepSequence::constant(Rat(0))) == Rat(100));
}

TEST_CASE("three-term combinations evaluate pointwise") {
  auto a = pm_one();
  auto b = mod4_seq();
  auto c = StepSequence({{Rat(-2), EPS::make_ap({0, 1}, 3)},
                         {Rat(5), EPS::make_ap({2}, 3)}});
  auto z = linear_combine({{Rat(1, 2), a}, {Rat(-1), b}, {Rat(2), c}});
  for (std::uint64_t n = 1; n <= 100; ++n)
    CHECK(z.at(n) == Rat(1, 2) * a.at(n) - b.at(n) + Rat(2) * c.at(n));
}

TEST_CASE("pointwise soundness of random combinations") {
  Rng rng(7);
  std::vector<std::uint64_t> moduli = {2, 3, 4, 6, 8, 12};
  for (int trial = 0; trial < 25; ++trial) {
    std::uint64_t m1 = rng.pick(moduli), m2 = rng.pick(moduli);
    auto mk = [&](std::uint64_t m) {
      std::vector<Part> parts;
      std::uint64_t split = 1 + rng.below(m);
      std::vector<std::uint64_t> lo, hi;
      for (std::uint64_t r = 0; r < m; ++r)
        (r < split ? lo : hi).push_back(r);
      parts.push_back({rng.rat_grid(-20, 20, 4), EPS::make_ap(lo, m)});
      if (!hi.empty()) {
        Rat v = rng.rat_grid(-20, 20, 4);
        while (v == parts[0].value) v = rng.rat_grid(-20, 20, 4);
        parts.push_back({v, EPS::make_ap(hi, m)});
      }
      return StepSequence(std::move(parts));
    };
    auto x = mk(m1);
    auto y = mk(m2);
    Rat a = rng.rat_grid(-8, 8, 2), b = rng.rat_grid(-8, 8, 2);
    auto z = linear_combine({{a, x}, {b, y}});
    auto zp = z.eval_prefix(200);
    auto xp = x.eval_prefix(200);
    auto yp = y.eval_prefix(200);
    for (int i = 0; i < 200; ++i) CHECK(zp[i] == a * xp[i] + b * yp[i]);
  }
}

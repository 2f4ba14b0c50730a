#include "accumlab/ladder.hpp"

#include <map>
#include <set>

#include "accumlab/oracle.hpp"
#include "doctest.h"

using namespace accumlab;

namespace {

BinaryPattern zeros() { return BinaryPattern::parse("bin(;0)"); }
BinaryPattern ones() { return BinaryPattern::parse("bin(;1)"); }
BinaryPattern alt01() { return BinaryPattern::parse("bin(;01)"); }

}  // namespace

TEST_CASE("binary pattern parsing and stream equality") {
  CHECK(zeros().bit(1) == false);
  CHECK(ones().bit(7) == true);
  CHECK(alt01().bit(1) == false);
  CHECK(alt01().bit(2) == true);

  // Same stream under different encodings.
  CHECK(BinaryPattern::parse("bin(0;0)") == zeros());
  CHECK(BinaryPattern::parse("bin(01;01)") == alt01());
  CHECK(BinaryPattern::parse("bin(;0101)") == alt01());
  CHECK(zeros() != ones());
  CHECK_THROWS_AS(BinaryPattern::parse("bin(1;)"), Error);
}

TEST_CASE("prefix codes enumerate the member sets") {
  AlmostDisjointFamily fam({zeros(), ones(), alt01()});
  // code of the empty prefix is 1, then "1 w" read in binary.
  CHECK(fam.enumerate(0, 4) == std::vector<std::uint64_t>{1, 2, 4, 8});
  CHECK(fam.enumerate(1, 4) == std::vector<std::uint64_t>{1, 3, 7, 15});
  CHECK(fam.enumerate(2, 4) == std::vector<std::uint64_t>{1, 2, 5, 10});
  for (std::uint64_t n : fam.enumerate(2, 10)) CHECK(fam.member(2, n));
  CHECK_FALSE(fam.member(0, 3));
}

TEST_CASE("a single-label family is trivially almost disjoint") {
  AlmostDisjointFamily one({alt01()});
  CHECK(one.labels().size() == 1);
  CHECK(one.member(0, 1));
}

TEST_CASE("almost disjointness: intersections are exactly shared prefixes") {
  AlmostDisjointFamily fam({zeros(), ones(), alt01()});
  // 000... and 111... share only the empty prefix.
  CHECK(fam.intersection_members(0, 1, 1'000'000) ==
        std::vector<std::uint64_t>{1});
  // 0101... and 000... share "" and "0": codes 1 and 2.
  CHECK(fam.intersection_members(2, 0, 1'000'000) ==
        std::vector<std::uint64_t>{1, 2});
  CHECK_THROWS_AS(AlmostDisjointFamily({zeros(), BinaryPattern::parse("bin(0;0)")}),
                  Error);
}

TEST_CASE("intersection size is stable beyond the shared prefix horizon") {
  AlmostDisjointFamily fam(
      {zeros(), alt01(), BinaryPattern::parse("bin(000;1)")});
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t t = s + 1; t < 3; ++t) {
      auto at_1e4 = fam.intersection_members(s, t, 10'000).size();
      auto at_1e5 = fam.intersection_members(s, t, 100'000).size();
      CHECK(at_1e4 == at_1e5);
    }
}

TEST_CASE("ladder cells partition the enumeration indices") {
  std::map<std::uint64_t, std::uint64_t> first_seen;
  for (std::uint64_t k = 0; k < 4096; ++k) {
    std::uint64_t m = LadderSequence::cell_of_index(k);
    if (!first_seen.count(m)) first_seen[m] = k;
  }
  // Every rung up to 4 appears twice within the first ten indices.
  for (std::uint64_t m = 0; m <= 4; ++m) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < 10; ++k)
      if (LadderSequence::cell_of_index(k) == m) ++count;
    CHECK(count == 2);
  }
  // Cells are infinite: rung m keeps recurring.
  for (std::uint64_t m = 0; m <= 6; ++m) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < 4096; ++k)
      if (LadderSequence::cell_of_index(k) == m) ++count;
    CHECK(count >= 3);
  }
}

TEST_CASE("omega_vector picks a family member by label index") {
  AlmostDisjointFamily fam({zeros(), ones()});
  auto v = omega_vector(fam, 1, Rat(1, 2));
  CHECK(v.label() == ones());
  CHECK(v.at(1) == Rat(1));  // code of the empty prefix sits in cell 0
}

TEST_CASE("ladder sequence values") {
  LadderSequence x(zeros(), Rat(1, 2));
  // First element of cell 0 carries value 1.
  auto cell0 = x.cell_members(0, 16);
  REQUIRE(!cell0.empty());
  CHECK(x.at(cell0[0]) == Rat(1));
  // Off-base points vanish.
  CHECK(x.at(3) == Rat(0));
  CHECK(x.at(5) == Rat(0));
  CHECK_THROWS_AS(LadderSequence(zeros(), Rat(1)), Error);
  CHECK_THROWS_AS(LadderSequence(zeros(), Rat(0)), Error);
}

TEST_CASE("observed ladder values on a 5000 prefix") {
  LadderSequence x(zeros(), Rat(1, 2));
  std::set<Rat> nonzero;
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    Rat v = x.at(n);
    if (!v.is_zero()) nonzero.insert(v);
  }
  // Oracle-derived: exactly the rungs up to the largest cell index among
  // members with code <= 5000.
  std::set<Rat> expect;
  for (std::uint64_t k = 0; k < 64; ++k) {
    std::uint64_t code;
    try {
      code = detail::prefix_code(zeros(), k);
    } catch (const Error&) {
      break;
    }
    if (code <= 5000) expect.insert(x.rung(LadderSequence::cell_of_index(k)));
  }
  CHECK(nonzero == expect);
  // With the front-loaded assignment that is precisely rungs 0..4.
  CHECK(nonzero == std::set<Rat>{Rat(1), Rat(1, 2), Rat(1, 4), Rat(1, 8),
                                 Rat(1, 16)});
}

TEST_CASE("pairwise distance is exactly 1 with an explicit witness") {
  LadderSequence x(zeros(), Rat(1, 2));
  LadderSequence y(ones(), Rat(1, 2));
  LadderSequence z(alt01(), Rat(1, 2));
  for (auto [a, b] : {std::pair<const LadderSequence&, const LadderSequence&>{x, y},
                      {x, z},
                      {y, z}}) {
    auto d = pairwise_distance(a, b);
    CHECK(d.distance == Rat(1));
    CHECK(a.at(d.witness) == Rat(1));
    CHECK(b.at(d.witness) == Rat(0));
    // Sup bound: both take values in [0, 1].
    for (std::uint64_t n = 1; n <= 500; ++n)
      CHECK((a.at(n) - b.at(n)).abs() <= Rat(1));
  }
  CHECK(pairwise_distance(x, LadderSequence(zeros(), Rat(1, 2))).distance ==
        Rat(0));
}

TEST_CASE("combination limits: predicted truncated set") {
  LadderSequence x(zeros(), Rat(1, 2));
  LadderSequence y(ones(), Rat(1, 2));
  LadderCombination c({{Rat(1), x}, {Rat(-2), y}});
  auto limits = c.truncated_limits(2);
  std::set<Rat> got(limits.begin(), limits.end());
  std::set<Rat> want = {Rat(1), Rat(1, 2), Rat(1, 4), Rat(-2), Rat(-1),
                        Rat(-1, 2), Rat(0)};
  CHECK(got == want);

  // Duplicate products merge: 1/2 arises from both terms.
  LadderCombination dup({{Rat(1), x}, {Rat(1, 2), y}});
  auto lim2 = dup.truncated_limits(1);
  // {1, 1/2} from x, {1/2, 1/4} from y, plus 0: four distinct values.
  CHECK(lim2.size() == 4);

  CHECK_THROWS_AS(LadderCombination({{Rat(0), x}}), Error);
  CHECK_THROWS_AS(LadderCombination({{Rat(1), x},
                                     {Rat(1), LadderSequence(zeros(), Rat(1, 2))}}),
                  Error);
}

TEST_CASE("oracle agreement for a combination on a 20000 prefix") {
  LadderSequence x(zeros(), Rat(1, 2));
  LadderSequence y(ones(), Rat(1, 2));
  LadderCombination c({{Rat(1), x}, {Rat(-2), y}});
  const std::uint64_t truncation = 4;
  OracleConfig cfg;
  cfg.prefix_len = 20'000;
  cfg.burn_in = 0;
  cfg.tolerance = Rat(0);
  cfg.min_recurrence = 2;
  auto clusters = cluster_values(c.eval_prefix(cfg.prefix_len), cfg);
  auto predicted = c.truncated_limits(truncation);
  CHECK(clusters == predicted);

  // The tolerant variant with the documented truncation tolerance agrees too.
  OracleConfig tolerant = cfg;
  tolerant.tolerance = Rat(1, 1 << (truncation + 3));  // min |a| = 1
  auto tclusters = cluster_values(c.eval_prefix(cfg.prefix_len), tolerant);
  REQUIRE(tclusters.size() == predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i)
    CHECK((tclusters[i] - predicted[i]).abs() <= tolerant.tolerance);
}

TEST_CASE("check_ladder_against_symbolic") {
  LadderSequence x(zeros(), Rat(1, 2));
  OracleConfig cfg;
  cfg.prefix_len = 20'000;
  cfg.burn_in = 0;
  cfg.min_recurrence = 2;
  CHECK(check_ladder_against_symbolic(x, 4, cfg));
  // Rung 6 first recurs far beyond this prefix.
  CHECK_THROWS_WITH_AS(check_ladder_against_symbolic(x, 6, cfg),
                       "prefix too short to observe every requested rung",
                       Error);
}

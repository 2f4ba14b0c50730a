#include "accumlab/periodic_set.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include "accumlab/prng.hpp"
#include "doctest.h"

using accumlab::Error;
using accumlab::EventuallyPeriodicSet;
using accumlab::Rng;

namespace {

using EPS = EventuallyPeriodicSet;

// Independent oracle: direct filter over a prefix of N.
std::vector<std::uint64_t> filter_prefix(const EPS& s, std::uint64_t upto) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= upto; ++n)
    if (s.member(n)) out.push_back(n);
  return out;
}

EPS evens() { return EPS::make_ap({0}, 2); }
EPS odds() { return EPS::make_ap({1}, 2); }

}  // namespace

TEST_CASE("make_ap basics") {
  CHECK(evens().member(2));
  CHECK_FALSE(evens().member(3));
  CHECK(evens().is_infinite());

  auto all = EPS::make_ap({0, 1}, 2);
  CHECK(all == EPS::naturals());
  CHECK(all.modulus() == 1);  // canonical form reduces the full residue set

  CHECK_THROWS_WITH_AS(EPS::make_ap({0}, 0), "modulus must be positive",
                       Error);
}

TEST_CASE("make_ap with exceptions keeps the canonical modulus") {
  // Odds with 1 removed and 2 added.
  auto s = EPS::make_ap({1}, 2, {2}, {1});
  CHECK(s.modulus() == 2);
  CHECK(s.threshold() == 3);

  // Oracle: direct filter.
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 1; expect.size() < 20; ++n) {
    bool odd = (n % 2) == 1;
    bool in = (odd && n != 1) || n == 2;
    if (in) expect.push_back(n);
  }
  CHECK(s.enumerate(20) == expect);
}

TEST_CASE("intersect") {
  auto empty = evens().intersect(odds());
  CHECK_FALSE(empty.is_infinite());
  CHECK(empty.is_empty());

  auto one_mod4 = EPS::make_ap({1}, 4);
  auto inter = one_mod4.intersect(odds());
  CHECK(inter.is_infinite());
  for (std::uint64_t n = 1; n <= 100; ++n)
    CHECK(inter.member(n) == (n % 4 == 1));

  auto m6 = EPS::make_ap({0}, 6);
  auto m4 = EPS::make_ap({0}, 4);
  auto m12 = m6.intersect(m4);
  CHECK(m12.is_infinite());
  // CRT oracle over one full period mod 12.
  for (std::uint64_t r = 1; r <= 24; ++r)
    CHECK(m12.member(r) == (r % 6 == 0 && r % 4 == 0));
  CHECK(m12 == EPS::make_ap({0}, 12));
}

TEST_CASE("is_infinite") {
  CHECK(EPS::naturals().is_infinite());
  CHECK_FALSE(EPS::finite({1, 2, 3}).is_infinite());
  auto s = evens().difference(EPS::finite({2, 4, 6}));
  CHECK(s.is_infinite());
  CHECK_FALSE(s.member(4));
  CHECK(s.member(8));
}

TEST_CASE("enumerate") {
  CHECK(odds().enumerate(3) == std::vector<std::uint64_t>{1, 3, 5});
  CHECK_THROWS_AS(EPS::empty_set().enumerate(1), Error);

  auto s = EPS::make_ap({2}, 5, {7});
  CHECK(s.enumerate(4) == std::vector<std::uint64_t>{2, 7, 12, 17});
  // Oracle: filter 1..20.
  auto got = s.enumerate(4);
  auto oracle = filter_prefix(s, 20);
  oracle.resize(4);
  CHECK(got == oracle);
}

TEST_CASE("dyadic_cell of N matches brute-force index valuation") {
  auto cell0 = EPS::naturals().dyadic_cell(0);
  auto cell1 = EPS::naturals().dyadic_cell(1);
  // Oracle: member k of N (0-based index k) is n = k+1; valuation of k.
  for (std::uint64_t k = 0; k < 64; ++k) {
    std::uint64_t n = k + 1;
    bool in0 = k >= 1 && std::countr_zero(k) == 0;
    bool in1 = k >= 1 && std::countr_zero(k) == 1;
    CHECK(cell0.member(n) == in0);
    CHECK(cell1.member(n) == in1);
  }
}

TEST_CASE("dyadic cells are disjoint and infinite") {
  auto c0 = evens().dyadic_cell(0);
  auto c1 = evens().dyadic_cell(1);
  CHECK(c0.intersect(c1).is_empty());
  CHECK(c0.is_infinite());
  CHECK(c1.is_infinite());

  auto odd2 = odds().dyadic_cell(2);
  CHECK(odd2.is_infinite());
  CHECK(filter_prefix(odd2, 200).size() >= 8);

  CHECK_THROWS_AS(EPS::finite({1, 2}).dyadic_cell(0), Error);
}

TEST_CASE("dyadic cells partition the base set up to known stragglers") {
  const std::uint64_t M = 3;
  for (const EPS& base : {EPS::naturals(), odds(), EPS::make_ap({0, 2}, 5)}) {
    std::vector<EPS> cells;
    for (std::uint64_t m = 0; m <= M; ++m)
      cells.push_back(base.dyadic_cell(m));
    auto members = base.enumerate(std::uint64_t{1} << (M + 2));
    for (std::uint64_t k = 0; k < members.size(); ++k) {
      int hits = 0;
      for (const auto& c : cells)
        if (c.member(members[k])) ++hits;
      bool covered = k >= 1 && std::countr_zero(k) <= static_cast<int>(M);
      CHECK(hits == (covered ? 1 : 0));
    }
  }
}

TEST_CASE("dyadic cells on exception-bearing sets match brute force") {
  Rng rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    std::uint64_t m = 1 + rng.below(12);
    std::vector<std::uint64_t> res;
    for (std::uint64_t r = 0; r < m; ++r)
      if (rng.coin()) res.push_back(r);
    if (res.empty()) res.push_back(rng.below(m));
    std::vector<std::uint64_t> add, rem;
    for (int i = 0; i < 4; ++i) {
      std::uint64_t n = 1 + rng.below(60);
      bool in_pattern = std::binary_search(res.begin(), res.end(), n % m);
      (in_pattern ? rem : add).push_back(n);
    }
    auto a = EPS::make_ap(res, m, add, rem);
    for (std::uint64_t cm = 0; cm <= 2; ++cm) {
      auto cell = a.dyadic_cell(cm);
      std::uint64_t idx = 0;
      bool seen = false;
      for (std::uint64_t n = 1; n <= 1500; ++n) {
        if (!a.member(n)) {
          CHECK_FALSE(cell.member(n));
          continue;
        }
        if (seen) ++idx;
        seen = true;
        bool expect = idx >= 1 && std::countr_zero(idx) == static_cast<int>(cm);
        CHECK(cell.member(n) == expect);
      }
    }
  }
}

TEST_CASE("canonical equality across distinct expressions of the same set") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint64_t m = 1 + rng.below(12);
    std::vector<std::uint64_t> res;
    for (std::uint64_t r = 0; r < m; ++r)
      if (rng.coin()) res.push_back(r);
    auto a = EPS::make_ap(res, m);
    // Same set expressed with a doubled modulus and noisy exceptions that
    // cancel out.
    std::vector<std::uint64_t> res2;
    for (std::uint64_t r : res) {
      res2.push_back(r);
      res2.push_back(r + m);
    }
    std::uint64_t probe = 1 + rng.below(3 * m);
    std::vector<std::uint64_t> added, removed;
    if (a.member(probe))
      added.push_back(probe);  // redundant: pattern already contains it
    else
      removed.push_back(probe);  // redundant: pattern already misses it
    auto b = EPS::make_ap(res2, 2 * m, added, removed);
    CHECK(a == b);
    // Membership agreement on a long prefix, as an independent check.
    for (std::uint64_t n = 1; n <= 10 * 2 * m; ++n)
      CHECK(a.member(n) == b.member(n));
  }
}

TEST_CASE("boolean algebra closure") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint64_t ma = 1 + rng.below(10), mb = 1 + rng.below(10);
    std::vector<std::uint64_t> ra, rb;
    for (std::uint64_t r = 0; r < ma; ++r)
      if (rng.coin()) ra.push_back(r);
    for (std::uint64_t r = 0; r < mb; ++r)
      if (rng.coin()) rb.push_back(r);
    auto a = EPS::make_ap(ra, ma, {1 + rng.below(20)});
    auto b = EPS::make_ap(rb, mb, {}, {1 + rng.below(20)});
    auto inter = a.intersect(b);
    auto uni = a.unite(b);
    auto diff = a.difference(b);
    auto comp = a.complement();
    std::uint64_t upto = 10 * std::lcm(ma, mb) + 40;
    for (std::uint64_t n = 1; n <= upto; ++n) {
      CHECK(inter.member(n) == (a.member(n) && b.member(n)));
      CHECK(uni.member(n) == (a.member(n) || b.member(n)));
      CHECK(diff.member(n) == (a.member(n) && !b.member(n)));
      CHECK(comp.member(n) == !a.member(n));
    }
  }
}

TEST_CASE("shift_down") {
  auto s = evens().shift_down(2);
  CHECK(s == evens());
  auto t = odds().shift_down(1);
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(t.member(n) == odds().member(n + 1));
}

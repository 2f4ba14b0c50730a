#include "accumlab/oracle.hpp"

#include "accumlab/prng.hpp"
#include "doctest.h"

using namespace accumlab;

namespace {

using EPS = EventuallyPeriodicSet;

StepSequence pm_one() {
  return StepSequence({{Rat(-1), EPS::make_ap({1}, 2)},
                       {Rat(1), EPS::make_ap({0}, 2)}});
}

StepSequence mod4_combo() {
  auto y = StepSequence({{Rat(0), EPS::make_ap({0}, 4)},
                         {Rat(1), EPS::make_ap({1}, 4)},
                         {Rat(2), EPS::make_ap({2, 3}, 4)}});
  return linear_combine({{Rat(1), pm_one()}, {Rat(1), y}});
}

}  // namespace

TEST_CASE("cluster_accumulation at tolerance zero") {
  OracleConfig cfg;
  cfg.prefix_len = 500;
  cfg.burn_in = 50;

  auto pm = cluster_values(pm_one().eval_prefix(500), cfg);
  CHECK(pm == std::vector<Rat>{Rat(-1), Rat(1)});

  auto c5 = cluster_values(StepSequence::constant(Rat(5)).eval_prefix(500), cfg);
  CHECK(c5 == std::vector<Rat>{Rat(5)});

  auto z = cluster_values(mod4_combo().eval_prefix(500), cfg);
  CHECK(z == std::vector<Rat>{Rat(0), Rat(1), Rat(3)});
}

TEST_CASE("min_recurrence filters transient values") {
  // Value 9 appears twice below the burn-in horizon; value 7 appears twice
  // after it, below the recurrence bar.
  std::vector<Rat> values(100, Rat(0));
  values[10] = Rat(9);
  values[11] = Rat(9);
  values[60] = Rat(7);
  values[61] = Rat(7);
  OracleConfig cfg;
  cfg.prefix_len = 100;
  cfg.burn_in = 20;
  cfg.min_recurrence = 3;
  CHECK(cluster_values(values, cfg) == std::vector<Rat>{Rat(0)});
  cfg.min_recurrence = 2;
  CHECK(cluster_values(values, cfg) == std::vector<Rat>{Rat(0), Rat(7)});
}

TEST_CASE("config validation") {
  OracleConfig cfg;
  cfg.prefix_len = 10;
  cfg.burn_in = 10;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.burn_in = 2;
  cfg.min_recurrence = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("check_against_symbolic") {
  OracleConfig cfg;
  cfg.prefix_len = 2000;
  cfg.burn_in = 200;
  CHECK(check_against_symbolic(pm_one(), cfg));
  CHECK(check_against_symbolic(mod4_combo(), cfg));

  OracleConfig tiny;
  tiny.prefix_len = 30;
  tiny.burn_in = 5;
  CHECK_THROWS_WITH_AS(check_against_symbolic(pm_one(), tiny),
                       "prefix must cover at least twenty full periods",
                       Error);
}

TEST_CASE("vanishing perturbation") {
  auto x = pm_one();
  auto p0 = perturb_c0(x, Rat(0));
  CHECK(p0.eval_prefix(50) == x.eval_prefix(50));

  auto p1 = perturb_c0(x, Rat(1));
  CHECK(p1.at(1) == Rat(0));       // -1 + 1/1
  CHECK(p1.at(2) == Rat(3, 2));    // 1 + 1/2
  CHECK_THROWS_AS(perturb_c0(x, Rat(-1)), Error);

  // Tolerant oracle recovers the clusters of the base sequence.
  OracleConfig cfg;
  cfg.prefix_len = 5000;
  cfg.burn_in = 100;
  cfg.tolerance = Rat(1, 50);
  auto clusters = cluster_accumulation(p1.eval_prefix(5000), cfg);
  CHECK(clusters.size() == x.accumulation_values().size());
  for (std::size_t i = 0; i < clusters.size(); ++i)
    CHECK((clusters[i].representative - x.accumulation_values()[i]).abs() <=
          cfg.tolerance);

  // At tolerance zero the perturbed values split into many microclusters;
  // the recurrence bar then drops them all.
  OracleConfig strict = cfg;
  strict.tolerance = Rat(0);
  auto split = cluster_values(p1.eval_prefix(5000), strict);
  CHECK(split.empty());
}

TEST_CASE("tolerant oracle equals symbolic on random step sequences") {
  Rng rng(77);
  std::vector<std::uint64_t> moduli = {2, 3, 4, 6, 8, 12};
  for (int t = 0; t < 30; ++t) {
    std::uint64_t m = rng.pick(moduli);
    std::uint64_t parts = 2 + rng.below(std::min<std::uint64_t>(m, 3));
    std::vector<std::vector<std::uint64_t>> groups(parts);
    for (std::uint64_t r = 0; r < m; ++r)
      groups[r < parts ? r : rng.below(parts)].push_back(r);
    std::vector<StepSequence::Part> ps;
    std::set<Rat> used;
    for (auto& g : groups) {
      // Grid spacing 1/4 keeps distinct values at least 1/4 apart, far above
      // the perturbation tolerance.
      Rat v = rng.rat_grid(-20, 20, 4);
      while (used.count(v)) v = rng.rat_grid(-20, 20, 4);
      used.insert(v);
      ps.push_back({v, EPS::make_ap(g, m)});
    }
    StepSequence x(std::move(ps));
    OracleConfig cfg;
    cfg.prefix_len = std::max<std::uint64_t>(2000, 20 * x.table_modulus());
    cfg.burn_in = 200;
    CHECK(check_against_symbolic(x, cfg));

    auto perturbed = perturb_c0(x, Rat(1));
    OracleConfig tol = cfg;
    tol.tolerance = Rat(1, 50);
    auto clusters = cluster_values(perturbed.eval_prefix(cfg.prefix_len), tol);
    CHECK(clusters.size() == x.accumulation_values().size());
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hats/adversary.hpp"
#include "hats/errors.hpp"
#include "hats/strategies.hpp"

using namespace hats;

namespace {

GameSpec order_game(const Poset& p, std::uint64_t k, std::uint64_t g) {
  return GameSpec{Population::finite(p.size()), Visibility::order(p), Palette::finite(k), GuessBound::at_most(g)};
}

bool entries_lose(const DefeatCertificate& c) {
  for (const auto& e : c.entries)
    if (!e.violation && std::find(e.guesses.begin(), e.guesses.end(), e.assigned) != e.guesses.end()) return false;
  return true;
}

// Block-geometric mass of colour m at logician n, written out from the formula.
double mass(std::size_t n, std::uint64_t m) {
  const double block = std::pow(2.0, static_cast<double>(n) + 2);
  return std::pow(2.0, -(static_cast<double>(n) + 2)) * std::pow(2.0, -(std::floor(m / block) + 1));
}

}  // namespace

TEST_CASE("exhaustive search") {
  // Modular sum only ever guesses colours below n, so a fourth colour beats it.
  auto spec = GameSpec::finite_game(3, 4, 2);
  auto c = exhaustive_defeat(spec, modular_sum(3), 8);
  REQUIRE(c);
  CHECK(verify_defeat(spec, modular_sum(3), *c, 8));
  CHECK(!exhaustive_defeat(GameSpec::finite_game(3, 3, 2), modular_sum(3), 8));

  // One logician with two colours and one guess always loses somewhere.
  auto solo = GameSpec::finite_game(1, 2, 2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = sampled_profile(solo, seed, 1, 2);
    auto lose = exhaustive_defeat(solo, p, 4);
    REQUIRE(lose);
    CHECK(verify_defeat(solo, p, *lose, 4));
  }
  CHECK_THROWS_AS(exhaustive_defeat(GameSpec::finite_game(6, 6, 2), modular_sum(6), 8, 1000), CapExceeded);
}

TEST_CASE("certificates") {
  auto spec = GameSpec::finite_game(3, 4, 2);
  auto c = *exhaustive_defeat(spec, modular_sum(3), 8);
  auto cert = certify(spec, modular_sum(3), c, 8);
  CHECK(cert.entries.size() == 3);
  CHECK(entries_lose(cert));
  CHECK_THROWS_AS(certify(spec, modular_sum(3), Coloring::table({0, 0, 0}), 8), std::logic_error);
}

TEST_CASE("poset adversary") {
  SUBCASE("antichain") {
    auto p = Poset::antichain(3);
    auto cert = poset_defeat(p, constant_guess({0}), 2, 1, 4);
    CHECK(cert.coloring.prefix(3) == std::vector<Color>{1, 1, 1});
  }
  SUBCASE("chain with one guess and three colours") {
    auto p = Poset::chain(4);
    auto spec = order_game(p, 3, 1);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto prof = sampled_profile(spec, seed, 1, 3);
      auto cert = poset_defeat(p, prof, 3, 1, 8);
      CHECK(verify_defeat(spec, prof, cert.coloring, 8));
      CHECK(entries_lose(cert));
      // Maximal elements are fixed first.
      CHECK(cert.entries.front().logician == 3);
    }
  }
  SUBCASE("every small poset") {
    std::size_t checked = 0;
    for (std::size_t size = 1; size <= 5; ++size)
      for (const auto& p : unlabeled_posets(size)) {
        auto spec = order_game(p, 2, 1);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          auto prof = sampled_profile(spec, seed * 977 + size, 1, 2);
          auto cert = poset_defeat(p, prof, 2, 1, 8);
          REQUIRE(verify_defeat(spec, prof, cert.coloring, 8));
          ++checked;
        }
      }
    CHECK(checked == 5 * (1 + 2 + 5 + 16 + 63));
  }
  SUBCASE("rule breakers get colour 0") {
    auto cheat = Profile("cheat", [](LogicianId self, Observer& eyes) {
      eyes.look(self);
      return std::vector<Color>{0};
    });
    auto cert = poset_defeat(Poset::chain(2), cheat, 2, 1, 4);
    CHECK(cert.coloring.prefix(2) == std::vector<Color>{0, 0});
    for (const auto& e : cert.entries) CHECK(e.violation == Rule::SelfLook);
  }
  CHECK_THROWS_AS(poset_defeat(Poset::chain(2), constant_guess({0}), 2, 2, 4), Refusal);
  CHECK_THROWS_AS(poset_defeat(Poset::chain(2), constant_guess({0}), 2, 0, 4), Refusal);
}

TEST_CASE("promise ladders") {
  CHECK(graded_ladder(3, 1).sizes == std::vector<std::uint64_t>{2, 3, 7});
  CHECK(graded_ladder(3, 2).sizes == std::vector<std::uint64_t>{3, 7, 43});
  PromiseLadder l{{2, 3}};
  CHECK(l.keeps(Coloring::table({1, 2})));
  CHECK(!l.keeps(Coloring::table({2, 0})));
}

TEST_CASE("sequential adversary") {
  SUBCASE("two logicians, single guesses") {
    GameSpec spec{Population::finite(2), Visibility::full(), Palette::finite(3), GuessBound::at_most(1)};
    PromiseLadder ladder{{2, 3}};
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto prof = sampled_profile(spec, seed, 1, 3);
      auto cert = sequential_defeat(spec, prof, ladder, 8);
      CHECK(verify_defeat(spec, prof, cert.coloring, 8));
      CHECK(ladder.keeps(cert.coloring));
      CHECK(entries_lose(cert));
    }
  }
  SUBCASE("three logicians with lists of two") {
    auto ladder = graded_ladder(3, 2);
    GameSpec spec{Population::finite(3), Visibility::full(), Palette::finite(ladder.sizes.back()),
                  GuessBound::at_most(2)};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto prof = sampled_profile(spec, seed, 2, ladder.sizes.back());
      auto cert = sequential_defeat(spec, prof, ladder, 8);
      CHECK(verify_defeat(spec, prof, cert.coloring, 8));
      CHECK(ladder.keeps(cert.coloring));
    }
  }
  SUBCASE("one logician") {
    GameSpec spec{Population::finite(1), Visibility::full(), Palette::finite(2), GuessBound::at_most(1)};
    auto cert = sequential_defeat(spec, constant_guess({0}), PromiseLadder{{2}}, 4);
    CHECK(cert.coloring.at(0) == Color(1));
  }
  SUBCASE("refusals") {
    GameSpec spec{Population::finite(2), Visibility::full(), Palette::finite(3), GuessBound::at_most(1)};
    CHECK_THROWS_AS(sequential_defeat(spec, modular_sum(2), PromiseLadder{{2}}, 4), Refusal);
    CHECK_THROWS_AS(sequential_defeat(spec, modular_sum(2), PromiseLadder{{2, 4}}, 4), Refusal);
    // Two promised colours each: modular sum covers them.
    CHECK_THROWS_AS(sequential_defeat(spec, modular_sum(2), PromiseLadder{{2, 2}}, 4), Refusal);
    CHECK_THROWS_AS(sequential_defeat(spec, modular_sum(2), PromiseLadder{{2, 3}}, 4, 1), Refusal);
  }
}

TEST_CASE("wilson interval") {
  auto half = wilson_interval(50, 100);
  CHECK(half.lower < 0.5);
  CHECK(half.upper > 0.5);
  CHECK(half.lower + half.upper == doctest::Approx(1.0));
  auto none = wilson_interval(0, 1000);
  CHECK(none.lower == doctest::Approx(0.0));
  CHECK(none.upper < 0.01);
  // A smaller z gives a narrower interval.
  auto z1 = wilson_interval(30, 100, 1.0);
  CHECK(z1.upper - z1.lower < wilson_interval(30, 100).upper - wilson_interval(30, 100).lower);
  CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
}

TEST_CASE("randomized refutation") {
  for (std::uint64_t c : {0, 3, 100}) {
    double oracle = 1;
    for (std::size_t n = 0; n < 20; ++n) oracle *= 1 - mass(n, c);
    oracle = 1 - oracle;
    CHECK(constant_guess_win_probability(20, c) == doctest::Approx(oracle).epsilon(1e-12));
  }
  auto r = randomized_refute(constant_guess({0}), 20, 20000, 5);
  REQUIRE(r.rate);
  REQUIRE(r.interval);
  const double p = constant_guess_win_probability(20, 0);
  CHECK(r.interval->lower <= p);
  CHECK(p <= r.interval->upper);
  double ub = 0;
  for (std::size_t n = 0; n < 20; ++n) ub += mass(n, 0);
  CHECK(r.union_bound == doctest::Approx(ub));
  CHECK(r.union_bound < 0.25);

  auto again = randomized_refute(constant_guess({0}), 20, 20000, 5);
  CHECK(again.wins == r.wins);

  auto empty = randomized_refute(constant_guess({0}), 20, 0, 5);
  CHECK(!empty.rate);
  CHECK(!empty.interval);

  auto w = single_guess_window(7);
  CHECK(w.population.count == 7);
  CHECK(w.guess_bound == GuessBound::at_most(1));
}

#include <doctest.h>

#include <algorithm>

#include "hats/engine.hpp"
#include "hats/random.hpp"
#include "hats/strategies.hpp"

using namespace hats;

namespace {

Profile looker(std::vector<LogicianId> targets, std::vector<Color> guess) {
  return Profile("looker", [=](LogicianId, Observer& eyes) {
    for (auto t : targets) eyes.look(t);
    return guess;
  });
}

// Winners recomputed from the transcript alone.
std::vector<LogicianId> recount(const Transcript& t, const Coloring& c) {
  std::vector<LogicianId> w;
  for (LogicianId i = 0; i < t.logicians.size(); ++i) {
    const auto& r = t.logicians[i];
    if (r.violation) continue;
    for (const auto& g : r.guesses)
      if (g == c.at(i)) w.push_back(i);
  }
  return w;
}

}  // namespace

TEST_CASE("modular sum on (3,3,2)") {
  auto spec = GameSpec::finite_game(3, 3, 2);
  auto c = Coloring::table({0, 1, 2});
  auto t = run_game(spec, modular_sum(3), c, 8);
  // Logician i guesses i - (s - h_i) mod 3 where s is the total.
  for (LogicianId i = 0; i < 3; ++i) {
    std::uint64_t others = (0 + 1 + 2) - c.at(i).natural();
    std::uint64_t expect = ((i + 3 * 3) - others) % 3;
    REQUIRE(t.logicians[i].guesses.size() == 1);
    CHECK(t.logicians[i].guesses[0] == Color(expect));
  }
  CHECK(std::find(t.verdict.winners.begin(), t.verdict.winners.end(), 0) != t.verdict.winners.end());
}

TEST_CASE("empty guess list never wins") {
  auto spec = GameSpec::finite_game(2, 2, 2);
  auto t = run_game(spec, constant_guess({}), Coloring::table({0, 1}), 4);
  CHECK(t.verdict.winners.empty());
  CHECK(t.verdict.violations.empty());
}

TEST_CASE("rule violations") {
  GameSpec chain{Population::finite(4), Visibility::chain(), Palette::finite(3), GuessBound::at_most(1)};
  auto c = Coloring::table({0, 1, 2, 0});

  SUBCASE("looking backwards on a chain") {
    auto back = Profile("back", [](LogicianId self, Observer& eyes) {
      if (self > 0) eyes.look(self - 1);
      return std::vector<Color>{0};
    });
    auto t = run_game(chain, back, c, 4);
    for (LogicianId n = 1; n < 4; ++n) CHECK(t.logicians[n].violation == Rule::Visibility);
    CHECK(!t.logicians[0].violation);
    // Logician 0 guessed its colour 0 and still wins.
    CHECK(t.verdict.winners == std::vector<LogicianId>{0});
  }
  SUBCASE("looking at yourself") {
    auto self = Profile("self", [](LogicianId s, Observer& eyes) {
      eyes.look(s);
      return std::vector<Color>{};
    });
    auto t = run_game(GameSpec::finite_game(3, 3, 2), self, Coloring::table({0, 0, 0}), 4);
    CHECK(t.verdict.violations.size() == 3);
    for (const auto& v : t.verdict.violations) CHECK(v.rule == Rule::SelfLook);
  }
  SUBCASE("budget") {
    auto greedy = looker({1, 2, 3, 1, 2, 3}, {0});
    auto spec = GameSpec::finite_game(4, 3, 2);
    auto t = run_game(spec, greedy, c, 3);
    for (const auto& r : t.logicians) CHECK(r.looks.size() <= 3);
    CHECK(t.logicians[0].violation == Rule::BudgetExceeded);
    CHECK(t.verdict.winners.empty());
  }
  SUBCASE("long guess lists") {
    auto t = run_game(GameSpec::finite_game(2, 3, 2), constant_guess({0, 1}), Coloring::table({0, 1}), 4);
    CHECK(t.verdict.violations.size() == 2);
    CHECK(t.verdict.winners.empty());
  }
  SUBCASE("duplicates collapse before the bound is checked") {
    auto t = run_game(GameSpec::finite_game(2, 3, 2), constant_guess({1, 1, 1}), Coloring::table({0, 1}), 4);
    CHECK(t.verdict.violations.empty());
    CHECK(t.verdict.winners == std::vector<LogicianId>{1});
  }
  SUBCASE("a look outside a finite game") {
    auto far = looker({9}, {0});
    auto t = run_game(GameSpec::finite_game(2, 2, 2), far, Coloring::table({0, 0}), 4);
    CHECK(t.logicians[0].violation == Rule::Visibility);
  }
}

TEST_CASE("truncated windows") {
  GameSpec omega_chain{Population::countable(), Visibility::chain(), Palette::naturals(), GuessBound::finite_list()};
  auto w = truncate(omega_chain, 5);
  CHECK(w.population.count == 5);
  CHECK(w.visibility.kind == VisibilityKind::Chain);
  CHECK(w.palette == omega_chain.palette);
  CHECK_THROWS(truncate(omega_chain, 0));

  auto t = run_game(w, neighbor_initial_segment(), Coloring::table({3, 3, 3, 3, 3}), 4);
  REQUIRE(t.logicians[4].looks.size() == 1);
  CHECK(t.logicians[4].looks[0].color.is_out_of_window());
  CHECK(t.logicians[4].guesses.empty());
  CHECK(t.verdict.winners == std::vector<LogicianId>{0, 1, 2, 3});

  auto one = truncate(omega_chain, 1);
  auto lone = run_game(one, constant_guess({7}), Coloring::table({7}), 2);
  CHECK(lone.verdict.winners == std::vector<LogicianId>{0});
  CHECK_THROWS(run_game(omega_chain, constant_guess({0}), Coloring::table({0}), 2));
}

TEST_CASE("colouring outside the palette is rejected") {
  CHECK_THROWS_AS(run_game(GameSpec::finite_game(2, 2, 2), constant_guess({0}), Coloring::table({0, 2}), 2),
                  std::invalid_argument);
}

TEST_CASE("tournaments") {
  auto spec = GameSpec::finite_game(3, 3, 2);
  auto s = tournament(spec, modular_sum(3), all_colorings(3, 3), 8);
  CHECK(s.games == 27);
  CHECK(s.wins == 27);
  CHECK(s.losses == 0);

  // Any fixed profile on (2,3,2) loses somewhere; try many.
  auto small = GameSpec::finite_game(2, 3, 2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = sampled_profile(small, seed, 1, 3);
    CHECK(tournament(small, p, all_colorings(2, 3), 8).losses > 0);
  }

  auto empty = tournament(spec, modular_sum(3), listed_colorings({}), 8);
  CHECK(empty.games == 0);
  CHECK(empty.wins == 0);
}

TEST_CASE("colourings are enumerated with logician 0 most significant") {
  auto next = all_colorings(2, 3);
  std::vector<std::vector<Color>> seen;
  while (auto c = next()) seen.push_back(c->prefix(2));
  REQUIRE(seen.size() == 9);
  CHECK(seen[1] == std::vector<Color>{0, 1});
  CHECK(seen[3] == std::vector<Color>{1, 0});
  CHECK(seen.back() == std::vector<Color>{2, 2});
}

TEST_CASE("transcripts: determinism, verdicts and no self information") {
  std::mt19937_64 rng(21);
  for (int run = 0; run < 200; ++run) {
    std::size_t n = 2 + rng() % 4;
    std::uint64_t k = 2 + rng() % 4;
    auto spec = GameSpec::finite_game(n, k, 2 + rng() % 2);
    auto profile = sampled_profile(spec, rng(), 1 + rng() % 2, k);
    std::vector<Color> hats;
    for (std::size_t i = 0; i < n; ++i) hats.push_back(Color(rng() % k));
    auto c = Coloring::table(hats);
    auto t = run_game(spec, profile, c, 6);
    CHECK(t == run_game(spec, profile, c, 6));
    CHECK(recount(t, c) == t.verdict.winners);
    for (LogicianId i = 0; i < n; ++i) {
      auto other = c.with_color(i, Color((c.at(i).natural() + 1 + rng() % (k - 1)) % k));
      auto t2 = run_game(spec, profile, other, 6);
      CHECK(t2.logicians[i] == t.logicians[i]);
    }
  }
}

TEST_CASE("step strategies replay their history") {
  // Look at the next logician and guess what was seen.
  auto step = from_step_function("copy-next", [](LogicianId self, std::span<const Observation> seen) -> Action {
    if (seen.empty()) return Look{self + 1};
    return Guess{{seen[0].color}};
  });
  GameSpec w = truncate({Population::countable(), Visibility::chain(), Palette::naturals(), GuessBound::at_most(1)}, 3);
  auto t = run_game(w, step, Coloring::table({4, 4, 1}), 4);
  CHECK(t.verdict.winners == std::vector<LogicianId>{0});
  CHECK(t.logicians[2].guesses.empty());
}

TEST_CASE("generated and supported colourings") {
  auto g = Coloring::generated(ColorDistribution::uniform(5), 99);
  CHECK(g.at(3) == Coloring::generated(ColorDistribution::uniform(5), 99).at(3));
  for (LogicianId i = 0; i < 50; ++i) CHECK(g.at(i).natural() < 5);
  auto s = Coloring::with_default({{2, Color(7)}}, Color(1));
  CHECK(s.at(2) == Color(7));
  CHECK(s.at(100) == Color(1));
  CHECK(s.with_color(100, Color(3)).at(100) == Color(3));
}

TEST_CASE("block geometric distribution") {
  auto d = ColorDistribution::block_geometric();
  for (LogicianId n = 0; n < 10; ++n) {
    double total = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n + 2)) * 60; ++m) {
      double p = d.probability(n, m);
      CHECK(p > 0);
      CHECK(p <= std::ldexp(1.0, -static_cast<int>(n) - 3) + 1e-18);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

#pragma once

// Constructions of colourings on which every logician of a given profile
// guesses wrong.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hats/engine.hpp"

namespace hats {

// One line per logician: what it guessed against the colour it was given.
struct CertificateEntry {
  LogicianId logician = 0;
  Color assigned;
  std::vector<Color> guesses;
  std::optional<Rule> violation;

  friend bool operator==(const CertificateEntry&, const CertificateEntry&) = default;
};

struct DefeatCertificate {
  Coloring coloring;
  std::vector<CertificateEntry> entries;  // in the order the colours were fixed
};

// Replays the colouring: true when nobody wins.
bool verify_defeat(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                   std::size_t look_budget);
DefeatCertificate certify(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                          std::size_t look_budget);

// Lexicographically first colouring with no winner, or nothing when the
// profile wins everywhere. Throws CapExceeded when k^n exceeds cap.
std::optional<Coloring> exhaustive_defeat(const GameSpec& spec, const Profile& profile,
                                          std::size_t look_budget, std::uint64_t cap = 1u << 24);

// Colours maximal elements first (lowest id first among them), each with the
// least colour outside its guess list. A logician that breaks a rule gets 0.
// Throws Refusal unless k >= g + 1.
DefeatCertificate poset_defeat(const Poset& poset, const Profile& profile, std::uint64_t k,
                               std::uint64_t g, std::size_t look_budget);

// Per logician, the promised colours {0, ..., size-1}.
struct PromiseLadder {
  std::vector<std::uint64_t> sizes;

  bool keeps(const Coloring& coloring) const;
};

// Ladder for lists of at most max_list colours: each size exceeds max_list
// times the number of colourings of the logicians before it.
PromiseLadder graded_ladder(std::size_t lambda, std::uint64_t max_list);

// Fixes colours from the last logician down: each logician gets the least
// promised colour it guesses under no promise-respecting colouring of the
// logicians not yet fixed. Throws Refusal when a promise is covered or the
// enumeration would exceed cap.
DefeatCertificate sequential_defeat(const GameSpec& spec, const Profile& profile, const PromiseLadder& ladder,
                                    std::size_t look_budget, std::uint64_t cap = 1u << 22);

struct Interval {
  double lower = 0;
  double upper = 1;
};

// Wilson score interval; z = 2.5758 is two-sided 99%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 2.5758);

struct RefutationReport {
  std::size_t window = 0;
  std::uint64_t trials = 0;
  std::uint64_t wins = 0;
  std::optional<double> rate;
  std::optional<Interval> interval;
  // Sum over the window of the largest single-colour probability.
  double union_bound = 0;
};

// The countable game with natural colours and single guesses, truncated to
// window logicians. Trial t draws the hats of logicians 0..window-1 in order
// from the generator seeded by (seed, t), logician n using the block-geometric
// distribution with p_n(m) <= 2^-(n+3).
GameSpec single_guess_window(std::size_t window);
RefutationReport randomized_refute(const Profile& profile, std::size_t window, std::uint64_t trials,
                                   std::uint64_t seed, std::size_t look_budget = 64);
// Exact win probability of the profile that always guesses colour c.
double constant_guess_win_probability(std::size_t window, std::uint64_t c);

}  // namespace hats

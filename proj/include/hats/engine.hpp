#pragma once

// Plays hat games. A logician's strategy is a procedure that inspects hats one
// at a time through an Observer and finally returns its guess list; the
// engine enforces the looking rules and records everything that happened.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hats/game.hpp"

namespace hats {

enum class Rule { SelfLook, Visibility, BudgetExceeded, GuessTooLong };

std::string to_string(Rule rule);

struct Observation {
  LogicianId target = 0;
  Color color;

  friend bool operator==(const Observation&, const Observation&) = default;
};

class Observer {
 public:
  virtual ~Observer() = default;
  virtual Color look(LogicianId target) = 0;
};

// Thrown by the engine's observer when a look breaks a rule. Strategies must
// let it propagate.
class LookRefused : public std::runtime_error {
 public:
  explicit LookRefused(Rule rule) : std::runtime_error(to_string(rule)), rule_(rule) {}
  Rule rule() const { return rule_; }

 private:
  Rule rule_;
};

using PlayFn = std::function<std::vector<Color>(LogicianId self, Observer& eyes)>;

class Profile {
 public:
  Profile() = default;
  Profile(std::string name, PlayFn play) : name_(std::move(name)), play_(std::move(play)) {}

  const std::string& name() const { return name_; }
  // The returned sequence is the logician's guess list in the order produced.
  std::vector<Color> play(LogicianId self, Observer& eyes) const { return play_(self, eyes); }
  explicit operator bool() const { return static_cast<bool>(play_); }

 private:
  std::string name_;
  PlayFn play_;
};

// Step form of a strategy: given what has been seen so far, either look at
// another hat or stop and guess.
struct Look {
  LogicianId target = 0;
};
struct Guess {
  std::vector<Color> colors;
};
using Action = std::variant<Look, Guess>;
using StepFn = std::function<Action(LogicianId self, std::span<const Observation> history)>;

Profile from_step_function(std::string name, StepFn step);

struct LogicianRecord {
  std::vector<Observation> looks;
  std::vector<Color> guesses;  // canonical: sorted, duplicates and sentinels removed
  std::optional<Rule> violation;

  friend bool operator==(const LogicianRecord&, const LogicianRecord&) = default;
};

struct Violation {
  LogicianId logician = 0;
  Rule rule = Rule::SelfLook;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Verdict {
  std::vector<LogicianId> winners;
  std::vector<Violation> violations;

  bool won() const { return !winners.empty(); }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Transcript {
  std::vector<LogicianRecord> logicians;
  Verdict verdict;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

std::vector<Color> canonical_guesses(std::vector<Color> guesses);

// Finite window {0, ..., n-1} onto a game; chain visibility becomes the chain
// on the window and looks past the end answer OUT_OF_WINDOW.
GameSpec truncate(const GameSpec& spec, std::size_t n);

// Throws std::invalid_argument for an OMEGA population (truncate first) or a
// colouring outside the palette.
Transcript run_game(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                    std::size_t look_budget);

// One logician's play of a finite or windowed game; the colouring is not
// checked against the palette.
LogicianRecord play_logician(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                             LogicianId self, std::size_t look_budget);

using ColoringSource = std::function<std::optional<Coloring>()>;

// All k^n tables in lexicographic order, logician 0 most significant.
ColoringSource all_colorings(std::size_t n, std::uint64_t k);
// count colourings, the i-th drawn by sampler from a generator seeded by (seed, i).
ColoringSource sampled_colorings(std::uint64_t count, std::uint64_t seed,
                                 std::function<Coloring(std::mt19937_64&)> sampler);
ColoringSource listed_colorings(std::vector<Coloring> colorings);

struct TournamentSummary {
  std::uint64_t games = 0;
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::vector<Coloring> losing_colorings;  // the first few, in source order
  std::map<Rule, std::uint64_t> violations;
};

TournamentSummary tournament(const GameSpec& spec, const Profile& profile, ColoringSource colorings,
                             std::size_t look_budget, std::size_t keep_losses = 16);

}  // namespace hats

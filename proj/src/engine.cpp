#include "hats/engine.hpp"

#include <algorithm>
#include <memory>

#include "hats/random.hpp"

namespace hats {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::SelfLook:
      return "SELF_LOOK";
    case Rule::Visibility:
      return "VISIBILITY";
    case Rule::BudgetExceeded:
      return "BUDGET_EXCEEDED";
    case Rule::GuessTooLong:
      return "GUESS_TOO_LONG";
  }
  return "?";
}

std::vector<Color> canonical_guesses(std::vector<Color> guesses) {
  std::erase_if(guesses, [](const Color& c) { return c.is_out_of_window(); });
  std::sort(guesses.begin(), guesses.end());
  guesses.erase(std::unique(guesses.begin(), guesses.end()), guesses.end());
  return guesses;
}

namespace {

// Replays the step function from the start of the history on every call; the
// history is the only state a step strategy has.
class StepObserverAdapter {
 public:
  static std::vector<Color> run(const StepFn& step, LogicianId self, Observer& eyes) {
    std::vector<Observation> history;
    for (;;) {
      Action action = step(self, history);
      if (auto* guess = std::get_if<Guess>(&action)) return guess->colors;
      LogicianId target = std::get<Look>(action).target;
      history.push_back(Observation{target, eyes.look(target)});
    }
  }
};

class EngineObserver final : public Observer {
 public:
  EngineObserver(const GameSpec& spec, const Coloring& coloring, LogicianId self,
                 std::size_t budget, std::vector<Observation>& looks)
      : spec_(spec), coloring_(coloring), self_(self), budget_(budget), looks_(looks) {}

  Color look(LogicianId target) override {
    if (target == self_) throw LookRefused(Rule::SelfLook);
    bool past_window = target >= spec_.population.count;
    if (past_window && !spec_.windowed) throw LookRefused(Rule::Visibility);
    if (!spec_.may_look(self_, target)) throw LookRefused(Rule::Visibility);
    if (looks_.size() >= budget_) throw LookRefused(Rule::BudgetExceeded);
    Color seen = past_window ? Color::out_of_window() : coloring_.at(target);
    looks_.push_back(Observation{target, seen});
    return seen;
  }

 private:
  const GameSpec& spec_;
  const Coloring& coloring_;
  LogicianId self_;
  std::size_t budget_;
  std::vector<Observation>& looks_;
};

}  // namespace

Profile from_step_function(std::string name, StepFn step) {
  auto shared = std::make_shared<StepFn>(std::move(step));
  return Profile(std::move(name), [shared](LogicianId self, Observer& eyes) {
    return StepObserverAdapter::run(*shared, self, eyes);
  });
}

GameSpec truncate(const GameSpec& spec, std::size_t n) {
  if (n < 1) throw std::invalid_argument("truncate: window must be at least 1");
  GameSpec out = spec;
  out.population = Population::finite(n);
  out.windowed = true;
  return out;
}

LogicianRecord play_logician(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                             LogicianId self, std::size_t look_budget) {
  LogicianRecord record;
  EngineObserver eyes(spec, coloring, self, look_budget, record.looks);
  try {
    record.guesses = canonical_guesses(profile.play(self, eyes));
  } catch (const LookRefused& refused) {
    record.violation = refused.rule();
    record.guesses.clear();
  }
  if (!record.violation && !spec.guess_bound.allows(record.guesses.size())) {
    record.violation = Rule::GuessTooLong;
  }
  return record;
}

Transcript run_game(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                    std::size_t look_budget) {
  spec.validate();
  if (spec.population.omega) throw std::invalid_argument("run_game: truncate an omega population first");
  const std::size_t n = spec.population.count;
  for (std::size_t i = 0; i < n; ++i) {
    if (!spec.palette.contains(coloring.at(i)))
      throw std::invalid_argument("run_game: colour of logician " + std::to_string(i) +
                                  " is outside the palette");
  }

  Transcript transcript;
  transcript.logicians.reserve(n);
  for (LogicianId self = 0; self < n; ++self) {
    transcript.logicians.push_back(play_logician(spec, profile, coloring, self, look_budget));
    const LogicianRecord& record = transcript.logicians.back();
    if (record.violation) {
      transcript.verdict.violations.push_back(Violation{self, *record.violation});
    } else if (std::binary_search(record.guesses.begin(), record.guesses.end(), coloring.at(self))) {
      transcript.verdict.winners.push_back(self);
    }
  }
  return transcript;
}

ColoringSource all_colorings(std::size_t n, std::uint64_t k) {
  auto digits = std::make_shared<std::vector<std::uint64_t>>(n, 0);
  auto done = std::make_shared<bool>(k == 0 && n > 0);
  return [=]() -> std::optional<Coloring> {
    if (*done) return std::nullopt;
    std::vector<Color> colors(digits->begin(), digits->end());
    std::size_t i = n;
    for (;;) {
      if (i == 0) {
        *done = true;
        break;
      }
      --i;
      if (++(*digits)[i] < k) break;
      (*digits)[i] = 0;
    }
    return Coloring::table(std::move(colors));
  };
}

ColoringSource sampled_colorings(std::uint64_t count, std::uint64_t seed,
                                 std::function<Coloring(std::mt19937_64&)> sampler) {
  auto index = std::make_shared<std::uint64_t>(0);
  return [=]() -> std::optional<Coloring> {
    if (*index >= count) return std::nullopt;
    auto rng = derived_rng(seed, (*index)++);
    return sampler(rng);
  };
}

ColoringSource listed_colorings(std::vector<Coloring> colorings) {
  auto list = std::make_shared<std::vector<Coloring>>(std::move(colorings));
  auto index = std::make_shared<std::size_t>(0);
  return [=]() -> std::optional<Coloring> {
    if (*index >= list->size()) return std::nullopt;
    return (*list)[(*index)++];
  };
}

TournamentSummary tournament(const GameSpec& spec, const Profile& profile, ColoringSource colorings,
                             std::size_t look_budget, std::size_t keep_losses) {
  TournamentSummary summary;
  while (auto coloring = colorings()) {
    Transcript t = run_game(spec, profile, *coloring, look_budget);
    ++summary.games;
    if (t.verdict.won()) {
      ++summary.wins;
    } else {
      ++summary.losses;
      if (summary.losing_colorings.size() < keep_losses) summary.losing_colorings.push_back(*coloring);
    }
    for (const auto& v : t.verdict.violations) ++summary.violations[v.rule];
  }
  return summary;
}

}  // namespace hats

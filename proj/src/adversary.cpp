#include "hats/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hats/errors.hpp"
#include "hats/random.hpp"

namespace hats {

bool verify_defeat(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                   std::size_t look_budget) {
  return !run_game(spec, profile, coloring, look_budget).verdict.won();
}

DefeatCertificate certify(const GameSpec& spec, const Profile& profile, const Coloring& coloring,
                          std::size_t look_budget) {
  Transcript t = run_game(spec, profile, coloring, look_budget);
  if (t.verdict.won()) throw std::logic_error("certify: the colouring does not defeat the profile");
  DefeatCertificate cert{coloring, {}};
  for (LogicianId i = 0; i < t.logicians.size(); ++i)
    cert.entries.push_back({i, coloring.at(i), t.logicians[i].guesses, t.logicians[i].violation});
  return cert;
}

std::optional<Coloring> exhaustive_defeat(const GameSpec& spec, const Profile& profile,
                                          std::size_t look_budget, std::uint64_t cap) {
  spec.validate();
  if (spec.palette.kind != PaletteKind::Finite) throw std::invalid_argument("exhaustive_defeat: needs a finite palette");
  const std::size_t n = spec.logician_count();
  const std::uint64_t k = spec.palette.size;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > cap / k) throw CapExceeded("exhaustive_defeat colourings", cap + 1, cap);
    count *= k;
  }
  auto source = all_colorings(n, k);
  while (auto coloring = source()) {
    if (verify_defeat(spec, profile, *coloring, look_budget)) return coloring;
  }
  return std::nullopt;
}

namespace {

// Serves already coloured logicians and insists that only those are looked at.
class PartialObserver final : public Observer {
 public:
  PartialObserver(const Poset& poset, const std::vector<std::optional<Color>>& colors, LogicianId self,
                  std::size_t budget)
      : poset_(poset), colors_(colors), self_(self), budget_(budget) {}

  Color look(LogicianId target) override {
    if (target == self_) throw LookRefused(Rule::SelfLook);
    if (target >= poset_.size() || !poset_.less(self_, target)) throw LookRefused(Rule::Visibility);
    if (++looks_ > budget_) throw LookRefused(Rule::BudgetExceeded);
    if (!colors_[target]) throw std::logic_error("poset_defeat: looked at a hat that is not coloured yet");
    return *colors_[target];
  }

 private:
  const Poset& poset_;
  const std::vector<std::optional<Color>>& colors_;
  LogicianId self_;
  std::size_t budget_;
  std::size_t looks_ = 0;
};

}  // namespace

DefeatCertificate poset_defeat(const Poset& poset, const Profile& profile, std::uint64_t k,
                               std::uint64_t g, std::size_t look_budget) {
  if (g < 1) throw Refusal("poset_defeat: the guess bound must be at least 1");
  if (k < g + 1) throw Refusal("poset_defeat: needs at least g + 1 colours");
  const std::size_t n = poset.size();
  std::vector<std::optional<Color>> colors(n);
  DefeatCertificate cert;
  for (LogicianId p : poset.reverse_topological_order()) {
    PartialObserver eyes(poset, colors, p, look_budget);
    CertificateEntry entry;
    entry.logician = p;
    try {
      entry.guesses = canonical_guesses(profile.play(p, eyes));
      if (entry.guesses.size() > g) entry.violation = Rule::GuessTooLong;
    } catch (const LookRefused& refused) {
      entry.violation = refused.rule();
      entry.guesses.clear();
    }
    std::uint64_t c = 0;
    if (!entry.violation)
      while (std::binary_search(entry.guesses.begin(), entry.guesses.end(), Color(c))) ++c;
    colors[p] = Color(c);
    entry.assigned = c;
    cert.entries.push_back(std::move(entry));
  }
  std::vector<Color> table;
  for (auto& c : colors) table.push_back(*c);
  cert.coloring = Coloring::table(std::move(table));
  GameSpec spec{Population::finite(n), Visibility::order(poset), Palette::finite(k), GuessBound::at_most(g)};
  if (n > 0 && !verify_defeat(spec, profile, cert.coloring, look_budget))
    throw std::logic_error("poset_defeat: replay found a winner");
  return cert;
}

bool PromiseLadder::keeps(const Coloring& coloring) const {
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Color c = coloring.at(i);
    if (!c.is_natural() || c.natural() >= sizes[i]) return false;
  }
  return true;
}

PromiseLadder graded_ladder(std::size_t lambda, std::uint64_t max_list) {
  PromiseLadder ladder;
  std::uint64_t product = 1;
  for (std::size_t i = 0; i < lambda; ++i) {
    std::uint64_t s = product * max_list + 1;
    ladder.sizes.push_back(s);
    product *= s;
  }
  return ladder;
}

DefeatCertificate sequential_defeat(const GameSpec& spec, const Profile& profile, const PromiseLadder& ladder,
                                    std::size_t look_budget, std::uint64_t cap) {
  spec.validate();
  const std::size_t n = spec.logician_count();
  if (ladder.sizes.size() != n) throw Refusal("sequential_defeat: one promise per logician is required");
  for (std::size_t i = 0; i < n; ++i) {
    if (ladder.sizes[i] == 0) throw Refusal("sequential_defeat: empty promise");
    if (!spec.palette.contains(Color(ladder.sizes[i] - 1)))
      throw Refusal("sequential_defeat: promise of logician " + std::to_string(i) + " leaves the palette");
  }
  std::vector<Color> fixed(n, Color(0));
  DefeatCertificate cert;
  for (std::size_t step = n; step-- > 0;) {
    const LogicianId self = step;
    // Logicians below self are still free within their promises.
    std::uint64_t count = 1;
    for (std::size_t j = 0; j < self; ++j) {
      if (count > cap / ladder.sizes[j])
        throw Refusal("sequential_defeat: logician " + std::to_string(self) + " needs more than " +
                      std::to_string(cap) + " colourings");
      count *= ladder.sizes[j];
    }
    std::vector<Color> possible;
    std::vector<Color> hats = fixed;
    std::vector<std::uint64_t> digits(self, 0);
    for (;;) {
      for (std::size_t j = 0; j < self; ++j) hats[j] = Color(digits[j]);
      LogicianRecord r = play_logician(spec, profile, Coloring::table(hats), self, look_budget);
      if (!r.violation) possible.insert(possible.end(), r.guesses.begin(), r.guesses.end());
      std::size_t j = self;
      bool done = true;
      while (j > 0) {
        --j;
        if (++digits[j] < ladder.sizes[j]) {
          done = false;
          break;
        }
        digits[j] = 0;
      }
      if (done) break;
    }
    possible = canonical_guesses(std::move(possible));
    std::optional<std::uint64_t> pick;
    for (std::uint64_t c = 0; c < ladder.sizes[self] && !pick; ++c)
      if (!std::binary_search(possible.begin(), possible.end(), Color(c))) pick = c;
    if (!pick)
      throw Refusal("sequential_defeat: logician " + std::to_string(self) + " can guess all " +
                    std::to_string(ladder.sizes[self]) + " promised colours");
    fixed[self] = Color(*pick);
    cert.entries.push_back({self, fixed[self], {}, std::nullopt});
  }
  cert.coloring = Coloring::table(fixed);
  Transcript t = run_game(spec, profile, cert.coloring, look_budget);
  if (t.verdict.won()) throw std::logic_error("sequential_defeat: replay found a winner");
  for (auto& e : cert.entries) {
    e.guesses = t.logicians[e.logician].guesses;
    e.violation = t.logicians[e.logician].violation;
  }
  return cert;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double centre = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

GameSpec single_guess_window(std::size_t window) {
  GameSpec spec{Population::countable(), Visibility::full(), Palette::naturals(), GuessBound::at_most(1)};
  return truncate(spec, window);
}

RefutationReport randomized_refute(const Profile& profile, std::size_t window, std::uint64_t trials,
                                   std::uint64_t seed, std::size_t look_budget) {
  const GameSpec spec = single_guess_window(window);
  const ColorDistribution dist = ColorDistribution::block_geometric();
  RefutationReport report;
  report.window = window;
  report.trials = trials;
  for (std::size_t n = 0; n < window; ++n) report.union_bound += dist.probability(n, 0);
  std::vector<Color> hats(window);
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = derived_rng(seed, t);
    for (std::size_t n = 0; n < window; ++n) hats[n] = dist.sample(n, rng);
    if (run_game(spec, profile, Coloring::table(hats), look_budget).verdict.won()) ++report.wins;
  }
  if (trials > 0) {
    report.rate = static_cast<double>(report.wins) / static_cast<double>(trials);
    report.interval = wilson_interval(report.wins, trials);
  }
  return report;
}

double constant_guess_win_probability(std::size_t window, std::uint64_t c) {
  const ColorDistribution dist = ColorDistribution::block_geometric();
  double lose = 1;
  for (std::size_t n = 0; n < window; ++n) lose *= 1 - dist.probability(n, c);
  return 1 - lose;
}

}  // namespace hats

#include "hats/strategies.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "hats/errors.hpp"
#include "hats/random.hpp"

namespace hats {

Color CachingObserver::look(LogicianId target) {
  auto it = seen_.find(target);
  if (it != seen_.end()) return it->second;
  Color c = base_.look(target);
  seen_.emplace(target, c);
  return c;
}

namespace {

// Presents a relabelled view of the real hats to a simulated logician.
class MappedObserver final : public Observer {
 public:
  MappedObserver(Observer& base, std::function<LogicianId(LogicianId)> map)
      : base_(base), map_(std::move(map)) {}
  Color look(LogicianId target) override { return base_.look(map_(target)); }

 private:
  Observer& base_;
  std::function<LogicianId(LogicianId)> map_;
};

std::vector<Color> range_up_to(std::uint64_t top) {
  std::vector<Color> out;
  out.reserve(top + 1);
  for (std::uint64_t c = 0; c <= top; ++c) out.emplace_back(c);
  return out;
}

bool listed(const std::vector<Color>& list, const Color& c) {
  return std::find(list.begin(), list.end(), c) != list.end();
}

// Hashes the colours seen so far into a running state.
std::uint64_t fold(std::uint64_t state, std::uint64_t value) { return splitmix64(state ^ value); }

}  // namespace

Profile modular_sum(std::size_t n) {
  if (n < 1) throw std::invalid_argument("modular_sum: n must be at least 1");
  return Profile("modular-sum", [n](LogicianId self, Observer& eyes) {
    std::uint64_t s = 0;
    for (LogicianId j = 0; j < n; ++j)
      if (j != self) s = (s + eyes.look(j).natural() % n) % n;
    std::uint64_t guess = ((self % n) + n - s) % n;
    return std::vector<Color>{Color(guess)};
  });
}

Profile block_cover(std::size_t lambda, std::uint64_t gamma) {
  if (lambda < 1 || gamma < 2) throw std::invalid_argument("block_cover: needs lambda >= 1 and gamma >= 2");
  const std::uint64_t width = gamma - 1;
  const std::uint64_t m = lambda * width;
  return Profile("block-cover", [lambda, width, m](LogicianId self, Observer& eyes) {
    std::uint64_t s = 0;
    for (LogicianId j = 0; j < lambda; ++j)
      if (j != self) s = (s + eyes.look(j).natural() % m) % m;
    std::vector<Color> out;
    for (std::uint64_t b = self * width; b < (self + 1) * width; ++b) out.emplace_back((b + m - s) % m);
    return out;
  });
}

Profile initial_segment_pair() {
  return Profile("initial-segment", [](LogicianId self, Observer& eyes) {
    Color other = eyes.look(1 - self);
    return range_up_to(other.natural());
  });
}

namespace {

std::vector<Color> ordinal_guess(LogicianId self, std::vector<LogicianId> active,
                                 const std::optional<Ordinal>& bound, Observer& eyes) {
  if (active.size() == 1) throw std::invalid_argument("ordinal_recursive: needs at least two logicians");
  if (active.size() == 2) {
    LogicianId other = active[0] == self ? active[1] : active[0];
    const Natural c = code(eyes.look(other).ordinal());
    if (c > enumeration_cap()) throw CapExceeded("ordinal code segment", enumeration_cap() + 1, enumeration_cap());
    auto below = below_with_code_at_most(bound, c.convert_to<std::uint64_t>());
    return std::vector<Color>(below.begin(), below.end());
  }
  std::optional<LogicianId> holder;
  Ordinal top;
  for (LogicianId j : active) {
    if (j == self) continue;
    Ordinal h = eyes.look(j).ordinal();
    if (!holder || h > top) {
      holder = j;
      top = h;
    }
  }
  std::erase(active, *holder);
  return ordinal_guess(self, std::move(active), succ(top), eyes);
}

}  // namespace

Profile code_segment_pair() {
  return Profile("code-segment", [](LogicianId self, Observer& eyes) {
    return ordinal_guess(self, {0, 1}, std::nullopt, eyes);
  });
}

Profile ordinal_recursive(std::size_t lambda) {
  if (lambda < 2) throw std::invalid_argument("ordinal_recursive: needs lambda >= 2");
  return Profile("ordinal-recursive", [lambda](LogicianId self, Observer& eyes) {
    CachingObserver cached(eyes);
    std::vector<LogicianId> active(lambda);
    for (LogicianId j = 0; j < lambda; ++j) active[j] = j;
    return ordinal_guess(self, std::move(active), std::nullopt, cached);
  });
}

Profile neighbor_initial_segment() {
  return Profile("neighbor", [](LogicianId self, Observer& eyes) {
    Color next = eyes.look(self + 1);
    if (next.is_out_of_window()) return std::vector<Color>{};
    return range_up_to(next.natural());
  });
}

Profile parity_chain() {
  Profile p = neighbor_initial_segment();
  return Profile("parity", [p](LogicianId self, Observer& eyes) { return p.play(self, eyes); });
}

Profile constant_guess(std::vector<Color> colors) {
  return Profile("constant-guess", [colors](LogicianId, Observer&) { return colors; });
}

Profile sampled_profile(const GameSpec& spec, std::uint64_t seed, std::size_t list_size,
                        std::uint64_t guess_range, std::size_t max_looks) {
  if (spec.population.omega) throw std::invalid_argument("sampled_profile: truncate the spec first");
  if (guess_range == 0) throw std::invalid_argument("sampled_profile: empty guess range");
  const std::size_t n = spec.population.count;
  return Profile("sampled", [spec, seed, list_size, guess_range, max_looks, n](LogicianId self, Observer& eyes) {
    std::uint64_t state = mix_seed(seed, self);
    std::size_t looks = 0;
    for (LogicianId t = 0; t < n && looks < max_looks; ++t) {
      if (!spec.may_look(self, t)) continue;
      if ((fold(state, t) & 1) == 0) continue;
      state = fold(state, eyes.look(t).hash() + t);
      ++looks;
    }
    std::mt19937_64 rng(state);
    const std::uint64_t want = std::min<std::uint64_t>(list_size, guess_range);
    std::set<std::uint64_t> chosen;
    while (chosen.size() < want) chosen.insert(std::uniform_int_distribution<std::uint64_t>(0, guess_range - 1)(rng));
    return std::vector<Color>(chosen.begin(), chosen.end());
  });
}

StrategyFamily::StrategyFamily(std::string name, Member member, std::optional<Profile> star)
    : name_(std::move(name)), member_(std::move(member)), star_(std::move(star)) {}

Profile StrategyFamily::member(std::size_t n) const {
  auto it = cache_->find(n);
  if (it != cache_->end()) return it->second;
  Profile p = member_(n);
  cache_->emplace(n, p);
  return p;
}

Profile StrategyFamily::indexed(std::size_t k) const {
  if (star_) return k == 0 ? *star_ : member(k - 1);
  return member(k);
}

namespace {

// Union of f_j(t) over members j <= limit and tuples t over the given colours.
std::vector<Color> family_union(const FunctionFamily& family, std::size_t limit, const std::vector<Value>& seen) {
  std::set<Value> out;
  if (seen.empty()) return {};
  for (std::size_t j = 0; j < family.members().size() && j <= limit; ++j) {
    const std::size_t arity = family.members()[j].arity;
    std::vector<std::size_t> pos(arity, 0);
    std::vector<Value> args(arity);
    for (;;) {
      for (std::size_t a = 0; a < arity; ++a) args[a] = seen[pos[a]];
      for (Value v : family.apply(j, args)) out.insert(v);
      std::size_t a = arity;
      bool done = true;
      while (a > 0) {
        --a;
        if (++pos[a] < seen.size()) {
          done = false;
          break;
        }
        pos[a] = 0;
      }
      if (done) break;
    }
  }
  return std::vector<Color>(out.begin(), out.end());
}

std::vector<Value> distinct_naturals(const std::vector<Color>& colors) {
  std::set<Value> s;
  for (const Color& c : colors)
    if (c.is_natural()) s.insert(c.natural());
  return std::vector<Value>(s.begin(), s.end());
}

}  // namespace

StrategyFamily family_to_strategies(const FunctionFamily& family) {
  auto shared = std::make_shared<FunctionFamily>(family);
  auto member = [shared](std::size_t big_n) {
    return Profile("tau^" + std::to_string(big_n), [shared, big_n](LogicianId self, Observer& eyes) {
      std::vector<Color> seen;
      for (LogicianId k = 0; k <= big_n; ++k)
        if (k != self) seen.push_back(eyes.look(k));
      return family_union(*shared, big_n, distinct_naturals(seen));
    });
  };
  Profile star("tau_*", [](LogicianId self, Observer& eyes) {
    std::vector<Color> out;
    for (LogicianId k = 0; k < self; ++k) out.push_back(eyes.look(k));
    return out;
  });
  return StrategyFamily("family", member, star);
}

StrategyFamily family_to_forward_strategies(const FunctionFamily& family) {
  auto shared = std::make_shared<FunctionFamily>(family);
  auto member = [shared](std::size_t big_n) {
    return Profile("tau^" + std::to_string(big_n) + "-forward", [shared, big_n](LogicianId self, Observer& eyes) {
      std::vector<Color> seen;
      for (LogicianId k = self + 1; k <= self + big_n; ++k) seen.push_back(eyes.look(k));
      std::vector<Color> out = family_union(*shared, big_n, distinct_naturals(seen));
      for (const Color& c : seen)
        if (!c.is_out_of_window()) out.push_back(c);
      return out;
    });
  };
  return StrategyFamily("forward-family", member);
}

FunctionFamily strategies_to_family(const Profile& profile, std::size_t window, std::size_t look_budget,
                                    std::uint64_t k, std::uint64_t cap) {
  if (window < 2) throw std::invalid_argument("strategies_to_family: window must be at least 2");
  if (k == 0) throw std::invalid_argument("strategies_to_family: needs a finite nonempty palette");
  const std::size_t arity = window - 1;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (count > cap / k) throw CapExceeded("strategies_to_family colourings", cap + 1, cap);
    count *= k;
  }
  ValueSet ground(k);
  for (std::uint64_t c = 0; c < k; ++c) ground[c] = c;

  class TableObserver final : public Observer {
   public:
    TableObserver(LogicianId self, std::size_t window, std::size_t budget, const std::vector<Value>& others)
        : self_(self), window_(window), budget_(budget), others_(others) {}
    Color look(LogicianId target) override {
      if (target == self_) throw LookRefused(Rule::SelfLook);
      if (++looks_ > budget_) throw LookRefused(Rule::BudgetExceeded);
      if (target >= window_) return Color::out_of_window();
      return Color(others_[target < self_ ? target : target - 1]);
    }

   private:
    LogicianId self_;
    std::size_t window_, budget_, looks_ = 0;
    const std::vector<Value>& others_;
  };

  std::vector<FamilyMember> members;
  for (LogicianId n = 0; n < window; ++n) {
    std::map<std::vector<Value>, ValueSet> table;
    std::vector<Value> others(arity, 0);
    for (;;) {
      TableObserver eyes(n, window, look_budget, others);
      std::vector<Color> guesses;
      try {
        guesses = canonical_guesses(profile.play(n, eyes));
      } catch (const LookRefused& refused) {
        throw std::invalid_argument("strategies_to_family: logician " + std::to_string(n) + " broke rule " +
                                    to_string(refused.rule()));
      }
      ValueSet out;
      for (const Color& c : guesses) {
        if (!c.is_natural()) throw std::invalid_argument("strategies_to_family: non-natural guess");
        out.push_back(c.natural());
      }
      if (!out.empty()) table[others] = std::move(out);
      std::size_t a = arity;
      bool done = true;
      while (a > 0) {
        --a;
        if (++others[a] < k) {
          done = false;
          break;
        }
        others[a] = 0;
      }
      if (done) break;
    }
    members.push_back(FamilyMember::from_table(arity, std::move(table), "logician" + std::to_string(n)));
  }
  return FunctionFamily(ground, std::move(members));
}

namespace {

struct StopSearch {};

void append(std::vector<Color>& out, const std::vector<Color>& more) { out.insert(out.end(), more.begin(), more.end()); }

}  // namespace

Profile combine_two_groups(const StrategyFamily& family) {
  return Profile("two-groups(" + family.name() + ")", [family](LogicianId self, Observer& real) {
    CachingObserver eyes(real);
    const LogicianId local = self / 2;
    const LogicianId group = self % 2;
    const LogicianId other = 1 - group;
    MappedObserver other_view(eyes, [other](LogicianId t) { return 2 * t + other; });
    MappedObserver own_view(eyes, [group](LogicianId t) { return 2 * t + group; });

    auto wins = [&](LogicianId j, std::size_t n) {
      Color own = eyes.look(2 * j + other);
      if (own.is_out_of_window()) throw StopSearch{};
      return listed(family.member(n).play(j, other_view), own);
    };
    std::size_t bound = 0;
    try {
      for (std::size_t n = 1;; ++n) {
        bool found = false;
        // Pairs (j, N') below n with max(j, N') = n - 1 are the new ones.
        for (std::size_t j = 0; j < n && !found; ++j)
          for (std::size_t np = 0; np < n && !found; ++np)
            if ((j == n - 1 || np == n - 1) && wins(j, np)) found = true;
        if (found) {
          bound = n;
          break;
        }
      }
    } catch (const StopSearch&) {
      return std::vector<Color>{};
    }
    std::vector<Color> out;
    for (std::size_t np = 0; np < bound; ++np) append(out, family.member(np).play(local, own_view));
    return out;
  });
}

Profile combine_well_ordered(const StrategyFamily& family) {
  return Profile("well-ordered(" + family.name() + ")", [family](LogicianId self, Observer& real) {
    CachingObserver eyes(real);
    auto wins = [&](LogicianId j, std::size_t k) {
      Color own = eyes.look(j);
      if (own.is_out_of_window()) throw StopSearch{};
      return listed(family.indexed(k).play(j, eyes), own);
    };
    std::size_t bound = 0;
    try {
      for (std::size_t n = 1;; ++n) {
        bool found = false;
        for (std::size_t d = 1; d <= n && !found; ++d)
          for (std::size_t k = 0; k <= n && !found; ++k)
            if ((d == n || k == n) && wins(self + d, k)) found = true;
        if (found) {
          bound = n;
          break;
        }
      }
    } catch (const StopSearch&) {
      return std::vector<Color>{};
    }
    std::vector<Color> out;
    for (std::size_t k = 0; k <= bound; ++k) append(out, family.indexed(k).play(self, eyes));
    return out;
  });
}

Profile shrink_guess_lists(const Profile& tau) {
  return Profile("shrink(" + tau.name() + ")", [tau](LogicianId self, Observer& real) {
    CachingObserver eyes(real);
    for (LogicianId m = self + 1;; ++m) {
      std::vector<Color> list = tau.play(m, eyes);
      Color own = eyes.look(m);
      if (own.is_out_of_window()) return std::vector<Color>{};
      auto it = std::find(list.begin(), list.end(), own);
      if (it == list.end()) continue;
      const std::size_t position = it - list.begin();
      std::vector<Color> mine = tau.play(self, eyes);
      if (mine.size() > position + 1) mine.resize(position + 1);
      return mine;
    }
  });
}

Profile compose_cardinality(const Profile& tau, const Profile& rho, std::uint64_t delta,
                            std::optional<std::vector<LogicianId>> positions) {
  if (delta == 0) throw std::invalid_argument("compose_cardinality: delta must be positive");
  if (positions) {
    std::sort(positions->begin(), positions->end());
    positions->erase(std::unique(positions->begin(), positions->end()), positions->end());
  }
  return Profile("compose(" + tau.name() + "," + rho.name() + ")",
                 [tau, rho, delta, positions](LogicianId self, Observer& real) {
    CachingObserver eyes(real);
    LogicianId p = self;
    if (positions) {
      auto it = std::lower_bound(positions->begin(), positions->end(), self);
      if (it == positions->end() || *it != self) return std::vector<Color>{};
      p = it - positions->begin();
    }
    // Hat of position q in the derived game: where h(e(q)) sits in tau_{e(q)}'s list.
    class PositionObserver final : public Observer {
     public:
      PositionObserver(const Profile& tau, std::uint64_t delta, LogicianId p,
                       const std::optional<std::vector<LogicianId>>& positions, Observer& eyes)
          : tau_(tau), delta_(delta), p_(p), positions_(positions), eyes_(eyes) {}
      Color look(LogicianId q) override {
        if (q == p_) throw LookRefused(Rule::SelfLook);
        if (q < p_) throw LookRefused(Rule::Visibility);
        LogicianId m = q;
        if (positions_) {
          if (q >= positions_->size()) throw StopSearch{};
          m = (*positions_)[q];
        }
        std::vector<Color> list = tau_.play(m, eyes_);
        Color own = eyes_.look(m);
        if (own.is_out_of_window()) throw StopSearch{};
        auto it = std::find(list.begin(), list.end(), own);
        if (it == list.end()) throw StopSearch{};
        std::uint64_t alpha = it - list.begin();
        if (alpha >= delta_) throw StopSearch{};
        return Color(alpha);
      }

     private:
      const Profile& tau_;
      std::uint64_t delta_;
      LogicianId p_;
      const std::optional<std::vector<LogicianId>>& positions_;
      Observer& eyes_;
    };
    PositionObserver derived(tau, delta, p, positions, eyes);
    std::vector<Color> picks;
    try {
      picks = rho.play(p, derived);
    } catch (const StopSearch&) {
      return std::vector<Color>{};
    }
    std::vector<Color> mine = tau.play(self, eyes);
    std::vector<Color> out;
    for (const Color& c : picks)
      if (c.is_natural() && c.natural() < mine.size()) out.push_back(mine[c.natural()]);
    return out;
  });
}

}  // namespace hats

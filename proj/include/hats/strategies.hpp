#pragma once

// Strategy zoo and strategy combinators.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hats/engine.hpp"
#include "hats/freesubset.hpp"

namespace hats {

// Answers each look once and remembers it; later looks at the same hat are
// served from memory.
class CachingObserver final : public Observer {
 public:
  explicit CachingObserver(Observer& base) : base_(base) {}
  Color look(LogicianId target) override;

 private:
  Observer& base_;
  std::map<LogicianId, Color> seen_;
};

// Finite (n, n, 2): guess self - (sum of the others) mod n.
Profile modular_sum(std::size_t n);
// Finite (lambda, lambda*(gamma-1), gamma): with M = lambda*(gamma-1), logician
// i guesses {(b - s) mod M : b in block i}, block i = [i(gamma-1), (i+1)(gamma-1)),
// s the sum of the others mod M.
Profile block_cover(std::size_t lambda, std::uint64_t gamma);
// (2, naturals, finite lists): guess {0, ..., other hat}.
Profile initial_segment_pair();
// (2, ordinals, finite lists): guess every ordinal whose code is at most the code of the other hat.
Profile code_segment_pair();
// (lambda, ordinals, finite lists): drop the holder of the largest visible hat
// (lowest id on ties) and recurse below it; two remaining logicians use the
// code segment below the bound.
Profile ordinal_recursive(std::size_t lambda);
// Chain visibility: look at n+1, guess {0, ..., h(n+1)}; the empty list past the window.
Profile neighbor_initial_segment();
// Same rule under the opposite-parity visibility.
Profile parity_chain();
// Every logician guesses the same list without looking.
Profile constant_guess(std::vector<Color> colors);

// Seeded pseudo-random profile that only makes legal looks for spec: each
// logician scans the hats it may see and looks at some of them, then guesses
// list_size distinct colours below guess_range, all chosen by hashing the seed,
// its id and what it saw.
Profile sampled_profile(const GameSpec& spec, std::uint64_t seed, std::size_t list_size,
                        std::uint64_t guess_range, std::size_t max_looks = 8);

// Indexed strategies N -> profile plus an optional extra profile.
class StrategyFamily {
 public:
  using Member = std::function<Profile(std::size_t)>;

  StrategyFamily() = default;
  StrategyFamily(std::string name, Member member, std::optional<Profile> star = std::nullopt);

  const std::string& name() const { return name_; }
  Profile member(std::size_t n) const;
  const std::optional<Profile>& star() const { return star_; }
  // Single enumeration of everything: the extra profile first when present,
  // then member(0), member(1), ...
  Profile indexed(std::size_t k) const;

 private:
  std::string name_;
  Member member_;
  std::optional<Profile> star_;
  std::shared_ptr<std::map<std::size_t, Profile>> cache_ = std::make_shared<std::map<std::size_t, Profile>>();
};

// member(N): logician n looks at {0..N} minus itself and guesses the union of
// f_j(t) over members j <= N and tuples t of the seen colours. Extra profile:
// guess the colours of all logicians below n.
StrategyFamily family_to_strategies(const FunctionFamily& family);
// Chain version: member(N) looks at n+1..n+N and guesses the union of f_j(t)
// over j <= N and tuples of those colours, together with the colours themselves.
StrategyFamily family_to_forward_strategies(const FunctionFamily& family);

// Reads the profile on the first window logicians as one table-backed member
// per logician: arity window-1, arguments the other hats in id order, palette
// {0..k-1}. Throws CapExceeded when k^(window-1) exceeds cap.
FunctionFamily strategies_to_family(const Profile& profile, std::size_t window, std::size_t look_budget,
                                    std::uint64_t k, std::uint64_t cap = 1u << 20);

// Logician x plays as logician x/2 of group x%2. It searches the least N such
// that some logician below N of the other group wins under some member below
// N, then guesses the union of its own member(N') guesses for N' < N. Looking
// past the window ends the search with an empty guess.
Profile combine_two_groups(const StrategyFamily& family);
// Chain version: the least N such that a logician in i+1..i+N wins under
// indexed(k) for some k <= N; guess the union of indexed(k) for k <= N.
Profile combine_well_ordered(const StrategyFamily& family);
// Chain: find the least m > n that wins under tau, its position d in tau_m's
// list, and guess the first d+1 entries of tau_n's list.
Profile shrink_guess_lists(const Profile& tau);
// Chain: logicians in positions (ascending ids; all logicians when absent).
// Logician n = e(p) plays rho as logician p on the positions of h(e(q)) in
// tau_{e(q)}'s list, q > p, then guesses tau_n's entries at the positions rho
// names. A missing position, one at least delta, or n outside the positions
// gives the empty list.
Profile compose_cardinality(const Profile& tau, const Profile& rho, std::uint64_t delta,
                            std::optional<std::vector<LogicianId>> positions = std::nullopt);

}  // namespace hats

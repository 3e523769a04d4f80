#pragma once

// Game descriptions: who plays, who may look at whom, which colours exist and
// how long a guess list may be; plus hat colourings.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hats/color.hpp"

namespace hats {

using LogicianId = std::size_t;

// Finite strict partial order on {0, ..., size-1}.
class Poset {
 public:
  Poset() = default;
  // Takes the transitive closure of the given pairs (p < q). Throws
  // std::invalid_argument if the closure is not irreflexive.
  static Poset from_relations(std::size_t size,
                              const std::vector<std::pair<std::size_t, std::size_t>>& less_pairs);
  static Poset antichain(std::size_t size);
  static Poset chain(std::size_t size);

  std::size_t size() const { return size_; }
  bool less(std::size_t p, std::size_t q) const { return less_[p * size_ + q] != 0; }
  std::vector<std::size_t> above(std::size_t p) const;
  std::vector<std::pair<std::size_t, std::size_t>> relations() const;
  // Repeatedly removes the lowest-id maximal element.
  std::vector<std::size_t> reverse_topological_order() const;

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> less_;
};

// Isomorphism invariant: the least relation bitmask (bit p*size+q for p < q)
// over all relabellings. Sizes up to 8.
std::uint64_t canonical_code(const Poset& poset);
// One representative per isomorphism class of posets on exactly size
// elements, each relabelled to its canonical code, in increasing code order.
// Throws CapExceeded above size 6.
std::vector<Poset> unlabeled_posets(std::size_t size);

struct Population {
  bool omega = false;
  std::size_t count = 0;

  static Population finite(std::size_t n) { return {false, n}; }
  static Population countable() { return {true, 0}; }

  friend bool operator==(const Population&, const Population&) = default;
};

enum class VisibilityKind { Full, Chain, ParityChain, Order };

// Full: anyone but yourself. Chain: p sees q iff q > p. ParityChain: p sees q
// iff q > p and q - p is odd. Order: p sees q iff p < q in the poset.
struct Visibility {
  VisibilityKind kind = VisibilityKind::Full;
  std::optional<Poset> poset;

  static Visibility full() { return {VisibilityKind::Full, std::nullopt}; }
  static Visibility chain() { return {VisibilityKind::Chain, std::nullopt}; }
  static Visibility parity_chain() { return {VisibilityKind::ParityChain, std::nullopt}; }
  static Visibility order(Poset p) { return {VisibilityKind::Order, std::move(p)}; }

  friend bool operator==(const Visibility&, const Visibility&) = default;
};

enum class PaletteKind { Finite, Naturals, CnfOrdinals };

struct Palette {
  PaletteKind kind = PaletteKind::Finite;
  std::uint64_t size = 0;  // only for Finite

  static Palette finite(std::uint64_t k) { return {PaletteKind::Finite, k}; }
  static Palette naturals() { return {PaletteKind::Naturals, 0}; }
  static Palette cnf_ordinals() { return {PaletteKind::CnfOrdinals, 0}; }

  bool contains(const Color& c) const;
  std::string to_string() const;

  friend bool operator==(const Palette&, const Palette&) = default;
};

// finite_list(): any finite list (gamma = omega). at_most(g): lists of at most
// g colours (gamma = g + 1).
struct GuessBound {
  bool bounded = false;
  std::uint64_t max = 0;

  static GuessBound finite_list() { return {false, 0}; }
  static GuessBound at_most(std::uint64_t g) { return {true, g}; }

  bool allows(std::size_t list_size) const { return !bounded || list_size <= max; }

  friend bool operator==(const GuessBound&, const GuessBound&) = default;
};

struct GameSpec {
  Population population;
  Visibility visibility;
  Palette palette;
  GuessBound guess_bound;
  // Set by truncate(): looks at ids >= population.count answer OUT_OF_WINDOW
  // instead of being visibility violations.
  bool windowed = false;

  // The finite (lambda, kappa, gamma) game with full visibility.
  static GameSpec finite_game(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma);

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
  bool may_look(LogicianId from, LogicianId to) const;
  std::size_t logician_count() const;
  std::string describe() const;

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

// Per-logician colour distributions for generated colourings.
//   Uniform: uniform on {0, ..., k-1}.
//   BlockGeometric: for logician n, with B = 2^(n+2), colour m has probability
//     p_n(m) = 2^-(n+2) * 2^-(floor(m / B) + 1),
//   so 0 < p_n(m) <= 2^-(n+3) and the masses sum to 1.
struct ColorDistribution {
  enum class Kind { Uniform, BlockGeometric };
  Kind kind = Kind::Uniform;
  std::uint64_t k = 1;

  static ColorDistribution uniform(std::uint64_t k) { return {Kind::Uniform, k}; }
  static ColorDistribution block_geometric() { return {Kind::BlockGeometric, 0}; }

  Color sample(LogicianId n, std::mt19937_64& rng) const;
  // Exact probability that logician n receives colour m.
  double probability(LogicianId n, std::uint64_t m) const;

  friend bool operator==(const ColorDistribution&, const ColorDistribution&) = default;
};

class Coloring {
 public:
  enum class Kind { Table, Support, Generated };

  Coloring() = default;
  static Coloring table(std::vector<Color> colors);
  // Colours listed in support, fallback everywhere else.
  static Coloring with_default(std::map<LogicianId, Color> support, Color fallback);
  // Colour of logician i drawn from dist with a generator seeded by (seed, i).
  static Coloring generated(ColorDistribution dist, std::uint64_t seed);

  Kind kind() const { return kind_; }
  Color at(LogicianId id) const;
  std::vector<Color> prefix(std::size_t n) const;
  // Copy with one hat replaced.
  Coloring with_color(LogicianId id, Color c) const;

  const std::vector<Color>& table_colors() const { return table_; }
  const std::map<LogicianId, Color>& support() const { return support_; }
  const Color& fallback() const { return fallback_; }
  const ColorDistribution& distribution() const { return distribution_; }
  std::uint64_t seed() const { return seed_; }

  std::string to_string(std::size_t n) const;

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  Kind kind_ = Kind::Table;
  std::vector<Color> table_;
  std::map<LogicianId, Color> support_;
  Color fallback_;
  ColorDistribution distribution_;
  std::uint64_t seed_ = 0;
};

}  // namespace hats

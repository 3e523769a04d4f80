#include "hats/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hats/errors.hpp"
#include "hats/random.hpp"

namespace hats {

std::string Color::to_string() const {
  if (is_out_of_window()) return "OUT_OF_WINDOW";
  if (is_natural()) return std::to_string(natural());
  return ordinal().to_string();
}

std::size_t Color::hash() const {
  if (is_out_of_window()) return 0x5bd1e995;
  if (is_natural()) return static_cast<std::size_t>(splitmix64(natural()));
  return std::hash<std::string>{}(ordinal().to_string());
}

std::strong_ordering operator<=>(const Color& a, const Color& b) {
  if (auto c = a.value_.index() <=> b.value_.index(); c != 0) return c;
  if (a.is_natural()) return a.natural() <=> b.natural();
  if (a.is_ordinal()) return compare(a.ordinal(), b.ordinal());
  return std::strong_ordering::equal;
}

Poset Poset::from_relations(std::size_t size,
                            const std::vector<std::pair<std::size_t, std::size_t>>& less_pairs) {
  Poset p;
  p.size_ = size;
  p.less_.assign(size * size, 0);
  for (auto [a, b] : less_pairs) {
    if (a >= size || b >= size) throw std::invalid_argument("Poset: element out of range");
    p.less_[a * size + b] = 1;
  }
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t i = 0; i < size; ++i)
      if (p.less(i, k))
        for (std::size_t j = 0; j < size; ++j)
          if (p.less(k, j)) p.less_[i * size + j] = 1;
  for (std::size_t i = 0; i < size; ++i)
    if (p.less(i, i)) throw std::invalid_argument("Poset: relation has a cycle");
  return p;
}

Poset Poset::antichain(std::size_t size) { return from_relations(size, {}); }

Poset Poset::chain(std::size_t size) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < size; ++i) pairs.emplace_back(i, i + 1);
  return from_relations(size, pairs);
}

std::vector<std::size_t> Poset::above(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < size_; ++q)
    if (less(p, q)) out.push_back(q);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Poset::relations() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < size_; ++p)
    for (std::size_t q = 0; q < size_; ++q)
      if (less(p, q)) out.emplace_back(p, q);
  return out;
}

std::vector<std::size_t> Poset::reverse_topological_order() const {
  std::vector<std::size_t> order;
  std::vector<bool> done(size_, false);
  while (order.size() < size_) {
    for (std::size_t p = 0; p < size_; ++p) {
      if (done[p]) continue;
      bool maximal = true;
      for (std::size_t q = 0; q < size_ && maximal; ++q)
        if (!done[q] && less(p, q)) maximal = false;
      if (maximal) {
        done[p] = true;
        order.push_back(p);
        break;
      }
    }
  }
  return order;
}

namespace {

Poset poset_from_code(std::size_t n, std::uint64_t code) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (code >> (p * n + q) & 1) pairs.emplace_back(p, q);
  return Poset::from_relations(n, pairs);
}

}  // namespace

std::uint64_t canonical_code(const Poset& poset) {
  const std::size_t n = poset.size();
  if (n > 8) throw CapExceeded("canonical_code poset size", n, 8);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::uint64_t best = ~std::uint64_t{0};
  do {
    // New label i stands for old element perm[i].
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n && code <= best; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (poset.less(perm[i], perm[j])) code |= std::uint64_t{1} << (i * n + j);
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n == 0 ? 0 : best;
}

std::vector<Poset> unlabeled_posets(std::size_t size) {
  if (size > 6) throw CapExceeded("unlabeled_posets size", size, 6);
  std::vector<Poset> level{Poset::antichain(0)};
  for (std::size_t n = 0; n < size; ++n) {
    // Every poset on n+1 elements is one on n plus a maximal element above a down-set.
    std::set<std::uint64_t> codes;
    for (const Poset& base : level) {
      for (std::uint64_t below = 0; below < (std::uint64_t{1} << n); ++below) {
        bool down_closed = true;
        for (std::size_t q = 0; q < n && down_closed; ++q)
          if (below >> q & 1)
            for (std::size_t p = 0; p < n; ++p)
              if (base.less(p, q) && !(below >> p & 1)) down_closed = false;
        if (!down_closed) continue;
        auto pairs = base.relations();
        for (std::size_t p = 0; p < n; ++p)
          if (below >> p & 1) pairs.emplace_back(p, n);
        codes.insert(canonical_code(Poset::from_relations(n + 1, pairs)));
      }
    }
    level.clear();
    for (std::uint64_t code : codes) level.push_back(poset_from_code(n + 1, code));
  }
  return level;
}

bool Palette::contains(const Color& c) const {
  switch (kind) {
    case PaletteKind::Finite:
      return c.is_natural() && c.natural() < size;
    case PaletteKind::Naturals:
      return c.is_natural();
    case PaletteKind::CnfOrdinals:
      return c.is_ordinal();
  }
  return false;
}

std::string Palette::to_string() const {
  switch (kind) {
    case PaletteKind::Finite:
      return std::to_string(size);
    case PaletteKind::Naturals:
      return "naturals";
    case PaletteKind::CnfOrdinals:
      return "cnf";
  }
  return "?";
}

GameSpec GameSpec::finite_game(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma) {
  if (gamma < 2) throw std::invalid_argument("finite_game: gamma must be at least 2");
  return GameSpec{Population::finite(lambda), Visibility::full(), Palette::finite(kappa),
                  GuessBound::at_most(gamma - 1)};
}

void GameSpec::validate() const {
  if (!population.omega && population.count == 0)
    throw std::invalid_argument("GameSpec: empty population");
  if (visibility.kind == VisibilityKind::Order) {
    if (population.omega) throw std::invalid_argument("GameSpec: poset visibility needs a finite population");
    if (!visibility.poset || visibility.poset->size() != population.count)
      throw std::invalid_argument("GameSpec: poset size does not match population");
  }
  if (guess_bound.bounded && guess_bound.max < 1)
    throw std::invalid_argument("GameSpec: AT_MOST(g) needs g >= 1");
  if (palette.kind == PaletteKind::Finite && palette.size == 0)
    throw std::invalid_argument("GameSpec: empty palette");
}

bool GameSpec::may_look(LogicianId from, LogicianId to) const {
  if (from == to) return false;
  switch (visibility.kind) {
    case VisibilityKind::Full:
      return true;
    case VisibilityKind::Chain:
      return to > from;
    case VisibilityKind::ParityChain:
      return to > from && (to - from) % 2 == 1;
    case VisibilityKind::Order:
      return from < visibility.poset->size() && to < visibility.poset->size() &&
             visibility.poset->less(from, to);
  }
  return false;
}

std::size_t GameSpec::logician_count() const {
  if (population.omega) throw std::invalid_argument("GameSpec: population is omega");
  return population.count;
}

std::string GameSpec::describe() const {
  std::ostringstream out;
  out << "(" << (population.omega ? std::string("omega") : std::to_string(population.count)) << ", "
      << palette.to_string() << ", "
      << (guess_bound.bounded ? std::to_string(guess_bound.max + 1) : std::string("omega")) << ")";
  switch (visibility.kind) {
    case VisibilityKind::Full:
      break;
    case VisibilityKind::Chain:
      out << " chain";
      break;
    case VisibilityKind::ParityChain:
      out << " parity-chain";
      break;
    case VisibilityKind::Order:
      out << " poset";
      break;
  }
  if (windowed) out << " window";
  return out.str();
}

Color ColorDistribution::sample(LogicianId n, std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::Uniform:
      return std::uniform_int_distribution<std::uint64_t>(0, k - 1)(rng);
    case Kind::BlockGeometric: {
      if (n > 56) throw std::invalid_argument("BlockGeometric: logician index too large");
      std::uint64_t block_size = std::uint64_t{1} << (n + 2);
      std::uint64_t block = std::geometric_distribution<std::uint64_t>(0.5)(rng);
      std::uint64_t offset = std::uniform_int_distribution<std::uint64_t>(0, block_size - 1)(rng);
      return block * block_size + offset;
    }
  }
  return 0;
}

double ColorDistribution::probability(LogicianId n, std::uint64_t m) const {
  switch (kind) {
    case Kind::Uniform:
      return m < k ? 1.0 / static_cast<double>(k) : 0.0;
    case Kind::BlockGeometric: {
      std::uint64_t block_size = std::uint64_t{1} << (n + 2);
      std::uint64_t block = m / block_size;
      return std::ldexp(1.0, -static_cast<int>(n + 2)) * std::ldexp(1.0, -static_cast<int>(block + 1));
    }
  }
  return 0.0;
}

Coloring Coloring::table(std::vector<Color> colors) {
  Coloring c;
  c.kind_ = Kind::Table;
  c.table_ = std::move(colors);
  return c;
}

Coloring Coloring::with_default(std::map<LogicianId, Color> support, Color fallback) {
  Coloring c;
  c.kind_ = Kind::Support;
  c.support_ = std::move(support);
  c.fallback_ = std::move(fallback);
  return c;
}

Coloring Coloring::generated(ColorDistribution dist, std::uint64_t seed) {
  Coloring c;
  c.kind_ = Kind::Generated;
  c.distribution_ = dist;
  c.seed_ = seed;
  return c;
}

Color Coloring::at(LogicianId id) const {
  switch (kind_) {
    case Kind::Table:
      if (id >= table_.size()) throw std::out_of_range("Coloring: logician outside the table");
      return table_[id];
    case Kind::Support: {
      auto it = support_.find(id);
      return it == support_.end() ? fallback_ : it->second;
    }
    case Kind::Generated: {
      auto rng = derived_rng(seed_, id);
      return distribution_.sample(id, rng);
    }
  }
  return Color{};
}

std::vector<Color> Coloring::prefix(std::size_t n) const {
  std::vector<Color> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

Coloring Coloring::with_color(LogicianId id, Color c) const {
  Coloring out = *this;
  switch (kind_) {
    case Kind::Table:
      out.table_.at(id) = std::move(c);
      break;
    case Kind::Support:
      out.support_[id] = std::move(c);
      break;
    case Kind::Generated:
      throw std::invalid_argument("Coloring::with_color: generated colourings are immutable");
  }
  return out;
}

std::string Coloring::to_string(std::size_t n) const {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ",";
    out += at(i).to_string();
  }
  return out;
}

}  // namespace hats

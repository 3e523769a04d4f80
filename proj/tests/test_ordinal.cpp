#include <doctest.h>

#include <map>
#include <set>

#include "hats/errors.hpp"
#include "hats/ordinal.hpp"

using namespace hats;

namespace {

// Ordinals below omega^omega as coefficient maps exponent -> coefficient.
using Poly = std::map<unsigned, std::uint64_t, std::greater<unsigned>>;

Poly poly_add(const Poly& a, const Poly& b) {
  if (b.empty()) return a;
  unsigned lead = b.begin()->first;
  Poly out;
  for (auto [e, c] : a)
    if (e >= lead) out[e] = c;
  for (auto [e, c] : b) out[e] += c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  unsigned deg = a.begin()->first;
  Poly out;
  // Right distributivity: a*(w^e1 c1 + w^e2 c2 + ...) = a*w^e1*c1 + a*w^e2*c2 + ...
  for (auto [e, c] : b) {
    Poly part;
    if (e > 0) {
      part[deg + e] = c;
    } else {
      part = a;
      part[deg] = a.begin()->second * c;
    }
    out = poly_add(out, part);
  }
  return out;
}

int poly_compare(const Poly& a, const Poly& b) {
  auto i = a.begin(), j = b.begin();
  for (; i != a.end() && j != b.end(); ++i, ++j) {
    if (i->first != j->first) return i->first > j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
  }
  if (i == a.end() && j == b.end()) return 0;
  return i == a.end() ? -1 : 1;
}

Ordinal to_ordinal(const Poly& p) {
  std::vector<OrdinalTerm> terms;
  for (auto [e, c] : p) terms.push_back({Ordinal::finite(e), c});
  return Ordinal::from_terms(terms);
}

Poly random_poly(std::mt19937_64& rng) {
  Poly p;
  int terms = static_cast<int>(rng() % 4);
  for (int i = 0; i < terms; ++i) p[rng() % 4] = 1 + rng() % 9;
  return p;
}

// Order type of a finite linear order is its size; sums and products of finite
// well-orders are laid out explicitly and counted.
std::uint64_t concrete_sum(std::uint64_t a, std::uint64_t b) {
  std::vector<std::pair<int, std::uint64_t>> order;
  for (std::uint64_t i = 0; i < a; ++i) order.push_back({0, i});
  for (std::uint64_t i = 0; i < b; ++i) order.push_back({1, i});
  std::sort(order.begin(), order.end());
  return order.size();
}

std::uint64_t concrete_product(std::uint64_t a, std::uint64_t b) {
  // a * b: b copies of a, ordered by copy then position.
  std::set<std::pair<std::uint64_t, std::uint64_t>> order;
  for (std::uint64_t copy = 0; copy < b; ++copy)
    for (std::uint64_t i = 0; i < a; ++i) order.insert({copy, i});
  return order.size();
}

}  // namespace

TEST_CASE("comparison on small cases") {
  CHECK(compare(Ordinal(), Ordinal()) == std::strong_ordering::equal);
  CHECK(Ordinal::omega() > Ordinal::finite(2));
  Ordinal w2 = mul(Ordinal::omega(), Ordinal::finite(2));
  Ordinal w5 = add(Ordinal::omega(), Ordinal::finite(5));
  CHECK(w2 > w5);
  // Table of hand-ordered values, each strictly below the next.
  std::vector<Ordinal> ladder = {Ordinal(),
                                 Ordinal::finite(1),
                                 Ordinal::finite(7),
                                 Ordinal::omega(),
                                 w5,
                                 w2,
                                 Ordinal::omega_power(Ordinal::finite(2)),
                                 Ordinal::omega_power(Ordinal::omega()),
                                 Ordinal::omega_power(Ordinal::omega_power(Ordinal::omega()))};
  for (std::size_t i = 0; i < ladder.size(); ++i)
    for (std::size_t j = 0; j < ladder.size(); ++j) CHECK(((ladder[i] <=> ladder[j]) == (i <=> j)));
}

TEST_CASE("arithmetic identities") {
  const Ordinal w = Ordinal::omega();
  CHECK(add(Ordinal::finite(1), w) == w);
  CHECK(add(w, Ordinal::finite(1)).to_string() == "w + 1");
  CHECK(mul(Ordinal::finite(2), w) == w);
  CHECK(mul(w, Ordinal::finite(2)) == Ordinal::omega_power(Ordinal::finite(1), 2));
  CHECK(succ(w) == add(w, Ordinal::finite(1)));
  CHECK(mul(Ordinal(), w).is_zero());
}

TEST_CASE("finite arithmetic matches concrete well-orders") {
  for (std::uint64_t a = 0; a <= 20; ++a)
    for (std::uint64_t b = 0; b <= 20; ++b) {
      CHECK(add(Ordinal::finite(a), Ordinal::finite(b)) == Ordinal::finite(concrete_sum(a, b)));
      CHECK(mul(Ordinal::finite(a), Ordinal::finite(b)) == Ordinal::finite(concrete_product(a, b)));
    }
}

TEST_CASE("arithmetic below omega^omega matches the polynomial oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    Poly a = random_poly(rng), b = random_poly(rng);
    Ordinal oa = to_ordinal(a), ob = to_ordinal(b);
    REQUIRE(add(oa, ob) == to_ordinal(poly_add(a, b)));
    REQUIRE(mul(oa, ob) == to_ordinal(poly_mul(a, b)));
    REQUIRE(((oa <=> ob) == (poly_compare(a, b) <=> 0)));
  }
}

TEST_CASE("order and algebra laws on random ordinals") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = random_ordinal(rng, 2, 5), b = random_ordinal(rng, 2, 5), c = random_ordinal(rng, 2, 5);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    // Total order: trichotomy and transitivity.
    CHECK(((a < b) + (a == b) + (a > b)) == 1);
    if (a <= b && b <= c) CHECK(a <= c);
    CHECK(add(a, b) >= b);
    CHECK(succ(a) > a);
  }
}

TEST_CASE("coefficient overflow is reported") {
  const Ordinal big = Ordinal::finite(~std::uint64_t{0});
  CHECK_THROWS_AS(add(big, Ordinal::finite(1)), OrdinalOverflow);
  CHECK_THROWS_AS(mul(big, Ordinal::finite(2)), OrdinalOverflow);
}

TEST_CASE("pairing is a bijection") {
  std::set<Natural> seen;
  for (unsigned s = 0; s < 40; ++s)
    for (unsigned y = 0; y <= s; ++y) {
      Natural z = cantor_pair(s - y, y);
      CHECK(seen.insert(z).second);
      auto [x2, y2] = cantor_unpair(z);
      CHECK(x2 == s - y);
      CHECK(y2 == y);
    }
  // Diagonals below 40 fill an initial segment of the naturals.
  CHECK(seen.size() == 40 * 41 / 2);
  CHECK(*seen.rbegin() == 40 * 41 / 2 - 1);
}

TEST_CASE("code roundtrip and anchors") {
  CHECK(code(Ordinal()) == 0);
  Ordinal x = add(Ordinal::omega_power(Ordinal::omega()), Ordinal::finite(3));
  CHECK(decode(code(x)) == x);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal(rng, 3, 9);
    REQUIRE(decode(code(a)) == a);
  }
}

TEST_CASE("decoding small naturals") {
  std::set<Ordinal> values;
  int defined = 0;
  for (int n = 0; n <= 100; ++n) {
    if (auto o = decode(Natural(n))) {
      ++defined;
      CHECK(code(*o) == n);
      CHECK(values.insert(*o).second);
    }
  }
  CHECK(defined <= 101);
  CHECK(defined >= 2);
}

TEST_CASE("initial code segments") {
  CHECK(below_with_code_at_most(Ordinal(), 999).empty());
  auto three = code(Ordinal::finite(3));
  auto seg = below_with_code_at_most(Ordinal::finite(5), static_cast<std::uint64_t>(three));
  CHECK(std::find(seg.begin(), seg.end(), Ordinal::finite(3)) != seg.end());
  for (const auto& o : seg) CHECK(o < Ordinal::finite(5));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Ordinal a = random_ordinal_with_code_at_most(rng, 4000);
    Ordinal b = random_ordinal_with_code_at_most(rng, 4000);
    if (b < a) {
      auto n = static_cast<std::uint64_t>(code(b));
      auto s = below_with_code_at_most(a, n);
      CHECK(std::find(s.begin(), s.end(), b) != s.end());
      CHECK(s.size() <= n + 1);
      for (const auto& o : s) CHECK(o < a);
    }
  }
  CHECK_THROWS_AS(below_with_code_at_most(std::optional<Ordinal>{}, enumeration_cap() + 1), CapExceeded);
}

TEST_CASE("text roundtrip") {
  CHECK(parse_ordinal("1 + w") == Ordinal::omega());
  CHECK(parse_ordinal("w^(w^2)*3 + w*2 + 5").to_string() == "w^(w^2)*3 + w*2 + 5");
  CHECK(parse_ordinal("0").is_zero());
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal(rng, 3, 9);
    REQUIRE(parse_ordinal(a.to_string()) == a);
  }
  CHECK_THROWS_AS(parse_ordinal("w^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ordinal("3 +"), std::invalid_argument);
}

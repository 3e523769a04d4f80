#pragma once

// Ordinals below epsilon_0 in Cantor normal form, with an injective coding
// into the naturals used to embed any initial segment into omega.

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hats {

using Natural = boost::multiprecision::cpp_int;

struct OrdinalTerm;

class Ordinal {
 public:
  // Zero.
  Ordinal() = default;

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  // omega^exponent * coefficient; coefficient must be positive.
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient = 1);
  // Builds from terms that must already be in normal form; throws otherwise.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  // Value of a finite ordinal; throws std::domain_error when infinite.
  std::uint64_t finite_value() const;

  std::string to_string() const;

  friend std::strong_ordering compare(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    return compare(a, b);
  }
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
Ordinal succ(const Ordinal& a);

// Injective coding: the empty term list codes to 0 and a list (t, rest) codes
// to 1 + pair(pair(code(t.exponent), t.coefficient - 1), code(rest)), with
// Cantor pairing.
Natural code(const Ordinal& a);
// Inverse of code; absent when n names a term list that is not in normal form.
std::optional<Ordinal> decode(const Natural& n);

// Cantor pairing and its inverse.
Natural cantor_pair(const Natural& x, const Natural& y);
std::pair<Natural, Natural> cantor_unpair(const Natural& z);

// {g < bound : code(g) <= n}, computed by decoding 0..n. A missing bound
// means no upper limit. Throws CapExceeded when n exceeds enumeration_cap().
std::vector<Ordinal> below_with_code_at_most(const std::optional<Ordinal>& bound,
                                             std::uint64_t n);
std::vector<Ordinal> below_with_code_at_most(const Ordinal& bound, std::uint64_t n);
std::uint64_t enumeration_cap();

// Parses "w^(w^2)*3 + w*2 + 5"; sums are evaluated with ordinal addition so
// "1 + w" parses to w. Accepts 'w' or the UTF-8 omega. Throws
// std::invalid_argument on malformed text.
Ordinal parse_ordinal(std::string_view text);

// Random ordinal: at most max_terms terms per level, exponents nested at most
// depth levels, coefficients in [1, coefficient_bound].
Ordinal random_ordinal(std::mt19937_64& rng, int depth, std::uint64_t coefficient_bound,
                       int max_terms = 3);
// Uniformly decodes naturals in [0, max_code] until one is a valid code.
Ordinal random_ordinal_with_code_at_most(std::mt19937_64& rng, std::uint64_t max_code);

}  // namespace hats

#include "hats/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <stdexcept>

#include "hats/errors.hpp"

namespace hats {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OrdinalOverflow("ordinal coefficient overflow in addition");
  }
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OrdinalOverflow("ordinal coefficient overflow in multiplication");
  }
  return out;
}

bool is_normal(const std::vector<OrdinalTerm>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) return false;
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent)) return false;
  }
  return true;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal out;
  if (n > 0) out.terms_.push_back(OrdinalTerm{Ordinal{}, n});
  return out;
}

Ordinal Ordinal::omega() { return omega_power(finite(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
  if (coefficient == 0) throw std::invalid_argument("omega_power: zero coefficient");
  Ordinal out;
  out.terms_.push_back(OrdinalTerm{exponent, coefficient});
  return out;
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  if (!is_normal(terms)) throw std::invalid_argument("Ordinal::from_terms: not in normal form");
  Ordinal out;
  out.terms_ = std::move(terms);
  return out;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw std::domain_error("finite_value of an infinite ordinal");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i > 0) out += " + ";
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (t.exponent.is_finite()) {
      std::uint64_t e = t.exponent.finite_value();
      if (e != 1) out += "^" + std::to_string(e);
    } else {
      out += "^(" + t.exponent.to_string() + ")";
    }
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms_;
  const auto& y = b.terms_;
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(x[i].exponent, y[i].exponent); c != 0) return c;
    if (auto c = x[i].coefficient <=> y[i].coefficient; c != 0) return c;
  }
  return x.size() <=> y.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms().front().exponent;
  std::vector<OrdinalTerm> out;
  const auto& bt = b.terms();
  std::size_t from = 0;
  for (const auto& t : a.terms()) {
    auto c = compare(t.exponent, lead);
    if (c > 0) {
      out.push_back(t);
    } else {
      if (c == 0) {
        out.push_back(OrdinalTerm{lead, checked_add(t.coefficient, bt.front().coefficient)});
        from = 1;
      }
      break;
    }
  }
  out.insert(out.end(), bt.begin() + static_cast<std::ptrdiff_t>(from), bt.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal{};
  const auto& at = a.terms();
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      std::vector<OrdinalTerm> terms = at;
      terms.front().coefficient = checked_mul(terms.front().coefficient, t.coefficient);
      piece = Ordinal::from_terms(std::move(terms));
    } else {
      piece = Ordinal::omega_power(add(at.front().exponent, t.exponent), t.coefficient);
    }
    result = add(result, piece);
  }
  return result;
}

Ordinal succ(const Ordinal& a) { return add(a, Ordinal::finite(1)); }

Natural cantor_pair(const Natural& x, const Natural& y) {
  Natural s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
  Natural disc = 8 * z + 1;
  Natural w = (boost::multiprecision::sqrt(disc) - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural y = z - t;
  return {w - y, y};
}

Natural code(const Ordinal& a) {
  Natural rest = 0;
  const auto& terms = a.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    Natural term = cantor_pair(code(it->exponent), Natural(it->coefficient - 1));
    rest = 1 + cantor_pair(term, rest);
  }
  return rest;
}

namespace {

// Lazily grown table of decode(0..size-1), shared across threads.
class DecodeTable {
 public:
  static DecodeTable& instance() {
    static DecodeTable table;
    return table;
  }

  // Runs fn over entries 0..n while holding the lock.
  template <typename Fn>
  void visit(std::uint64_t n, Fn&& fn) {
    std::lock_guard lock(mutex_);
    grow(n);
    for (std::uint64_t i = 0; i <= n; ++i) fn(entries_[i]);
  }

  std::optional<Ordinal> lookup(std::uint64_t n) {
    std::lock_guard lock(mutex_);
    grow(n);
    return entries_[n];
  }

 private:
  void grow(std::uint64_t n) {
    while (entries_.size() <= n) {
      entries_.push_back(decode_with(Natural(entries_.size())));
    }
  }

  // Every component code is strictly smaller than its parent, so the table
  // already holds them.
  std::optional<Ordinal> decode_with(const Natural& n) {
    if (n == 0) return Ordinal{};
    auto [term, rest] = cantor_unpair(n - 1);
    auto [exp_code, coeff] = cantor_unpair(term);
    const auto& exponent = entries_[static_cast<std::size_t>(exp_code)];
    const auto& tail = entries_[static_cast<std::size_t>(rest)];
    if (!exponent || !tail) return std::nullopt;
    if (coeff >= Natural(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
    if (!tail->is_zero() && !(tail->terms().front().exponent < *exponent)) return std::nullopt;
    std::vector<OrdinalTerm> terms;
    terms.reserve(tail->terms().size() + 1);
    terms.push_back(OrdinalTerm{*exponent, static_cast<std::uint64_t>(coeff) + 1});
    terms.insert(terms.end(), tail->terms().begin(), tail->terms().end());
    return Ordinal::from_terms(std::move(terms));
  }

  std::mutex mutex_;
  std::vector<std::optional<Ordinal>> entries_;
};

constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;
constexpr std::uint64_t kTableDecodeLimit = std::uint64_t{1} << 16;

}  // namespace

std::uint64_t enumeration_cap() { return kEnumerationCap; }

std::optional<Ordinal> decode(const Natural& n) {
  if (n < 0) return std::nullopt;
  if (n < kTableDecodeLimit) {
    return DecodeTable::instance().lookup(static_cast<std::uint64_t>(n));
  }
  auto [term, rest] = cantor_unpair(n - 1);
  auto [exp_code, coeff] = cantor_unpair(term);
  auto exponent = decode(exp_code);
  if (!exponent) return std::nullopt;
  auto tail = decode(rest);
  if (!tail) return std::nullopt;
  if (coeff >= Natural(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
  if (!tail->is_zero() && !(tail->terms().front().exponent < *exponent)) return std::nullopt;
  std::vector<OrdinalTerm> terms;
  terms.push_back(OrdinalTerm{*exponent, static_cast<std::uint64_t>(coeff) + 1});
  terms.insert(terms.end(), tail->terms().begin(), tail->terms().end());
  return Ordinal::from_terms(std::move(terms));
}

std::vector<Ordinal> below_with_code_at_most(const std::optional<Ordinal>& bound,
                                             std::uint64_t n) {
  if (n > kEnumerationCap) {
    throw CapExceeded("below_with_code_at_most", n, kEnumerationCap);
  }
  std::vector<Ordinal> out;
  if (bound && bound->is_zero()) return out;
  DecodeTable::instance().visit(n, [&](const std::optional<Ordinal>& entry) {
    if (entry && (!bound || *entry < *bound)) out.push_back(*entry);
  });
  return out;
}

std::vector<Ordinal> below_with_code_at_most(const Ordinal& bound, std::uint64_t n) {
  return below_with_code_at_most(std::optional<Ordinal>(bound), n);
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Ordinal parse() {
    Ordinal out = sum();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return out;
  }

 private:
  Ordinal sum() {
    Ordinal out = product();
    while (accept('+')) out = add(out, product());
    return out;
  }

  Ordinal product() {
    Ordinal out = power();
    while (accept('*')) out = mul(out, power());
    return out;
  }

  Ordinal power() {
    skip_space();
    bool is_omega = peek_omega();
    Ordinal base = primary();
    if (accept('^')) {
      if (!is_omega) fail("only w may be raised to a power");
      return Ordinal::omega_power(power());
    }
    return base;
  }

  Ordinal primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Ordinal inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (consume_omega()) return Ordinal::omega();
    if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::uint64_t value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = checked_add(checked_mul(value, 10), static_cast<std::uint64_t>(text_[pos_] - '0'));
        ++pos_;
      }
      return Ordinal::finite(value);
    }
    fail("unexpected character");
  }

  bool peek_omega() {
    return text_.substr(pos_, 1) == "w" || text_.substr(pos_, 2) == "\xcf\x89";
  }

  bool consume_omega() {
    if (text_.substr(pos_, 1) == "w") {
      pos_ += 1;
      return true;
    }
    if (text_.substr(pos_, 2) == "\xcf\x89") {
      pos_ += 2;
      return true;
    }
    return false;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("parse_ordinal: " + why + " at offset " + std::to_string(pos_) +
                                " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) { return Parser(text).parse(); }

Ordinal random_ordinal(std::mt19937_64& rng, int depth, std::uint64_t coefficient_bound,
                       int max_terms) {
  std::uniform_int_distribution<std::uint64_t> coeff(1, std::max<std::uint64_t>(1, coefficient_bound));
  if (depth <= 0) {
    std::uniform_int_distribution<std::uint64_t> value(0, coefficient_bound);
    return Ordinal::finite(value(rng));
  }
  std::uniform_int_distribution<int> count(0, std::max(0, max_terms));
  std::vector<Ordinal> exponents;
  int n = count(rng);
  for (int i = 0; i < n; ++i) exponents.push_back(random_ordinal(rng, depth - 1, coefficient_bound, max_terms));
  std::sort(exponents.begin(), exponents.end(), std::greater<>());
  exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());
  std::vector<OrdinalTerm> terms;
  for (auto& e : exponents) terms.push_back(OrdinalTerm{std::move(e), coeff(rng)});
  return Ordinal::from_terms(std::move(terms));
}

Ordinal random_ordinal_with_code_at_most(std::mt19937_64& rng, std::uint64_t max_code) {
  std::uniform_int_distribution<std::uint64_t> pick(0, max_code);
  for (;;) {
    if (auto o = decode(Natural(pick(rng)))) return *o;
  }
}

}  // namespace hats

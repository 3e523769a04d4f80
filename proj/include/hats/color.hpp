#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "hats/ordinal.hpp"

namespace hats {

// A hat colour: a natural number (finite and natural palettes), a CNF ordinal
// (ordinal palette), or the OUT_OF_WINDOW sentinel returned for looks past the
// end of a truncated game. The sentinel equals no real hat.
class Color {
 public:
  Color() : value_(std::uint64_t{0}) {}
  Color(std::uint64_t n) : value_(n) {}  // NOLINT: implicit by design of the palette
  Color(int n) : value_(static_cast<std::uint64_t>(n)) {}  // NOLINT
  Color(Ordinal o) : value_(std::move(o)) {}  // NOLINT

  static Color out_of_window() {
    Color c;
    c.value_ = OutOfWindow{};
    return c;
  }

  bool is_natural() const { return std::holds_alternative<std::uint64_t>(value_); }
  bool is_ordinal() const { return std::holds_alternative<Ordinal>(value_); }
  bool is_out_of_window() const { return std::holds_alternative<OutOfWindow>(value_); }

  std::uint64_t natural() const { return std::get<std::uint64_t>(value_); }
  const Ordinal& ordinal() const { return std::get<Ordinal>(value_); }

  std::string to_string() const;
  std::size_t hash() const;

  // Sentinel < naturals < ordinals; within a kind, the natural order.
  friend std::strong_ordering operator<=>(const Color& a, const Color& b);
  friend bool operator==(const Color& a, const Color& b) { return (a <=> b) == 0; }

 private:
  struct OutOfWindow {};
  std::variant<OutOfWindow, std::uint64_t, Ordinal> value_;
};

}  // namespace hats

template <>
struct std::hash<hats::Color> {
  std::size_t operator()(const hats::Color& c) const { return c.hash(); }
};

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hats {

// Raised when a search or enumeration would need more work than its cap allows.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(what + ": requires " + std::to_string(required) +
                           " but cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

// Coefficient arithmetic left the range of a machine word.
class OrdinalOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// An adversary declined to run because its precondition does not hold.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hats

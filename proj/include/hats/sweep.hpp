#pragma once

// Threshold table for the finite games with full visibility.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hats/engine.hpp"

namespace hats {

enum class CellVerdict { Winning, Losing, Unknown };
std::string to_string(CellVerdict v);

struct SweepCell {
  std::size_t lambda = 0;
  std::uint64_t gamma = 0;
  std::uint64_t kappa = 0;
  CellVerdict verdict = CellVerdict::Unknown;
  std::string method;
  std::uint64_t colorings_checked = 0;
  std::uint64_t profiles_checked = 0;
  // Winning: the strategy name. Losing: a colouring that defeats block-cover.
  std::string strategy;
  std::optional<Coloring> certificate;
};

struct SweepLimits {
  std::uint64_t coloring_cap = 1u << 20;
  // Largest strategy space searched profile by profile.
  std::uint64_t profile_cap = 10000;
  std::size_t look_budget = 64;
};

// Every profile with lists of exactly min(gamma-1, kappa) colours, each
// logician choosing a list per colouring of the others. Nothing when the
// count exceeds cap.
std::optional<std::uint64_t> strategy_space_size(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma,
                                                 std::uint64_t cap);
// Profile number index of that space, logician 0 most significant.
Profile table_profile(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma, std::uint64_t index);

// kappa <= lambda(gamma-1): block-cover checked on all kappa^lambda colourings.
// Above: the expected number of right guesses, lambda(gamma-1)/kappa, is below
// one, so some colouring defeats every profile; the cell carries the least
// colouring defeating block-cover and, when the space is small enough, checks
// that every profile of the strategy space has a defeating colouring.
SweepCell sweep_cell(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma, const SweepLimits& limits = {});
std::vector<SweepCell> sweep(const std::vector<std::size_t>& lambdas, const std::vector<std::uint64_t>& gammas,
                             const std::vector<std::uint64_t>& kappas, const SweepLimits& limits = {});

std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace hats

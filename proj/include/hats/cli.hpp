#pragma once

// Command-line front end. run() takes the arguments after the program name.
//   0: success (play: somebody won and nobody broke a rule)
//   1: play: nobody won; defeat: no losing colouring exists
//   2: bad input, a broken rule during play, refusals and other errors

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hats/engine.hpp"

namespace hats::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Names accepted by --strategy; parameters go in parentheses, e.g.
// "block-cover(2,3)", "shrink(neighbor)", "constant-guess(4)".
const std::vector<std::string>& strategy_names();
// Throws std::invalid_argument naming the known strategies on an unknown name.
Profile resolve_strategy(const std::string& text, const GameSpec& spec, std::uint64_t seed);

}  // namespace hats::cli

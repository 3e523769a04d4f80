#pragma once

// JSON forms of the library's values. The formats are described in
// docs/formats.md.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hats/adversary.hpp"
#include "hats/engine.hpp"
#include "hats/freesubset.hpp"

namespace hats {

using Json = nlohmann::ordered_json;

// Naturals as numbers, ordinals as CNF strings, the sentinel as null.
Json to_json(const Color& c);
Color color_from_json(const Json& j);
// "5", "w^2*3 + 1"; anything containing w is an ordinal.
Color parse_color(std::string_view text);
// Comma separated colours.
std::vector<Color> parse_color_list(std::string_view text);

Json to_json(const Poset& poset);
Poset poset_from_json(const Json& j);

Json to_json(const GameSpec& spec);
GameSpec spec_from_json(const Json& j);
// "(lambda,kappa,gamma)" with w or omega for countable entries and ord for the
// ordinal palette; "chain(N)" and "parity(N)" for windows of the countable
// chain games with natural colours and finite lists; or a JSON object.
// A countable population is truncated to window when window > 0.
GameSpec parse_spec(std::string_view text, std::size_t window = 0);

Json to_json(const Coloring& coloring, std::size_t n);
Coloring coloring_from_json(const Json& j);

Json to_json(const Transcript& transcript);
Json to_json(const DefeatCertificate& certificate);
Json to_json(const RefutationReport& report);

Json to_json(const FunctionFamily& family);
FunctionFamily family_from_json(const Json& j);
Json to_json(const Partition& partition);
Partition partition_from_json(const Json& j);

std::string read_file(const std::string& path);
Json read_json_file(const std::string& path);

}  // namespace hats

#include "hats/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hats {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::uint64_t parse_count(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("expected a number for ") + what + ", got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument(std::string("expected a number for ") + what + ", got '" + s + "'");
  return v;
}

bool is_omega(const std::string& s) { return s == "w" || s == "omega"; }

std::string visibility_name(VisibilityKind k) {
  switch (k) {
    case VisibilityKind::Full:
      return "full";
    case VisibilityKind::Chain:
      return "chain";
    case VisibilityKind::ParityChain:
      return "parity_chain";
    case VisibilityKind::Order:
      return "poset";
  }
  return "?";
}

Json value_set(const ValueSet& s) { return Json(s); }

}  // namespace

Json to_json(const Color& c) {
  if (c.is_out_of_window()) return nullptr;
  if (c.is_natural()) return c.natural();
  return c.ordinal().to_string();
}

Color color_from_json(const Json& j) {
  if (j.is_null()) return Color::out_of_window();
  if (j.is_number_unsigned()) return Color(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v < 0) throw std::invalid_argument("colour must not be negative");
    return Color(static_cast<std::uint64_t>(v));
  }
  if (j.is_string()) return parse_color(j.get<std::string>());
  throw std::invalid_argument("colour must be a number, a CNF string or null");
}

Color parse_color(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty colour");
  if (s.find('w') != std::string::npos) return Color(parse_ordinal(s));
  return Color(parse_count(s, "colour"));
}

std::vector<Color> parse_color_list(std::string_view text) {
  std::vector<Color> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = text.find(',', start);
    out.push_back(parse_color(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Json to_json(const Poset& poset) {
  Json less = Json::array();
  for (auto [p, q] : poset.relations()) less.push_back({p, q});
  return {{"size", poset.size()}, {"less", less}};
}

Poset poset_from_json(const Json& j) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : j.value("less", Json::array())) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("poset relation must be a pair");
    pairs.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Poset::from_relations(j.at("size").get<std::size_t>(), pairs);
}

Json to_json(const GameSpec& spec) {
  Json j;
  if (spec.population.omega)
    j["population"] = "omega";
  else
    j["population"] = spec.population.count;
  if (spec.visibility.kind == VisibilityKind::Order)
    j["visibility"] = {{"poset", to_json(*spec.visibility.poset)}};
  else
    j["visibility"] = visibility_name(spec.visibility.kind);
  switch (spec.palette.kind) {
    case PaletteKind::Finite:
      j["palette"] = {{"finite", spec.palette.size}};
      break;
    case PaletteKind::Naturals:
      j["palette"] = "naturals";
      break;
    case PaletteKind::CnfOrdinals:
      j["palette"] = "ordinals";
      break;
  }
  if (spec.guess_bound.bounded)
    j["guess_bound"] = {{"at_most", spec.guess_bound.max}};
  else
    j["guess_bound"] = "finite_list";
  j["windowed"] = spec.windowed;
  return j;
}

GameSpec spec_from_json(const Json& j) {
  GameSpec spec;
  const Json& pop = j.at("population");
  if (pop.is_string()) {
    if (!is_omega(pop.get<std::string>())) throw std::invalid_argument("population must be a count or \"omega\"");
    spec.population = Population::countable();
  } else {
    spec.population = Population::finite(pop.get<std::size_t>());
  }
  const Json& vis = j.value("visibility", Json("full"));
  if (vis.is_object()) {
    spec.visibility = Visibility::order(poset_from_json(vis.at("poset")));
  } else {
    std::string v = vis.get<std::string>();
    if (v == "full")
      spec.visibility = Visibility::full();
    else if (v == "chain")
      spec.visibility = Visibility::chain();
    else if (v == "parity_chain")
      spec.visibility = Visibility::parity_chain();
    else
      throw std::invalid_argument("unknown visibility '" + v + "'");
  }
  const Json& pal = j.at("palette");
  if (pal.is_object()) {
    spec.palette = Palette::finite(pal.at("finite").get<std::uint64_t>());
  } else {
    std::string p = pal.get<std::string>();
    if (p == "naturals")
      spec.palette = Palette::naturals();
    else if (p == "ordinals")
      spec.palette = Palette::cnf_ordinals();
    else
      throw std::invalid_argument("unknown palette '" + p + "'");
  }
  const Json& gb = j.value("guess_bound", Json("finite_list"));
  if (gb.is_object())
    spec.guess_bound = GuessBound::at_most(gb.at("at_most").get<std::uint64_t>());
  else if (gb == "finite_list")
    spec.guess_bound = GuessBound::finite_list();
  else
    throw std::invalid_argument("unknown guess bound");
  spec.windowed = j.value("windowed", false);
  spec.validate();
  return spec;
}

GameSpec parse_spec(std::string_view text, std::size_t window) {
  std::string s = trim(text);
  GameSpec spec;
  auto chain_window = [&](std::string_view prefix, Visibility vis) -> std::optional<GameSpec> {
    if (s.rfind(prefix, 0) != 0 || s.back() != ')') return std::nullopt;
    std::size_t n = parse_count(trim(s.substr(prefix.size(), s.size() - prefix.size() - 1)), "window");
    GameSpec g{Population::countable(), std::move(vis), Palette::naturals(), GuessBound::finite_list()};
    return truncate(g, n);
  };
  if (auto g = chain_window("chain(", Visibility::chain())) return *g;
  if (auto g = chain_window("parity(", Visibility::parity_chain())) return *g;
  if (!s.empty() && s.front() == '{') {
    spec = spec_from_json(Json::parse(s));
  } else if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    std::vector<std::string> parts;
    std::stringstream in(s.substr(1, s.size() - 2));
    for (std::string part; std::getline(in, part, ',');) parts.push_back(trim(part));
    if (parts.size() != 3) throw std::invalid_argument("spec triple needs three entries: '" + s + "'");
    spec.visibility = Visibility::full();
    spec.population = is_omega(parts[0]) ? Population::countable() : Population::finite(parse_count(parts[0], "lambda"));
    if (is_omega(parts[1]))
      spec.palette = Palette::naturals();
    else if (parts[1] == "ord" || parts[1] == "ordinals")
      spec.palette = Palette::cnf_ordinals();
    else
      spec.palette = Palette::finite(parse_count(parts[1], "kappa"));
    if (is_omega(parts[2])) {
      spec.guess_bound = GuessBound::finite_list();
    } else {
      std::uint64_t gamma = parse_count(parts[2], "gamma");
      if (gamma < 2) throw std::invalid_argument("gamma must be at least 2");
      spec.guess_bound = GuessBound::at_most(gamma - 1);
    }
    spec.validate();
  } else {
    throw std::invalid_argument("cannot read spec '" + s + "'");
  }
  if (spec.population.omega && window > 0) return truncate(spec, window);
  return spec;
}

Json to_json(const Coloring& coloring, std::size_t n) {
  switch (coloring.kind()) {
    case Coloring::Kind::Table: {
      Json a = Json::array();
      for (const auto& c : coloring.table_colors()) a.push_back(to_json(c));
      return a;
    }
    case Coloring::Kind::Support: {
      Json support = Json::object();
      for (const auto& [id, c] : coloring.support()) support[std::to_string(id)] = to_json(c);
      return {{"support", support}, {"default", to_json(coloring.fallback())}};
    }
    case Coloring::Kind::Generated: {
      const auto& d = coloring.distribution();
      Json dist = d.kind == ColorDistribution::Kind::Uniform ? Json{{"uniform", d.k}} : Json("block_geometric");
      return {{"distribution", dist}, {"seed", coloring.seed()}, {"prefix", to_json(Coloring::table(coloring.prefix(n)), n)}};
    }
  }
  return nullptr;
}

Coloring coloring_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<Color> colors;
    for (const auto& c : j) colors.push_back(color_from_json(c));
    return Coloring::table(std::move(colors));
  }
  if (j.contains("support")) {
    std::map<LogicianId, Color> support;
    for (const auto& [k, v] : j.at("support").items()) support[parse_count(k, "logician")] = color_from_json(v);
    return Coloring::with_default(std::move(support), color_from_json(j.value("default", Json(0))));
  }
  if (j.contains("distribution")) {
    const Json& d = j.at("distribution");
    ColorDistribution dist = d.is_object() ? ColorDistribution::uniform(d.at("uniform").get<std::uint64_t>())
                                           : ColorDistribution::block_geometric();
    if (!d.is_object() && d != "block_geometric") throw std::invalid_argument("unknown distribution");
    return Coloring::generated(dist, j.value("seed", std::uint64_t{0}));
  }
  throw std::invalid_argument("cannot read colouring");
}

Json to_json(const Transcript& t) {
  Json logicians = Json::array();
  for (std::size_t i = 0; i < t.logicians.size(); ++i) {
    const auto& r = t.logicians[i];
    Json looks = Json::array();
    for (const auto& o : r.looks) looks.push_back({{"target", o.target}, {"color", to_json(o.color)}});
    Json guesses = Json::array();
    for (const auto& g : r.guesses) guesses.push_back(to_json(g));
    Json rec = {{"id", i}, {"looks", looks}, {"guesses", guesses}};
    rec["violation"] = r.violation ? Json(to_string(*r.violation)) : Json(nullptr);
    logicians.push_back(rec);
  }
  Json violations = Json::array();
  for (const auto& v : t.verdict.violations) violations.push_back({{"logician", v.logician}, {"rule", to_string(v.rule)}});
  return {{"logicians", logicians},
          {"verdict", {{"winners", t.verdict.winners}, {"violations", violations}, {"won", t.verdict.won()}}}};
}

Json to_json(const DefeatCertificate& cert) {
  Json entries = Json::array();
  for (const auto& e : cert.entries) {
    Json guesses = Json::array();
    for (const auto& g : e.guesses) guesses.push_back(to_json(g));
    Json rec = {{"logician", e.logician}, {"assigned", to_json(e.assigned)}, {"guesses", guesses}};
    rec["violation"] = e.violation ? Json(to_string(*e.violation)) : Json(nullptr);
    entries.push_back(rec);
  }
  return {{"coloring", to_json(cert.coloring, cert.entries.size())}, {"entries", entries}};
}

Json to_json(const RefutationReport& r) {
  Json j = {{"window", r.window}, {"trials", r.trials}, {"wins", r.wins}};
  j["rate"] = r.rate ? Json(*r.rate) : Json(nullptr);
  j["interval"] = r.interval ? Json{r.interval->lower, r.interval->upper} : Json(nullptr);
  j["union_bound"] = r.union_bound;
  return j;
}

Json to_json(const FunctionFamily& family) {
  Json members = Json::array();
  for (const auto& m : family.members()) {
    Json jm = {{"arity", m.arity}};
    if (m.rule) {
      jm["rule"] = m.rule->name;
      jm["params"] = m.rule->params;
    } else {
      Json table = Json::array();
      for (const auto& [args, out] : m.table) table.push_back({args, value_set(out)});
      jm["table"] = table;
      jm["label"] = m.label;
    }
    members.push_back(jm);
  }
  return {{"ground", family.ground()}, {"members", members}};
}

FunctionFamily family_from_json(const Json& j) {
  ValueSet ground;
  if (j.at("ground").is_object()) {
    auto below = j.at("ground").at("below").get<Value>();
    for (Value v = 0; v < below; ++v) ground.push_back(v);
  } else {
    ground = j.at("ground").get<ValueSet>();
  }
  std::vector<FamilyMember> members;
  for (const auto& jm : j.at("members")) {
    std::size_t arity = jm.at("arity").get<std::size_t>();
    if (jm.contains("rule")) {
      members.push_back(FamilyMember::from_rule(jm.at("rule").get<std::string>(), arity,
                                                jm.value("params", std::vector<std::int64_t>{})));
    } else {
      std::map<std::vector<Value>, ValueSet> table;
      for (const auto& row : jm.at("table")) {
        auto args = row.at(0).get<std::vector<Value>>();
        if (args.size() != arity) throw std::invalid_argument("table row has the wrong arity");
        auto out = row.at(1).get<ValueSet>();
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        table[args] = out;
      }
      members.push_back(FamilyMember::from_table(arity, std::move(table), jm.value("label", std::string("table"))));
    }
  }
  return FunctionFamily(std::move(ground), std::move(members));
}

Json to_json(const Partition& p) {
  Json colors = Json::array();
  for (const auto& [tuple, c] : p.color_of) colors.push_back({tuple, c});
  return {{"ground", p.ground}, {"max_size", p.max_size}, {"colors", p.colors}, {"color_of", colors}};
}

Partition partition_from_json(const Json& j) {
  Partition p;
  p.ground = j.at("ground").get<ValueSet>();
  p.max_size = j.at("max_size").get<std::size_t>();
  p.colors = j.at("colors").get<std::uint32_t>();
  for (const auto& row : j.value("color_of", Json::array())) p.color_of[row.at(0).get<ValueSet>()] = row.at(1).get<std::uint32_t>();
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) { return Json::parse(read_file(path)); }

}  // namespace hats

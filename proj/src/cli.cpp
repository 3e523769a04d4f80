#include "hats/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "hats/adversary.hpp"
#include "hats/errors.hpp"
#include "hats/freesubset.hpp"
#include "hats/serialize.hpp"
#include "hats/strategies.hpp"
#include "hats/sweep.hpp"

namespace hats::cli {

namespace {

struct Call {
  std::string name;
  std::vector<std::string> args;
};

// name or name(arg, arg, ...), arguments split on top-level commas.
Call parse_call(const std::string& text) {
  Call call;
  auto open = text.find('(');
  if (open == std::string::npos) {
    call.name = text;
    return call;
  }
  if (text.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
  call.name = text.substr(0, open);
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  int depth = 0;
  std::string cur;
  for (char ch : inner) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      call.args.push_back(cur);
      cur.clear();
    } else if (ch != ' ' || depth > 0) {
      cur += ch;
    }
  }
  if (!cur.empty() || !call.args.empty()) call.args.push_back(cur);
  return call;
}

std::uint64_t arg_count(const Call& c, std::size_t i, std::uint64_t fallback) {
  if (i >= c.args.size()) return fallback;
  return std::stoull(c.args[i]);
}

void want_args(const Call& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi)
    throw std::invalid_argument("strategy '" + c.name + "' takes " + std::to_string(lo) + " to " +
                                std::to_string(hi) + " parameters");
}

std::string known_list() {
  std::string s;
  for (const auto& n : strategy_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

std::string emit(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::uint64_t> parse_range(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(part));
    } else {
      std::uint64_t a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
      for (std::uint64_t v = a; v <= b; ++v) out.push_back(v);
    }
  }
  return out;
}

Coloring read_coloring(const std::string& text) {
  if (!text.empty() && (text.front() == '[' || text.front() == '{')) return coloring_from_json(Json::parse(text));
  if (std::filesystem::is_regular_file(text)) return coloring_from_json(read_json_file(text));
  return Coloring::table(parse_color_list(text));
}

struct Common {
  std::uint64_t seed = 0;
  std::size_t budget = 64;
  std::string out_path;
  std::string format;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {
      "modular-sum", "block-cover", "initial-segment", "code-segment", "ordinal-recursive",
      "neighbor",    "parity",      "constant-guess",  "sampled",      "shrink",
      "compose",     "two-groups",  "well-ordered"};
  return names;
}

Profile resolve_strategy(const std::string& text, const GameSpec& spec, std::uint64_t seed) {
  const Call c = parse_call(text);
  const std::size_t n = spec.population.omega ? 0 : spec.population.count;
  const std::uint64_t g = spec.guess_bound.bounded ? spec.guess_bound.max : 0;
  const std::uint64_t k = spec.palette.kind == PaletteKind::Finite ? spec.palette.size : 0;
  if (c.name == "modular-sum") {
    want_args(c, 0, 1);
    return modular_sum(arg_count(c, 0, n));
  }
  if (c.name == "block-cover") {
    want_args(c, 0, 2);
    if (c.args.size() < 2 && !spec.guess_bound.bounded)
      throw std::invalid_argument("block-cover needs a bounded guess list or explicit (lambda,gamma)");
    return block_cover(arg_count(c, 0, n), arg_count(c, 1, g + 1));
  }
  if (c.name == "initial-segment") return want_args(c, 0, 0), initial_segment_pair();
  if (c.name == "code-segment") return want_args(c, 0, 0), code_segment_pair();
  if (c.name == "ordinal-recursive") {
    want_args(c, 0, 1);
    return ordinal_recursive(arg_count(c, 0, n));
  }
  if (c.name == "neighbor") return want_args(c, 0, 0), neighbor_initial_segment();
  if (c.name == "parity") return want_args(c, 0, 0), parity_chain();
  if (c.name == "constant-guess") {
    std::vector<Color> colors;
    for (const auto& a : c.args) colors.push_back(parse_color(a));
    if (colors.empty()) colors.push_back(Color(0));
    return constant_guess(colors);
  }
  if (c.name == "sampled") {
    want_args(c, 0, 2);
    return sampled_profile(spec, seed, arg_count(c, 0, std::max<std::uint64_t>(g, 1)), arg_count(c, 1, k ? k : 4));
  }
  if (c.name == "shrink") {
    want_args(c, 1, 1);
    return shrink_guess_lists(resolve_strategy(c.args[0], spec, seed));
  }
  if (c.name == "compose") {
    want_args(c, 3, 3);
    return compose_cardinality(resolve_strategy(c.args[0], spec, seed), resolve_strategy(c.args[1], spec, seed),
                               std::stoull(c.args[2]));
  }
  if (c.name == "two-groups") {
    want_args(c, 1, 1);
    return combine_two_groups(family_to_strategies(family_from_json(read_json_file(c.args[0]))));
  }
  if (c.name == "well-ordered") {
    want_args(c, 1, 1);
    return combine_well_ordered(family_to_forward_strategies(family_from_json(read_json_file(c.args[0]))));
  }
  throw std::invalid_argument("unknown strategy '" + c.name + "'; known strategies: " + known_list());
}

namespace {

int cmd_play(const Common& o, const std::string& spec_text, std::size_t window, const std::string& strategy,
             const std::string& coloring_text, std::string& text) {
  GameSpec spec = parse_spec(spec_text, window);
  if (spec.population.omega) throw Error("a countable population needs --N for the window");
  Profile profile = resolve_strategy(strategy, spec, o.seed);
  Coloring coloring = read_coloring(coloring_text);
  const std::size_t n = spec.population.count;
  if (coloring.kind() == Coloring::Kind::Table && coloring.table_colors().size() != n)
    throw Error("colouring has " + std::to_string(coloring.table_colors().size()) + " hats but the game has " +
                std::to_string(n) + " logicians");
  Transcript t = run_game(spec, profile, coloring, o.budget);
  if (o.format == "text") {
    std::ostringstream s;
    s << spec.describe() << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      s << "logician " << i << " hat " << coloring.at(i).to_string() << " guesses {";
      const auto& r = t.logicians[i];
      for (std::size_t j = 0; j < r.guesses.size(); ++j) s << (j ? "," : "") << r.guesses[j].to_string();
      s << "}";
      if (r.violation) s << " " << to_string(*r.violation);
      s << "\n";
    }
    s << (t.verdict.won() ? "WIN" : "LOSS") << "\n";
    text = s.str();
  } else {
    text = emit({{"spec", to_json(spec)},
                 {"strategy", strategy},
                 {"coloring", to_json(coloring, n)},
                 {"transcript", to_json(t)}});
  }
  if (!t.verdict.violations.empty()) return 2;
  return t.verdict.won() ? 0 : 1;
}

int cmd_sweep(const Common& o, const std::string& lambdas, const std::string& gammas, const std::string& kappas,
              const SweepLimits& limits, std::string& text) {
  std::vector<std::size_t> ls;
  for (auto v : parse_range(lambdas)) ls.push_back(v);
  auto cells = sweep(ls, parse_range(gammas), parse_range(kappas), limits);
  if (o.format == "json") {
    Json a = Json::array();
    for (const auto& c : cells) {
      Json j = {{"lambda", c.lambda},
                {"gamma", c.gamma},
                {"kappa", c.kappa},
                {"verdict", to_string(c.verdict)},
                {"method", c.method},
                {"colorings_checked", c.colorings_checked},
                {"profiles_checked", c.profiles_checked},
                {"strategy", c.strategy}};
      j["certificate"] = c.certificate ? to_json(*c.certificate, c.lambda) : Json(nullptr);
      a.push_back(j);
    }
    text = emit(a);
  } else {
    text = sweep_csv(cells);
  }
  return 0;
}

int cmd_defeat(const Common& o, const std::string& spec_text, const std::string& poset_path,
               const std::string& strategy, std::uint64_t k, std::uint64_t g, const std::string& ladder,
               std::uint64_t cap, std::string& text) {
  GameSpec spec;
  DefeatCertificate cert;
  if (!poset_path.empty()) {
    if (k == 0 || g == 0) throw Error("--poset needs --k and --g");
    Poset poset = poset_from_json(read_json_file(poset_path));
    spec = GameSpec{Population::finite(poset.size()), Visibility::order(poset), Palette::finite(k),
                    GuessBound::at_most(g)};
    cert = poset_defeat(poset, resolve_strategy(strategy, spec, o.seed), k, g, o.budget);
  } else {
    if (spec_text.empty()) throw Error("defeat needs --spec or --poset");
    spec = parse_spec(spec_text);
    Profile profile = resolve_strategy(strategy, spec, o.seed);
    if (!ladder.empty()) {
      PromiseLadder l{parse_range(ladder)};
      cert = sequential_defeat(spec, profile, l, o.budget, cap);
    } else {
      auto found = exhaustive_defeat(spec, profile, o.budget, cap);
      if (!found) {
        text = emit({{"spec", to_json(spec)}, {"strategy", strategy}, {"certificate", nullptr}});
        return 1;
      }
      cert = certify(spec, profile, *found, o.budget);
    }
  }
  // Replay before printing.
  if (!verify_defeat(spec, resolve_strategy(strategy, spec, o.seed), cert.coloring, o.budget))
    throw std::logic_error("certificate failed to replay");
  text = emit({{"spec", to_json(spec)}, {"strategy", strategy}, {"certificate", to_json(cert)}});
  return 0;
}

int cmd_free(const std::string& family_path, const std::string& mode, const std::string& subset,
             std::size_t cap, std::string& text) {
  FunctionFamily family = family_from_json(read_json_file(family_path));
  IndependenceMode m;
  if (mode == "mutual")
    m = IndependenceMode::Mutual;
  else if (mode == "forwards")
    m = IndependenceMode::Forwards;
  else
    throw Error("--mode must be mutual or forwards");
  if (!subset.empty()) {
    ValueSet s;
    for (auto v : parse_range(subset)) s.push_back(v);
    std::sort(s.begin(), s.end());
    bool ok = m == IndependenceMode::Mutual ? is_mutually_independent(s, family) : is_forwards_independent(s, family);
    text = emit({{"mode", mode}, {"subset", s}, {"independent", ok}});
    return ok ? 0 : 1;
  }
  ValueSet best = max_free_subset(family, m, cap);
  text = emit({{"mode", mode}, {"ground", family.ground()}, {"subset", best}, {"size", best.size()}});
  return 0;
}

int cmd_convert(const Common& o, const std::string& family_path, const std::string& partition_path,
                const std::string& to, std::size_t gamma, std::size_t arity, std::size_t depth,
                const std::string& spec_text, const std::string& strategy, std::size_t window, std::uint64_t k,
                std::string& text) {
  if (to == "table") {
    GameSpec spec = parse_spec(spec_text.empty() ? "(w,w,w)" : spec_text, window);
    text = emit(to_json(strategies_to_family(resolve_strategy(strategy, spec, o.seed), window, o.budget, k)));
    return 0;
  }
  if (to == "family") {
    if (partition_path.empty()) throw Error("--to family reads --partition");
    text = emit(to_json(partition_to_family(partition_from_json(read_json_file(partition_path)))));
    return 0;
  }
  if (family_path.empty()) throw Error("convert needs --family");
  FunctionFamily family = family_from_json(read_json_file(family_path));
  if (to == "single")
    text = emit(to_json(family_from_sets(family, gamma)));
  else if (to == "sets")
    text = emit(to_json(sets_from_family(family)));
  else if (to == "partition")
    text = emit(to_json(family_to_partition(family)));
  else if (to == "closed")
    text = emit(to_json(close_family(family, arity, depth).family));
  else
    throw Error("--to must be one of single, sets, partition, family, closed, table");
  return 0;
}

int cmd_refute(const Common& o, std::size_t window, std::uint64_t trials, const std::string& strategy,
               std::string& text) {
  GameSpec spec = single_guess_window(window);
  RefutationReport r = randomized_refute(resolve_strategy(strategy, spec, o.seed), window, trials, o.seed, o.budget);
  Json j = to_json(r);
  j["strategy"] = strategy;
  j["seed"] = o.seed;
  text = emit(j);
  return 0;
}

int cmd_bench(const Common& o, std::uint64_t repeats, std::string& text) {
  using Clock = std::chrono::steady_clock;
  Json rows = Json::array();
  auto time = [&](const std::string& name, const std::function<std::uint64_t()>& work) {
    double best = 1e300;
    std::uint64_t units = 0;
    for (std::uint64_t r = 0; r < std::max<std::uint64_t>(repeats, 1); ++r) {
      auto t0 = Clock::now();
      units = work();
      best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    rows.push_back({{"workload", name}, {"units", units}, {"best_ms", best}});
  };
  time("modular-sum n=6 all colourings", [&] {
    return tournament(GameSpec::finite_game(6, 6, 2), modular_sum(6), all_colorings(6, 6), o.budget).games;
  });
  time("threshold sweep 3x2x8", [&] { return sweep({1, 2, 3}, {2, 3}, parse_range("1-8")).size(); });
  time("posets on 6 elements", [&] { return unlabeled_posets(6).size(); });
  time("refute constant-guess N=20 x 10000", [&] {
    return randomized_refute(constant_guess({Color(0)}), 20, 10000, o.seed).trials;
  });
  text = emit(rows);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hat guessing laboratory", "hatlab"};
  app.require_subcommand(1);
  Common o;
  std::size_t window = 0;
  auto common = [&](CLI::App* sub, const std::string& default_format, std::size_t default_window = 0) {
    sub->preparse_callback([&o, &window, default_format, default_window](std::size_t) {
      o.format = default_format;
      window = default_window;
    });
    sub->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--budget", o.budget, "looks per logician")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out_path, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  std::string spec, strategy, coloring, poset, ladder, family, partition, mode = "mutual", subset, to;
  std::string lambdas = "1,2,3", gammas = "2,3", kappas = "1-8";
  std::size_t gamma = 2, arity = 2, depth = 1, free_cap = 20;
  std::uint64_t k = 0, g = 0, trials = 1000, cap = 1u << 22, repeats = 1;
  SweepLimits limits;

  std::function<int(std::string&)> action;

  auto* play = app.add_subcommand("play", "run one game and print the transcript");
  common(play, "json");
  play->add_option("--spec", spec, "(lambda,kappa,gamma), chain(N), parity(N) or JSON")->required();
  play->add_option("--strategy", strategy)->required();
  play->add_option("--coloring", coloring, "comma list, JSON or a JSON file")->required();
  play->add_option("--N", window, "window for a countable population");
  play->callback([&] { action = [&](std::string& t) { return cmd_play(o, spec, window, strategy, coloring, t); }; });

  auto* sw = app.add_subcommand("sweep", "threshold table for finite games");
  common(sw, "csv");
  sw->add_option("--lambdas", lambdas)->capture_default_str();
  sw->add_option("--gammas", gammas)->capture_default_str();
  sw->add_option("--kappas", kappas)->capture_default_str();
  sw->add_option("--coloring-cap", limits.coloring_cap)->capture_default_str()->check(CLI::PositiveNumber);
  sw->add_option("--profile-cap", limits.profile_cap)->capture_default_str()->check(CLI::PositiveNumber);
  sw->callback([&] {
    limits.look_budget = o.budget;
    action = [&](std::string& t) { return cmd_sweep(o, lambdas, gammas, kappas, limits, t); };
  });

  auto* defeat = app.add_subcommand("defeat", "build a colouring on which every logician is wrong");
  common(defeat, "json");
  defeat->add_option("--spec", spec);
  defeat->add_option("--poset", poset, "JSON poset file");
  defeat->add_option("--strategy", strategy)->required();
  defeat->add_option("--k", k, "palette size for --poset");
  defeat->add_option("--g", g, "guess list bound for --poset");
  defeat->add_option("--ladder", ladder, "promise sizes, one per logician");
  defeat->add_option("--cap", cap, "enumeration cap")->capture_default_str()->check(CLI::PositiveNumber);
  defeat->callback([&] {
    action = [&](std::string& t) { return cmd_defeat(o, spec, poset, strategy, k, g, ladder, cap, t); };
  });

  auto* fr = app.add_subcommand("free", "largest independent subset, or check one");
  common(fr, "json");
  fr->add_option("--family", family, "JSON family file")->required();
  fr->add_option("--mode", mode, "mutual or forwards")->capture_default_str();
  fr->add_option("--subset", subset, "check this subset instead of searching");
  fr->add_option("--cap", free_cap, "largest ground set searched")->capture_default_str();
  fr->callback([&] { action = [&](std::string& t) { return cmd_free(family, mode, subset, free_cap, t); }; });

  auto* conv = app.add_subcommand("convert", "convert between families, partitions and strategies");
  common(conv, "json");
  conv->add_option("--family", family);
  conv->add_option("--partition", partition);
  conv->add_option("--to", to, "single, sets, partition, family, closed or table")->required();
  conv->add_option("--gamma", gamma, "for --to single")->capture_default_str();
  conv->add_option("--arity", arity, "for --to closed")->capture_default_str();
  conv->add_option("--depth", depth, "for --to closed")->capture_default_str();
  conv->add_option("--spec", spec, "for --to table");
  conv->add_option("--strategy", strategy, "for --to table");
  conv->add_option("--N", window, "for --to table");
  conv->add_option("--k", k, "for --to table");
  conv->callback([&] {
    action = [&](std::string& t) {
      return cmd_convert(o, family, partition, to, gamma, arity, depth, spec, strategy, window, k, t);
    };
  });

  auto* ref = app.add_subcommand("refute", "sample the single-guess countable game on a window");
  common(ref, "json", 20);
  ref->add_option("--N", window)->capture_default_str()->check(CLI::PositiveNumber);
  ref->add_option("--trials", trials)->capture_default_str();
  strategy = "constant-guess";
  ref->add_option("--strategy", strategy)->capture_default_str();
  ref->callback([&] { action = [&](std::string& t) { return cmd_refute(o, window, trials, strategy, t); }; });

  auto* bench = app.add_subcommand("bench", "time fixed workloads");
  common(bench, "json");
  bench->add_option("--trials", repeats, "repetitions; the best time is kept")->capture_default_str();
  bench->callback([&] { action = [&](std::string& t) { return cmd_bench(o, repeats, t); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string text;
    int code = action(text);
    if (o.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out_path);
      if (!f) throw Error("cannot write '" + o.out_path + "'");
      f << text;
    }
    return code;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Refusal& e) {
    err << "refused: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace hats::cli

#include "hats/sweep.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "hats/adversary.hpp"
#include "hats/strategies.hpp"

namespace hats {

std::string to_string(CellVerdict v) {
  switch (v) {
    case CellVerdict::Winning:
      return "WINNING";
    case CellVerdict::Losing:
      return "LOSING";
    case CellVerdict::Unknown:
      return "UNKNOWN";
  }
  return "?";
}

namespace {

// a * b, or nothing past cap.
std::optional<std::uint64_t> capped_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a != 0 && b > cap / a) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> capped_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    auto next = capped_mul(r, base, cap);
    if (!next) return std::nullopt;
    r = *next;
  }
  return r;
}

// All size-g subsets of {0..k-1} in lexicographic order.
std::vector<std::vector<Color>> lists_of_size(std::uint64_t k, std::uint64_t g) {
  std::vector<std::vector<Color>> out;
  std::vector<std::uint64_t> pick(g);
  for (std::uint64_t i = 0; i < g; ++i) pick[i] = i;
  for (;;) {
    out.emplace_back(pick.begin(), pick.end());
    std::size_t i = g;
    while (i > 0 && pick[i - 1] == k - g + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < g; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::string coloring_text(const Coloring& c, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? "," : "") + c.at(i).to_string();
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

std::optional<std::uint64_t> strategy_space_size(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma,
                                                 std::uint64_t cap) {
  const std::uint64_t g = std::min(gamma - 1, kappa);
  const std::uint64_t lists = lists_of_size(kappa, g).size();
  auto views = capped_pow(kappa, lambda - 1, cap);
  if (!views) return std::nullopt;
  auto tables = capped_mul(*views, lambda, cap);
  if (!tables) return std::nullopt;
  return capped_pow(lists, *tables, cap);
}

Profile table_profile(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma, std::uint64_t index) {
  const std::uint64_t g = std::min(gamma - 1, kappa);
  auto lists = std::make_shared<std::vector<std::vector<Color>>>(lists_of_size(kappa, g));
  std::uint64_t views = 1;
  for (std::size_t i = 0; i + 1 < lambda; ++i) views *= kappa;
  // choice[i * views + v]: list of logician i on view v; last slot least significant.
  auto choice = std::make_shared<std::vector<std::uint64_t>>(lambda * views);
  const std::string name = "table#" + std::to_string(index);
  for (std::size_t slot = choice->size(); slot-- > 0;) {
    (*choice)[slot] = index % lists->size();
    index /= lists->size();
  }
  return Profile(name, [=](LogicianId self, Observer& eyes) {
    std::uint64_t view = 0;
    for (LogicianId j = 0; j < lambda; ++j)
      if (j != self) view = view * kappa + eyes.look(j).natural();
    return (*lists)[(*choice)[self * views + view]];
  });
}

SweepCell sweep_cell(std::size_t lambda, std::uint64_t kappa, std::uint64_t gamma, const SweepLimits& limits) {
  if (lambda < 1 || kappa < 1 || gamma < 2) throw std::invalid_argument("sweep_cell: needs lambda, kappa >= 1 and gamma >= 2");
  SweepCell cell{lambda, gamma, kappa};
  const GameSpec spec = GameSpec::finite_game(lambda, kappa, gamma);
  auto colorings = capped_pow(kappa, lambda, limits.coloring_cap);
  if (!colorings) {
    cell.method = "cap";
    return cell;
  }
  const Profile cover = block_cover(lambda, gamma);
  if (kappa <= lambda * (gamma - 1)) {
    TournamentSummary s = tournament(spec, cover, all_colorings(lambda, kappa), limits.look_budget, 1);
    cell.colorings_checked = s.games;
    cell.strategy = "block-cover";
    if (s.losses != 0 || !s.violations.empty())
      throw std::logic_error("sweep_cell: block-cover lost on " + coloring_text(s.losing_colorings.at(0), lambda));
    cell.verdict = CellVerdict::Winning;
    cell.method = "block-cover exhaustive";
    return cell;
  }
  auto defeat = exhaustive_defeat(spec, cover, limits.look_budget, limits.coloring_cap);
  if (!defeat) throw std::logic_error("sweep_cell: block-cover cannot be defeated above the threshold");
  cell.colorings_checked = *colorings;
  cell.certificate = defeat;
  cell.strategy = "block-cover";
  cell.verdict = CellVerdict::Losing;
  cell.method = "counting";
  if (auto space = strategy_space_size(lambda, kappa, gamma, limits.profile_cap)) {
    for (std::uint64_t p = 0; p < *space; ++p) {
      if (!exhaustive_defeat(spec, table_profile(lambda, kappa, gamma, p), limits.look_budget, limits.coloring_cap)) {
        // Would contradict the counting bound.
        throw std::logic_error("sweep_cell: strategy " + std::to_string(p) + " wins everywhere");
      }
      ++cell.profiles_checked;
    }
    cell.method = "counting+strategy-exhaustion";
  }
  return cell;
}

std::vector<SweepCell> sweep(const std::vector<std::size_t>& lambdas, const std::vector<std::uint64_t>& gammas,
                             const std::vector<std::uint64_t>& kappas, const SweepLimits& limits) {
  std::vector<SweepCell> cells;
  for (auto lambda : lambdas)
    for (auto gamma : gammas)
      for (auto kappa : kappas) cells.push_back(sweep_cell(lambda, kappa, gamma, limits));
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "lambda,gamma,kappa,verdict,method,colorings_checked,profiles_checked,certificate\n";
  for (const auto& c : cells) {
    std::string cert;
    if (c.verdict == CellVerdict::Winning) cert = "strategy=" + c.strategy;
    if (c.certificate) cert = "defeats " + c.strategy + " at " + coloring_text(*c.certificate, c.lambda);
    out << c.lambda << ',' << c.gamma << ',' << c.kappa << ',' << to_string(c.verdict) << ',' << csv_field(c.method)
        << ',' << c.colorings_checked << ',' << c.profiles_checked << ',' << csv_field(cert) << '\n';
  }
  return out.str();
}

}  // namespace hats

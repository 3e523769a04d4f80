#include "hats/freesubset.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hats/errors.hpp"

namespace hats {

namespace {

ValueSet normalized(ValueSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::int64_t param(const ArithmeticRule& rule, std::size_t i) {
  if (i >= rule.params.size())
    throw std::invalid_argument("rule " + rule.name + ": missing parameter " + std::to_string(i));
  return rule.params[i];
}

std::uint64_t modulus(const ArithmeticRule& rule, std::size_t i) {
  std::int64_t m = param(rule, i);
  if (m <= 0) throw std::invalid_argument("rule " + rule.name + ": modulus must be positive");
  return static_cast<std::uint64_t>(m);
}

void need_arity(const ArithmeticRule& rule, std::size_t arity, std::size_t want) {
  if (arity != want)
    throw std::invalid_argument("rule " + rule.name + " needs arity " + std::to_string(want));
}

std::uint64_t pow_checked(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Calls fn on every tuple of indices in [0, n)^arity, last position fastest.
template <typename Fn>
void for_each_index_tuple(std::size_t n, std::size_t arity, Fn fn) {
  std::vector<std::size_t> t(arity, 0);
  if (n == 0 && arity > 0) return;
  for (;;) {
    fn(t);
    std::size_t i = arity;
    for (;;) {
      if (i == 0) return;
      --i;
      if (++t[i] < n) break;
      t[i] = 0;
    }
  }
}

std::size_t tuple_index(std::span<const std::size_t> t, std::size_t n) {
  std::size_t idx = 0;
  for (std::size_t a : t) idx = idx * n + a;
  return idx;
}

}  // namespace

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = {
      "sum",  "sum_mod", "succ_mod", "affine", "pred", "identity", "const",
      "double_pair", "product_mod", "diff", "max", "min", "shift"};
  return names;
}

ValueSet evaluate_rule(const ArithmeticRule& rule, std::size_t arity, std::span<const Value> args) {
  if (args.size() != arity) throw std::invalid_argument("rule " + rule.name + ": wrong argument count");
  const std::string& r = rule.name;
  if (r == "sum") {
    return {std::accumulate(args.begin(), args.end(), Value{0})};
  }
  if (r == "sum_mod") {
    std::uint64_t m = modulus(rule, 0);
    Value s = 0;
    for (Value a : args) s = (s + a % m) % m;
    return {s};
  }
  if (r == "product_mod") {
    std::uint64_t m = modulus(rule, 0);
    Value p = 1 % m;
    for (Value a : args) p = static_cast<Value>((static_cast<unsigned __int128>(p) * (a % m)) % m);
    return {p};
  }
  if (r == "max") return {*std::max_element(args.begin(), args.end())};
  if (r == "min") return {*std::min_element(args.begin(), args.end())};
  if (r == "const") {
    std::int64_t c = param(rule, 0);
    if (c < 0) return {};
    return {static_cast<Value>(c)};
  }
  if (r == "diff") {
    need_arity(rule, arity, 2);
    return {args[0] > args[1] ? args[0] - args[1] : args[1] - args[0]};
  }
  need_arity(rule, arity, 1);
  Value x = args[0];
  if (r == "succ_mod") {
    std::uint64_t m = modulus(rule, 0);
    return {(x % m + 1) % m};
  }
  if (r == "affine") {
    std::int64_t a = param(rule, 0), b = param(rule, 1);
    std::int64_t m = static_cast<std::int64_t>(modulus(rule, 2));
    std::int64_t xm = static_cast<std::int64_t>(x % static_cast<std::uint64_t>(m));
    std::int64_t v = ((a % m) * xm + b % m) % m;
    if (v < 0) v += m;
    return {static_cast<Value>(v)};
  }
  if (r == "pred") {
    if (x == 0) return {};
    return {x - 1};
  }
  if (r == "identity") return {x};
  if (r == "shift") {
    std::int64_t c = param(rule, 0);
    std::int64_t v = static_cast<std::int64_t>(x) + c;
    if (v < 0) return {};
    return {static_cast<Value>(v)};
  }
  if (r == "double_pair") {
    std::uint64_t m = modulus(rule, 0);
    return normalized({(2 * x) % m, (2 * x + 1) % m});
  }
  throw std::invalid_argument("unknown rule: " + r);
}

FamilyMember FamilyMember::from_rule(std::string name, std::size_t arity,
                                     std::vector<std::int64_t> params) {
  FamilyMember m;
  m.arity = arity;
  m.label = name;
  m.rule = ArithmeticRule{std::move(name), std::move(params)};
  return m;
}

FamilyMember FamilyMember::from_table(std::size_t arity, std::map<std::vector<Value>, ValueSet> table,
                                      std::string label) {
  FamilyMember m;
  m.arity = arity;
  m.table = std::move(table);
  m.label = std::move(label);
  return m;
}

FunctionFamily::FunctionFamily(ValueSet ground, std::vector<FamilyMember> members)
    : ground_(normalized(std::move(ground))), members_(std::move(members)) {
  for (const auto& m : members_) {
    if (m.arity == 0) throw std::invalid_argument("FunctionFamily: arity must be at least 1");
    for (const auto& [args, out] : m.table)
      if (args.size() != m.arity) throw std::invalid_argument("FunctionFamily: table tuple has wrong arity");
  }
}

std::size_t FunctionFamily::max_arity() const {
  std::size_t a = 0;
  for (const auto& m : members_) a = std::max(a, m.arity);
  return a;
}

bool FunctionFamily::contains(Value v) const {
  return std::binary_search(ground_.begin(), ground_.end(), v);
}

ValueSet FunctionFamily::apply(std::size_t member, std::span<const Value> args) const {
  const FamilyMember& m = members_.at(member);
  ValueSet raw;
  if (m.rule) {
    raw = evaluate_rule(*m.rule, m.arity, args);
  } else {
    auto it = m.table.find(std::vector<Value>(args.begin(), args.end()));
    if (it != m.table.end()) raw = it->second;
  }
  ValueSet out;
  for (Value v : normalized(std::move(raw)))
    if (contains(v)) out.push_back(v);
  return out;
}

CompiledFamily::CompiledFamily(const FunctionFamily& family, std::uint64_t table_cap)
    : n_(family.ground().size()) {
  if (n_ > 64) throw CapExceeded("CompiledFamily ground set", n_, 64);
  const ValueSet& ground = family.ground();
  for (std::size_t i = 0; i < family.members().size(); ++i) {
    std::size_t arity = family.members()[i].arity;
    std::uint64_t entries = pow_checked(n_, arity, table_cap);
    if (entries > table_cap) throw CapExceeded("CompiledFamily table", entries, table_cap);
    Table table{arity, std::vector<std::uint64_t>(entries, 0)};
    std::vector<Value> args(arity);
    for_each_index_tuple(n_, arity, [&](const std::vector<std::size_t>& t) {
      for (std::size_t j = 0; j < arity; ++j) args[j] = ground[t[j]];
      table.out[tuple_index(t, n_)] = subset_mask(ground, family.apply(i, args));
    });
    tables_.push_back(std::move(table));
  }
}

CompiledFamily::CompiledFamily(std::size_t ground_size, std::vector<Table> tables)
    : n_(ground_size), tables_(std::move(tables)) {
  if (n_ > 64) throw CapExceeded("CompiledFamily ground set", n_, 64);
}

template <typename Bad>
bool CompiledFamily::independent(std::uint64_t set, Bad bad) const {
  std::vector<std::size_t> elems;
  for (std::uint64_t s = set; s != 0; s &= s - 1) elems.push_back(std::countr_zero(s));
  if (elems.empty()) return true;
  for (const Table& table : tables_) {
    const std::size_t k = table.arity;
    std::vector<std::size_t> pos(k, 0);
    for (;;) {
      std::size_t idx = 0;
      std::uint64_t used = 0;
      std::size_t low = 64;
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t e = elems[pos[j]];
        idx = idx * n_ + e;
        used |= std::uint64_t{1} << e;
        low = std::min(low, e);
      }
      if (table.out[idx] & set & bad(used, low)) return false;
      std::size_t j = k;
      for (;;) {
        if (j == 0) goto next_table;
        --j;
        if (++pos[j] < elems.size()) break;
        pos[j] = 0;
      }
    }
  next_table:;
  }
  return true;
}

bool CompiledFamily::mutually_independent(std::uint64_t set) const {
  return independent(set, [](std::uint64_t used, std::size_t) { return ~used; });
}

bool CompiledFamily::forwards_independent(std::uint64_t set) const {
  return independent(set, [](std::uint64_t, std::size_t low) { return (std::uint64_t{1} << low) - 1; });
}

std::uint64_t subset_mask(const ValueSet& ground, const ValueSet& subset) {
  std::uint64_t mask = 0;
  for (Value v : subset) {
    auto it = std::lower_bound(ground.begin(), ground.end(), v);
    if (it == ground.end() || *it != v)
      throw std::invalid_argument("subset element " + std::to_string(v) + " is not in the ground set");
    mask |= std::uint64_t{1} << (it - ground.begin());
  }
  return mask;
}

ValueSet subset_from_mask(const ValueSet& ground, std::uint64_t mask) {
  ValueSet out;
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (mask >> i & 1) out.push_back(ground[i]);
  return out;
}

bool is_mutually_independent(const ValueSet& subset, const FunctionFamily& family) {
  CompiledFamily c(family);
  return c.mutually_independent(subset_mask(family.ground(), normalized(subset)));
}

bool is_forwards_independent(const ValueSet& subset, const FunctionFamily& family) {
  CompiledFamily c(family);
  return c.forwards_independent(subset_mask(family.ground(), normalized(subset)));
}

ValueSet max_free_subset(const FunctionFamily& family, IndependenceMode mode, std::size_t cap) {
  const std::size_t n = family.ground().size();
  if (n > cap) throw CapExceeded("max_free_subset ground set", n, cap);
  CompiledFamily c(family);
  auto ok = [&](std::uint64_t s) {
    return mode == IndependenceMode::Mutual ? c.mutually_independent(s) : c.forwards_independent(s);
  };
  std::uint64_t best = 0;
  int best_size = -1;
  // Include-first depth-first search; the first set of a given size found is
  // the lexicographically least one.
  std::function<void(std::size_t, std::uint64_t, int)> dfs = [&](std::size_t i, std::uint64_t cur, int size) {
    if (size + static_cast<int>(n - i) <= best_size) return;
    if (i == n) {
      best = cur;
      best_size = size;
      return;
    }
    std::uint64_t with = cur | std::uint64_t{1} << i;
    if (ok(with)) dfs(i + 1, with, size + 1);
    dfs(i + 1, cur, size);
  };
  dfs(0, 0, 0);
  return subset_from_mask(family.ground(), best);
}

namespace {

using Table = CompiledFamily::Table;

struct Closure {
  std::size_t n;
  std::size_t max_arity;
  std::size_t cap;
  std::vector<Table> tables;
  std::vector<Derivation> derivations;
  std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, std::size_t> seen;

  bool add(Table t, Derivation d) {
    auto key = std::make_pair(t.arity, t.out);
    if (seen.count(key)) return false;
    if (tables.size() >= cap) throw CapExceeded("close_family members", tables.size() + 1, cap);
    seen.emplace(std::move(key), tables.size());
    tables.push_back(std::move(t));
    derivations.push_back(std::move(d));
    return true;
  }

  Table permuted(const Table& f, const std::vector<std::size_t>& sigma) const {
    Table g{f.arity, std::vector<std::uint64_t>(f.out.size(), 0)};
    std::vector<std::size_t> src(f.arity);
    for_each_index_tuple(n, f.arity, [&](const std::vector<std::size_t>& t) {
      for (std::size_t i = 0; i < f.arity; ++i) src[i] = t[sigma[i]];
      g.out[tuple_index(t, n)] = f.out[tuple_index(src, n)];
    });
    return g;
  }

  void permute_all(std::size_t from) {
    for (std::size_t i = from; i < tables.size(); ++i) {
      if (tables[i].arity < 2) continue;
      std::vector<std::size_t> sigma(tables[i].arity);
      std::iota(sigma.begin(), sigma.end(), 0);
      while (std::next_permutation(sigma.begin(), sigma.end())) {
        Derivation d{Derivation::Kind::Permute, derivations[i].depth, {i}, sigma, 0};
        add(permuted(tables[i], sigma), std::move(d));
      }
    }
  }

  Table composed(const Table& f, const std::vector<const Table*>& inner) const {
    std::size_t arity = 0;
    for (const Table* t : inner) arity += t->arity;
    std::uint64_t entries = pow_checked(n, arity, std::uint64_t{1} << 24);
    Table g{arity, std::vector<std::uint64_t>(entries, 0)};
    std::vector<std::uint64_t> masks(inner.size());
    std::vector<std::size_t> deltas(inner.size());
    for_each_index_tuple(n, arity, [&](const std::vector<std::size_t>& t) {
      std::size_t offset = 0;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        std::span<const std::size_t> part(t.data() + offset, inner[i]->arity);
        masks[i] = inner[i]->out[tuple_index(part, n)];
        offset += inner[i]->arity;
      }
      std::uint64_t acc = 0;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == inner.size()) {
          acc |= f.out[tuple_index(deltas, n)];
          return;
        }
        for (std::uint64_t m = masks[i]; m != 0; m &= m - 1) {
          deltas[i] = std::countr_zero(m);
          rec(i + 1);
        }
      };
      rec(0);
      g.out[tuple_index(t, n)] = acc;
    });
    return g;
  }

  Table witness(const Table& f, std::size_t m) const {
    std::size_t rest = f.arity - m;
    Table r{1 + rest, std::vector<std::uint64_t>(pow_checked(n, 1 + rest, std::uint64_t{1} << 24), 0)};
    std::vector<std::size_t> args(f.arity);
    for_each_index_tuple(n, 1 + rest, [&](const std::vector<std::size_t>& t) {
      std::size_t alpha = t[0];
      for (std::size_t j = 0; j < rest; ++j) args[m + j] = t[1 + j];
      // args[m-1] is the largest witness and varies slowest.
      std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t slot, std::size_t bound) {
        for (std::size_t b = 0; b < bound; ++b) {
          args[slot] = b;
          if (slot == 0) {
            if (f.out[tuple_index(args, n)] >> alpha & 1) return true;
          } else if (rec(slot - 1, b + 1)) {
            return true;
          }
        }
        return false;
      };
      if (rec(m - 1, n)) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < m; ++j) mask |= std::uint64_t{1} << args[j];
        r.out[tuple_index(t, n)] = mask;
      }
    });
    return r;
  }

  void level(std::size_t depth) {
    const std::size_t existing = tables.size();
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < existing; ++i)
      if (derivations[i].depth < depth) usable.push_back(i);

    for (std::size_t fi : usable) {
      const std::size_t k = tables[fi].arity;
      std::vector<std::size_t> pick(k, 0);
      if (usable.empty()) break;
      for (;;) {
        std::size_t arity = 0, top = derivations[fi].depth;
        for (std::size_t j = 0; j < k; ++j) {
          arity += tables[usable[pick[j]]].arity;
          top = std::max(top, derivations[usable[pick[j]]].depth);
        }
        if (arity <= max_arity && top + 1 == depth) {
          std::vector<const Table*> inner;
          std::vector<std::size_t> operands{fi};
          for (std::size_t j = 0; j < k; ++j) {
            inner.push_back(&tables[usable[pick[j]]]);
            operands.push_back(usable[pick[j]]);
          }
          Table g = composed(tables[fi], inner);
          add(std::move(g), Derivation{Derivation::Kind::Compose, depth, std::move(operands), {}, 0});
        }
        std::size_t j = k;
        bool done = true;
        while (j > 0) {
          --j;
          if (++pick[j] < usable.size()) {
            done = false;
            break;
          }
          pick[j] = 0;
        }
        if (done) break;
      }
    }

    for (std::size_t fi : usable) {
      if (derivations[fi].depth + 1 != depth) continue;
      const std::size_t k = tables[fi].arity;
      for (std::size_t m = 1; m <= k; ++m) {
        if (1 + k - m > max_arity) continue;
        add(witness(tables[fi], m), Derivation{Derivation::Kind::Witness, depth, {fi}, {}, m});
      }
    }
    permute_all(existing);
  }
};

ClosedFamily materialize(const ValueSet& ground, Closure& c) {
  ClosedFamily out;
  std::vector<FamilyMember> members;
  const std::size_t n = ground.size();
  for (std::size_t i = 0; i < c.tables.size(); ++i) {
    const Table& t = c.tables[i];
    std::map<std::vector<Value>, ValueSet> table;
    std::vector<Value> args(t.arity);
    for_each_index_tuple(n, t.arity, [&](const std::vector<std::size_t>& idx) {
      std::uint64_t mask = t.out[tuple_index(idx, n)];
      if (mask == 0) return;
      for (std::size_t j = 0; j < t.arity; ++j) args[j] = ground[idx[j]];
      table.emplace(args, subset_from_mask(ground, mask));
    });
    static const char* kinds[] = {"original", "identity", "compose", "permute", "witness"};
    std::string label = std::string(kinds[static_cast<int>(c.derivations[i].kind)]) + "@" +
                        std::to_string(c.derivations[i].depth);
    members.push_back(FamilyMember::from_table(t.arity, std::move(table), std::move(label)));
  }
  out.family = FunctionFamily(ground, std::move(members));
  out.derivations = std::move(c.derivations);
  return out;
}

ClosedFamily run_closure(const ValueSet& ground, const std::vector<Table>& start,
                         const std::vector<Derivation>& start_derivations, std::size_t max_arity,
                         std::size_t max_depth, std::size_t member_cap) {
  if (max_arity < 1 || max_depth < 1) throw std::invalid_argument("close_family: bounds must be positive");
  Closure c{ground.size(), max_arity, member_cap, {}, {}, {}};
  for (std::size_t i = 0; i < start.size(); ++i) c.add(start[i], start_derivations[i]);
  Table identity{1, std::vector<std::uint64_t>(ground.size())};
  for (std::size_t i = 0; i < ground.size(); ++i) identity.out[i] = std::uint64_t{1} << i;
  c.add(std::move(identity), Derivation{Derivation::Kind::Identity, 0, {}, {}, 0});
  c.permute_all(0);
  for (std::size_t d = 1; d <= max_depth; ++d) c.level(d);
  return materialize(ground, c);
}

}  // namespace

ClosedFamily close_family(const FunctionFamily& family, std::size_t max_arity, std::size_t max_depth,
                          std::size_t member_cap) {
  CompiledFamily compiled(family);
  std::vector<Derivation> d(compiled.tables().size(), Derivation{});
  return run_closure(family.ground(), compiled.tables(), d, max_arity, max_depth, member_cap);
}

ClosedFamily close_family(const ClosedFamily& family, std::size_t max_arity, std::size_t max_depth,
                          std::size_t member_cap) {
  CompiledFamily compiled(family.family);
  if (family.derivations.size() != compiled.tables().size())
    throw std::invalid_argument("close_family: derivation list does not match members");
  return run_closure(family.family.ground(), compiled.tables(), family.derivations, max_arity, max_depth,
                     member_cap);
}

ValueSet extract_mutual_from_forwards(const ValueSet& subset, const FunctionFamily& closed,
                                      std::size_t b_bound) {
  const ValueSet& ground = closed.ground();
  CompiledFamily c(closed);
  const std::uint64_t s_mask = subset_mask(ground, normalized(subset));
  if (!c.forwards_independent(s_mask))
    throw std::invalid_argument("extract_mutual_from_forwards: input is not forwards independent");

  const std::size_t n = ground.size();
  std::uint64_t chosen = 0;
  std::uint64_t unused = s_mask;
  std::size_t next = 0;  // candidates must lie above the last chosen element
  for (;;) {
    bool found = false;
    for (std::size_t beta = next; beta < n && !found; ++beta) {
      const std::uint64_t upto = (beta + 1 == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << (beta + 1)) - 1;
      const std::uint64_t must = unused & upto;
      const std::size_t must_size = std::popcount(must);
      if (must_size > b_bound) break;
      const std::uint64_t head = chosen | std::uint64_t{1} << beta;
      if (!c.mutually_independent(head)) continue;
      std::vector<std::size_t> optional;
      for (std::uint64_t m = unused & ~upto; m != 0; m &= m - 1) optional.push_back(std::countr_zero(m));
      // Extra removals, smallest first.
      std::size_t room = b_bound - must_size;
      std::vector<std::uint64_t> extras{0};
      for (std::size_t size = 1; size <= room && size <= optional.size(); ++size) {
        std::vector<bool> sel(optional.size(), false);
        std::fill(sel.begin(), sel.begin() + size, true);
        do {
          std::uint64_t e = 0;
          for (std::size_t i = 0; i < optional.size(); ++i)
            if (sel[i]) e |= std::uint64_t{1} << optional[i];
          extras.push_back(e);
        } while (std::prev_permutation(sel.begin(), sel.end()));
      }
      for (std::uint64_t extra : extras) {
        const std::uint64_t removed = must | extra;
        if (c.forwards_independent(head | (unused & ~removed))) {
          chosen = head;
          unused &= ~removed;
          next = beta + 1;
          found = true;
          break;
        }
      }
    }
    if (!found) break;
  }
  return subset_from_mask(ground, chosen);
}

namespace {

template <typename Fn>
void for_each_value_tuple(const ValueSet& ground, std::size_t arity, Fn fn) {
  std::vector<Value> args(arity);
  for_each_index_tuple(ground.size(), arity, [&](const std::vector<std::size_t>& t) {
    for (std::size_t j = 0; j < arity; ++j) args[j] = ground[t[j]];
    fn(args);
  });
}

}  // namespace

FunctionFamily family_from_sets(const FunctionFamily& family, std::size_t gamma, Padding padding) {
  std::vector<FamilyMember> members;
  for (std::size_t i = 0; i < family.members().size(); ++i) {
    const std::size_t arity = family.members()[i].arity;
    std::vector<std::map<std::vector<Value>, ValueSet>> tables(gamma);
    for_each_value_tuple(family.ground(), arity, [&](const std::vector<Value>& args) {
      ValueSet out = family.apply(i, args);
      if (out.size() >= gamma)
        throw std::invalid_argument("family_from_sets: an output has at least gamma elements");
      for (std::size_t nu = 0; nu < gamma; ++nu) {
        if (nu < out.size()) {
          tables[nu][args] = {out[nu]};
        } else if (padding == Padding::Zero) {
          tables[nu][args] = {0};
        }
      }
    });
    for (std::size_t nu = 0; nu < gamma; ++nu) {
      std::string label = family.members()[i].label + "#" + std::to_string(nu);
      members.push_back(FamilyMember::from_table(arity, std::move(tables[nu]), std::move(label)));
    }
  }
  return FunctionFamily(family.ground(), std::move(members));
}

FunctionFamily sets_from_family(const FunctionFamily& family) {
  std::map<std::size_t, std::vector<std::size_t>> by_arity;
  for (std::size_t i = 0; i < family.members().size(); ++i) by_arity[family.members()[i].arity].push_back(i);
  std::vector<FamilyMember> members;
  for (const auto& [arity, ids] : by_arity) {
    std::map<std::vector<Value>, ValueSet> table;
    for_each_value_tuple(family.ground(), arity, [&](const std::vector<Value>& args) {
      ValueSet all;
      for (std::size_t i : ids) {
        ValueSet out = family.apply(i, args);
        all.insert(all.end(), out.begin(), out.end());
      }
      all = normalized(std::move(all));
      if (!all.empty()) table[args] = std::move(all);
    });
    members.push_back(FamilyMember::from_table(arity, std::move(table), "arity" + std::to_string(arity)));
  }
  return FunctionFamily(family.ground(), std::move(members));
}

bool is_free(const ValueSet& subset, const FunctionFamily& plain) {
  for (std::size_t i = 0; i < plain.members().size(); ++i) {
    for_each_value_tuple(plain.ground(), plain.members()[i].arity, [&](const std::vector<Value>& args) {
      if (plain.apply(i, args).size() > 1)
        throw std::invalid_argument("is_free: member " + std::to_string(i) + " is not single-valued");
    });
  }
  return is_mutually_independent(subset, plain);
}

std::uint32_t Partition::color(const ValueSet& tuple) const {
  auto it = color_of.find(tuple);
  return it == color_of.end() ? 0 : it->second;
}

namespace {

template <typename Fn>
void for_each_combination(const ValueSet& items, std::size_t size, Fn fn) {
  if (size > items.size()) return;
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  ValueSet pick(size);
  for (;;) {
    for (std::size_t j = 0; j < size; ++j) pick[j] = items[idx[j]];
    fn(pick);
    std::size_t j = size;
    for (;;) {
      if (j == 0) return;
      --j;
      if (idx[j] < items.size() - size + j) break;
    }
    ++idx[j];
    for (std::size_t t = j + 1; t < size; ++t) idx[t] = idx[t - 1] + 1;
  }
}

}  // namespace

bool is_homogeneous(const Partition& partition, const ValueSet& subset,
                    std::vector<std::uint32_t>* colors_by_size) {
  ValueSet s = normalized(subset);
  if (colors_by_size) colors_by_size->clear();
  for (std::size_t size = 1; size <= partition.max_size && size <= s.size(); ++size) {
    std::optional<std::uint32_t> common;
    bool ok = true;
    for_each_combination(s, size, [&](const ValueSet& t) {
      std::uint32_t c = partition.color(t);
      if (!common) common = c;
      else if (*common != c) ok = false;
    });
    if (!ok) return false;
    if (colors_by_size) colors_by_size->push_back(*common);
  }
  return true;
}

std::optional<ValueSet> homogeneous_search(const Partition& partition, std::size_t size, std::size_t cap) {
  const ValueSet& ground = partition.ground;
  if (ground.size() > cap) throw CapExceeded("homogeneous_search ground set", ground.size(), cap);
  if (size > ground.size()) return std::nullopt;
  const std::size_t k = partition.max_size;
  std::vector<std::int64_t> color_by_size(k + 1, -1);
  ValueSet current;

  // Checks every tuple ending in the newly added (largest) element.
  std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
    if (current.size() == size) return true;
    for (std::size_t i = from; i < ground.size(); ++i) {
      if (current.size() + (ground.size() - i) < size) return false;
      Value x = ground[i];
      auto saved = color_by_size;
      bool ok = true;
      for (std::size_t sub = 0; sub < k && ok; ++sub) {
        for_each_combination(current, sub, [&](const ValueSet& t) {
          if (!ok) return;
          ValueSet tuple = t;
          tuple.push_back(x);
          std::int64_t c = partition.color(tuple);
          std::int64_t& slot = color_by_size[sub + 1];
          if (slot < 0) slot = c;
          else if (slot != c) ok = false;
        });
      }
      if (ok) {
        current.push_back(x);
        if (dfs(i + 1)) return true;
        current.pop_back();
      }
      color_by_size = std::move(saved);
    }
    return false;
  };
  if (dfs(0)) return current;
  return std::nullopt;
}

Partition family_to_partition(const FunctionFamily& family) {
  const ValueSet& ground = family.ground();
  const std::size_t arity = std::max<std::size_t>(family.max_arity(), 1);
  std::map<ValueSet, ValueSet> generated;
  for (std::size_t i = 0; i < family.members().size(); ++i) {
    for_each_value_tuple(ground, family.members()[i].arity, [&](const std::vector<Value>& args) {
      ValueSet entries = normalized(args);
      ValueSet out = family.apply(i, args);
      ValueSet& g = generated[entries];
      g.insert(g.end(), out.begin(), out.end());
      g = normalized(std::move(g));
    });
  }
  std::size_t widest = 0;
  for (const auto& [e, g] : generated) widest = std::max(widest, g.size());
  Partition p;
  p.ground = ground;
  p.max_size = arity + 1;
  p.colors = static_cast<std::uint32_t>(widest + 1);
  const std::uint32_t outside = static_cast<std::uint32_t>(widest);
  for (Value v : ground) p.color_of[{v}] = outside;
  for (std::size_t size = 1; size <= arity; ++size) {
    for_each_combination(ground, size, [&](const ValueSet& e) {
      auto it = generated.find(e);
      for (Value a : ground) {
        if (a >= e.front()) break;
        ValueSet tuple{a};
        tuple.insert(tuple.end(), e.begin(), e.end());
        std::uint32_t c = outside;
        if (it != generated.end()) {
          auto pos = std::lower_bound(it->second.begin(), it->second.end(), a);
          if (pos != it->second.end() && *pos == a) c = static_cast<std::uint32_t>(pos - it->second.begin());
        }
        p.color_of[tuple] = c;
      }
    });
  }
  return p;
}

FunctionFamily partition_to_family(const Partition& partition) {
  const std::uint32_t outside = partition.colors - 1;
  std::vector<FamilyMember> members;
  for (std::size_t n = 1; n < partition.max_size; ++n) {
    std::map<std::vector<Value>, ValueSet> table;
    for_each_combination(partition.ground, n, [&](const ValueSet& e) {
      ValueSet out;
      for (Value a : partition.ground) {
        if (a >= e.front()) break;
        ValueSet tuple{a};
        tuple.insert(tuple.end(), e.begin(), e.end());
        if (partition.color(tuple) != outside) out.push_back(a);
      }
      if (!out.empty()) table[e] = std::move(out);
    });
    members.push_back(FamilyMember::from_table(n, std::move(table), "below" + std::to_string(n)));
  }
  return FunctionFamily(partition.ground, std::move(members));
}

}  // namespace hats

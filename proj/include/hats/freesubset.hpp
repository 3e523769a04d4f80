#pragma once

// Finite families of set-valued functions over a finite ground set of
// naturals, and the independence notions, closures and conversions built on
// them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hats {

using Value = std::uint64_t;
using ValueSet = std::vector<Value>;  // sorted, no duplicates

// Arithmetic template for a member; outputs are intersected with the ground set.
//   sum, product_mod(m), sum_mod(m), max, min: over all arguments
//   diff: |x - y| (binary)
//   succ_mod(m), affine(a, b, m), pred, identity, shift(c), double_pair(m): unary
//   const(c): any arity
struct ArithmeticRule {
  std::string name;
  std::vector<std::int64_t> params;

  friend bool operator==(const ArithmeticRule&, const ArithmeticRule&) = default;
};

const std::vector<std::string>& rule_names();
// Raw output of a rule before restriction to the ground set. Throws
// std::invalid_argument for an unknown rule, wrong arity or bad parameters.
ValueSet evaluate_rule(const ArithmeticRule& rule, std::size_t arity, std::span<const Value> args);

struct FamilyMember {
  std::size_t arity = 1;
  std::optional<ArithmeticRule> rule;
  // Used when rule is empty; missing tuples map to the empty set.
  std::map<std::vector<Value>, ValueSet> table;
  std::string label;

  static FamilyMember from_rule(std::string name, std::size_t arity,
                                std::vector<std::int64_t> params = {});
  static FamilyMember from_table(std::size_t arity, std::map<std::vector<Value>, ValueSet> table,
                                 std::string label = "table");

  friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
};

class FunctionFamily {
 public:
  FunctionFamily() = default;
  // Sorts and dedupes the ground set; throws std::invalid_argument on arity 0.
  FunctionFamily(ValueSet ground, std::vector<FamilyMember> members);

  const ValueSet& ground() const { return ground_; }
  const std::vector<FamilyMember>& members() const { return members_; }
  std::size_t max_arity() const;
  bool contains(Value v) const;

  // Member output on args, restricted to the ground set.
  ValueSet apply(std::size_t member, std::span<const Value> args) const;

  friend bool operator==(const FunctionFamily&, const FunctionFamily&) = default;

 private:
  ValueSet ground_;
  std::vector<FamilyMember> members_;
};

// Table form of a family: ground elements are replaced by their index in the
// sorted ground set and outputs by bitmasks. Ground sets up to 64 elements.
class CompiledFamily {
 public:
  struct Table {
    std::size_t arity = 1;
    std::vector<std::uint64_t> out;  // first argument most significant

    friend bool operator==(const Table&, const Table&) = default;
  };

  explicit CompiledFamily(const FunctionFamily& family, std::uint64_t table_cap = 1u << 22);
  CompiledFamily(std::size_t ground_size, std::vector<Table> tables);

  std::size_t ground_size() const { return n_; }
  const std::vector<Table>& tables() const { return tables_; }

  bool mutually_independent(std::uint64_t set) const;
  bool forwards_independent(std::uint64_t set) const;

 private:
  template <typename Bad>
  bool independent(std::uint64_t set, Bad bad) const;

  std::size_t n_ = 0;
  std::vector<Table> tables_;
};

std::uint64_t subset_mask(const ValueSet& ground, const ValueSet& subset);
ValueSet subset_from_mask(const ValueSet& ground, std::uint64_t mask);

// No element of S is in f(t) for a member f and a tuple t over S minus that element.
bool is_mutually_independent(const ValueSet& subset, const FunctionFamily& family);
// Same with tuples drawn only from the elements of S above that element.
bool is_forwards_independent(const ValueSet& subset, const FunctionFamily& family);

enum class IndependenceMode { Mutual, Forwards };

// Largest independent subset; among those of maximum size the lexicographically
// least sorted sequence. Throws CapExceeded when the ground set is above cap.
ValueSet max_free_subset(const FunctionFamily& family, IndependenceMode mode, std::size_t cap = 20);

struct Derivation {
  enum class Kind { Original, Identity, Compose, Permute, Witness };
  Kind kind = Kind::Original;
  std::size_t depth = 0;
  // Compose: outer member then inner members. Permute and Witness: the source.
  std::vector<std::size_t> operands;
  std::vector<std::size_t> permutation;  // Permute: argument i reads position permutation[i]
  std::size_t witnesses = 0;             // Witness: how many leading arguments are solved for

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct ClosedFamily {
  FunctionFamily family;  // every member is a table
  std::vector<Derivation> derivations;
};

// Adds the identity, compositions g(args of f_1, ..., args of f_k) =
// union over d_i in f_i(...) of f(d_1, ..., d_k), argument permutations and
// least-witness extractors r(a, rest) = {b_1 <= ... <= b_m}, minimizing b_m
// first, with a in f(b_1, ..., b_m, rest). Members keep the least depth at
// which they were produced. Throws CapExceeded past member_cap members.
ClosedFamily close_family(const FunctionFamily& family, std::size_t max_arity, std::size_t max_depth,
                          std::size_t member_cap = 4096);
ClosedFamily close_family(const ClosedFamily& family, std::size_t max_arity, std::size_t max_depth,
                          std::size_t member_cap = 4096);

// Builds an increasing sequence a_0 < a_1 < ... from the ground set: a_i is the
// least candidate for which some B of at most b_bound still-unused elements of
// S, containing every unused element up to the candidate, leaves
// {a_0..a_{i-1}, candidate} + (unused elements of S outside B) forwards
// independent and {a_0..a_{i-1}, candidate} mutually independent. Throws
// std::invalid_argument if S is not forwards independent.
ValueSet extract_mutual_from_forwards(const ValueSet& subset, const FunctionFamily& closed,
                                      std::size_t b_bound = 3);

enum class Padding { Absent, Zero };

// One single-valued member per (member, nu < gamma): the nu-th element of the
// member's output, or the padding when the output is shorter. Throws
// std::invalid_argument if some output has gamma or more elements.
FunctionFamily family_from_sets(const FunctionFamily& family, std::size_t gamma,
                                Padding padding = Padding::Absent);
// One member per arity: the union of the outputs of the members of that arity.
FunctionFamily sets_from_family(const FunctionFamily& family);
// Free set for a family of single-valued members (outputs of size at most one).
bool is_free(const ValueSet& subset, const FunctionFamily& plain);

// Colouring of the nonempty ascending tuples of size at most max_size.
struct Partition {
  ValueSet ground;
  std::size_t max_size = 1;
  std::uint32_t colors = 1;
  std::map<ValueSet, std::uint32_t> color_of;  // missing tuples have colour 0

  std::uint32_t color(const ValueSet& tuple) const;
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Same-size tuples of S all share a colour. Optionally reports those colours by size.
bool is_homogeneous(const Partition& partition, const ValueSet& subset,
                    std::vector<std::uint32_t>* colors_by_size = nullptr);
std::optional<ValueSet> homogeneous_search(const Partition& partition, std::size_t size,
                                           std::size_t cap = 24);

// Colours {a < b_1 < ... < b_n} by the rank of a in the union of the member
// outputs on tuples whose entries are exactly {b_1..b_n}, and by the last
// colour when a is not in it; singletons get the last colour. Sizes go up
// to max_arity + 1.
Partition family_to_partition(const FunctionFamily& family);
// Arity-n member sending b_1 < ... < b_n to {a < b_1 : colour({a, b..}) is not the last}.
FunctionFamily partition_to_family(const Partition& partition);

}  // namespace hats

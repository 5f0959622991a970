#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltlgrid/ltl.hpp"

namespace ltlgrid {

// A set of atomic predicates, kept sorted and unique.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::vector<AtomicPredicate> aps);
  Symbol(std::initializer_list<AtomicPredicate> aps) : Symbol(std::vector<AtomicPredicate>(aps)) {}

  const std::vector<AtomicPredicate>& aps() const { return aps_; }
  bool empty() const { return aps_.empty(); }
  std::size_t size() const { return aps_.size(); }
  bool contains(const AtomicPredicate& ap) const;
  std::set<int> robots() const;  // active robots
  std::vector<std::string> regions_of(int robot) const;
  Symbol restricted_to(const std::set<AtomicPredicate>& universe) const;

  std::string to_string() const;  // {p1@l1,p2@l3}

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  std::vector<AtomicPredicate> aps_;
};

// Parses "{p1@l1,p2@l3}" or "p1@l1,p2@l3"; "{}" and "" give the empty symbol.
Symbol parse_symbol(std::string_view text);

// Region pairs are disjoint unless declared overlapping. The obstacle label is
// never treated as disjoint from anything.
class RegionRelation {
 public:
  void declare_overlap(const std::string& a, const std::string& b);
  bool disjoint(const std::string& a, const std::string& b) const;
  const std::set<std::pair<std::string, std::string>>& overlaps() const { return overlaps_; }
  friend bool operator==(const RegionRelation&, const RegionRelation&) = default;

 private:
  std::set<std::pair<std::string, std::string>> overlaps_;
};

bool is_feasible_symbol(const Symbol& s, const RegionRelation& rel = {});

// Evaluates a propositional guard; APs absent from the symbol are false.
bool evaluate_guard(const Formula& guard, const Symbol& s);

// A reach target: the robot must lie in every listed region; empty means free space.
struct Target {
  std::vector<std::string> regions;
  bool free_space() const { return regions.empty(); }
  std::string to_string() const;
  friend auto operator<=>(const Target&, const Target&) = default;
  friend bool operator==(const Target&, const Target&) = default;
};

struct SymbolSetResult {
  std::vector<Symbol> symbols;  // sorted
  std::set<int> guard_robots;   // robots mentioned by the guard
  std::vector<std::set<int>> active_robots;
  std::vector<std::map<int, Target>> targets;
};

inline constexpr std::size_t kDefaultEnumerationCap = 20;

SymbolSetResult feasible_symbols_of_guard(const Formula& guard, const RegionRelation& rel = {},
                                          std::size_t cap = kDefaultEnumerationCap);
bool has_feasible_symbol(const Formula& guard, const RegionRelation& rel = {},
                         std::size_t cap = kDefaultEnumerationCap);

std::map<int, Target> symbol_targets(const Symbol& s, const std::set<int>& guard_robots,
                                     const RegionRelation& rel = {});

}  // namespace ltlgrid

#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ltlgrid {

inline constexpr std::string_view kObstacleRegion = "obs";

struct AtomicPredicate {
  int robot = 1;
  std::string region;

  friend auto operator<=>(const AtomicPredicate&, const AtomicPredicate&) = default;
  friend bool operator==(const AtomicPredicate&, const AtomicPredicate&) = default;

  std::string to_string() const;  // p<robot>@<region>
};

enum class FormulaKind { True, False, Atom, Not, And, Or, Next, Until, Release, Eventually, Always };

// Immutable formula tree with shared subterms. Equality is structural.
class Formula {
 public:
  Formula();  // true

  static Formula make_true();
  static Formula make_false();
  static Formula atom(AtomicPredicate ap);
  static Formula negation(Formula a);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula next(Formula a);
  static Formula until(Formula a, Formula b);
  static Formula release(Formula a, Formula b);
  static Formula eventually(Formula a);
  static Formula always(Formula a);

  FormulaKind kind() const { return node_->kind; }
  const AtomicPredicate& ap() const { return node_->ap; }
  std::size_t arity() const { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  // no temporal operators
  bool is_propositional() const;
  bool is_nnf() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    FormulaKind kind = FormulaKind::True;
    AtomicPredicate ap;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(FormulaKind k, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

struct ParseOptions {
  // when set, region labels must be in this set (or be "obs")
  std::optional<std::set<std::string>> regions;
};

Formula parse_ltl(std::string_view text, const ParseOptions& options = {});
std::string to_string(const Formula& f);
Formula to_nnf(const Formula& f);
std::set<AtomicPredicate> atomic_predicates(const Formula& f);

// n-ary helpers; empty conjunction is true, empty disjunction is false
Formula conjunction_of(const std::vector<Formula>& terms);
Formula disjunction_of(const std::vector<Formula>& terms);

AtomicPredicate parse_atomic_predicate(std::string_view text);

}  // namespace ltlgrid

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ltlgrid/error.hpp"
#include "ltlgrid/ltl.hpp"

namespace ltlgrid::detail {

enum class Tri : std::uint8_t { False, True, Unknown };

// Guard tree flattened over a fixed variable order; supports partial assignments.
class CompiledGuard {
 public:
  CompiledGuard() = default;
  CompiledGuard(const Formula& g, const std::vector<AtomicPredicate>& vars) {
    std::map<AtomicPredicate, int> index;
    for (std::size_t i = 0; i < vars.size(); ++i) index.emplace(vars[i], static_cast<int>(i));
    root_ = build(g, index);
  }

  Tri eval(const std::vector<Tri>& values) const { return eval_node(root_, values); }

  // plain Boolean evaluation; vars outside the map read as false
  bool eval_bits(const std::vector<char>& values) const { return eval_bool(root_, values); }

 private:
  enum class Op : std::uint8_t { True, False, Var, NotVar, Not, And, Or };
  struct Node {
    Op op;
    int var = -1;
    int a = -1, b = -1;
  };

  int build(const Formula& g, const std::map<AtomicPredicate, int>& index) {
    Node n{};
    switch (g.kind()) {
      case FormulaKind::True: n.op = Op::True; break;
      case FormulaKind::False: n.op = Op::False; break;
      case FormulaKind::Atom: {
        auto it = index.find(g.ap());
        if (it == index.end()) {
          n.op = Op::False;
        } else {
          n.op = Op::Var;
          n.var = it->second;
        }
        break;
      }
      case FormulaKind::Not:
        if (g.child(0).kind() == FormulaKind::Atom) {
          auto it = index.find(g.child(0).ap());
          if (it == index.end()) {
            n.op = Op::True;
          } else {
            n.op = Op::NotVar;
            n.var = it->second;
          }
        } else {
          n.op = Op::Not;
          n.a = build(g.child(0), index);
        }
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        n.op = g.kind() == FormulaKind::And ? Op::And : Op::Or;
        n.a = build(g.lhs(), index);
        n.b = build(g.rhs(), index);
        break;
      default:
        throw Error(ErrorCode::validation, "guard contains a temporal operator: " + to_string(g));
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  Tri eval_node(int i, const std::vector<Tri>& v) const {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::True: return Tri::True;
      case Op::False: return Tri::False;
      case Op::Var: return v[n.var];
      case Op::NotVar:
        return v[n.var] == Tri::Unknown ? Tri::Unknown : (v[n.var] == Tri::True ? Tri::False : Tri::True);
      case Op::Not: {
        Tri x = eval_node(n.a, v);
        return x == Tri::Unknown ? Tri::Unknown : (x == Tri::True ? Tri::False : Tri::True);
      }
      case Op::And: {
        Tri x = eval_node(n.a, v);
        if (x == Tri::False) return Tri::False;
        Tri y = eval_node(n.b, v);
        if (y == Tri::False) return Tri::False;
        return (x == Tri::True && y == Tri::True) ? Tri::True : Tri::Unknown;
      }
      case Op::Or: {
        Tri x = eval_node(n.a, v);
        if (x == Tri::True) return Tri::True;
        Tri y = eval_node(n.b, v);
        if (y == Tri::True) return Tri::True;
        return (x == Tri::False && y == Tri::False) ? Tri::False : Tri::Unknown;
      }
    }
    return Tri::Unknown;
  }

  bool eval_bool(int i, const std::vector<char>& v) const {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Var: return v[n.var] != 0;
      case Op::NotVar: return v[n.var] == 0;
      case Op::Not: return !eval_bool(n.a, v);
      case Op::And: return eval_bool(n.a, v) && eval_bool(n.b, v);
      case Op::Or: return eval_bool(n.a, v) || eval_bool(n.b, v);
    }
    return false;
  }

  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace ltlgrid::detail

// LTL to Buchi translation: on-the-fly tableau over obligation sets, producing a
// transition-based generalized automaton, then counter degeneralization.
#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "ltlgrid/buchi.hpp"
#include "ltlgrid/error.hpp"

namespace ltlgrid {

namespace {

struct Term {
  std::vector<int> lits;       // +(ap+1) or -(ap+1), sorted
  std::vector<int> next;       // obligations for the next state, sorted
  std::vector<int> postponed;  // untils whose right side was not reached, sorted

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

std::vector<int> merge_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool contradictory(const std::vector<int>& lits) {
  for (int x : lits)
    if (x > 0 && std::binary_search(lits.begin(), lits.end(), -x)) return true;
  return false;
}

// drop duplicates and terms implied by a weaker one
std::vector<Term> simplify(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool subsumed = false;
    for (std::size_t k = 0; k < terms.size() && !subsumed; ++k) {
      if (k == i) continue;
      const Term& s = terms[k];
      const Term& t = terms[i];
      if (subset(s.lits, t.lits) && subset(s.next, t.next) && subset(s.postponed, t.postponed)) {
        // equal terms were removed above, so s is strictly weaker
        subsumed = true;
      }
    }
    if (!subsumed) out.push_back(terms[i]);
  }
  return out;
}

std::vector<Term> product(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Term t{merge_sorted(x.lits, y.lits), merge_sorted(x.next, y.next), merge_sorted(x.postponed, y.postponed)};
      if (contradictory(t.lits)) continue;
      out.push_back(std::move(t));
    }
  return simplify(std::move(out));
}

class Tableau {
 public:
  explicit Tableau(const Formula& f) {
    auto aps = atomic_predicates(f);
    aps_.assign(aps.begin(), aps.end());
    for (std::size_t i = 0; i < aps_.size(); ++i) ap_index_[aps_[i]] = static_cast<int>(i);
    root_ = intern(f);
  }

  int root() const { return root_; }
  const std::vector<AtomicPredicate>& aps() const { return aps_; }
  const std::vector<int>& untils() const { return untils_; }
  bool is_true(int id) const { return nodes_[id].kind == FormulaKind::True; }

  const std::vector<Term>& expand(int id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    std::vector<Term> r;
    const Node n = nodes_[id];
    switch (n.kind) {
      case FormulaKind::True: r = {Term{}}; break;
      case FormulaKind::False: break;
      case FormulaKind::Atom: r = {Term{{n.ap + 1}, {}, {}}}; break;
      case FormulaKind::Not: r = {Term{{-(nodes_[n.a].ap + 1)}, {}, {}}}; break;
      case FormulaKind::And: r = product(expand(n.a), expand(n.b)); break;
      case FormulaKind::Or: {
        r = expand(n.a);
        const auto& rb = expand(n.b);
        r.insert(r.end(), rb.begin(), rb.end());
        r = simplify(std::move(r));
        break;
      }
      case FormulaKind::Next:
        if (nodes_[n.a].kind == FormulaKind::True)
          r = {Term{}};
        else if (nodes_[n.a].kind != FormulaKind::False)
          r = {Term{{}, {n.a}, {}}};
        break;
      case FormulaKind::Until: {
        r = expand(n.b);
        auto wait = product(expand(n.a), {Term{{}, {id}, {id}}});
        r.insert(r.end(), wait.begin(), wait.end());
        r = simplify(std::move(r));
        break;
      }
      case FormulaKind::Release: {
        const auto& eb = expand(n.b);
        r = product(eb, expand(n.a));
        auto keep = product(eb, {Term{{}, {id}, {}}});
        r.insert(r.end(), keep.begin(), keep.end());
        r = simplify(std::move(r));
        break;
      }
      default:
        throw Error(ErrorCode::invalid_argument, "formula is not in negation normal form");
    }
    return memo_.emplace(id, std::move(r)).first->second;
  }

  Formula literal_guard(const std::vector<int>& lits) const {
    std::vector<Formula> parts;
    for (int x : lits) {
      Formula a = Formula::atom(aps_[std::abs(x) - 1]);
      parts.push_back(x > 0 ? a : Formula::negation(a));
    }
    return conjunction_of(parts);
  }

 private:
  struct Node {
    FormulaKind kind;
    int ap = -1;
    int a = -1, b = -1;
  };

  int intern(const Formula& f) {
    Node n{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Atom: n.ap = ap_index_.at(f.ap()); break;
      case FormulaKind::Eventually: return intern(to_nnf(f));
      case FormulaKind::Always: return intern(to_nnf(f));
      default:
        if (f.arity() >= 1) n.a = intern(f.child(0));
        if (f.arity() >= 2) n.b = intern(f.child(1));
    }
    auto key = std::make_tuple(static_cast<int>(n.kind), n.ap, n.a, n.b);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    ids_.emplace(key, id);
    if (n.kind == FormulaKind::Until) untils_.push_back(id);
    return id;
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, int, int>, int> ids_;
  std::vector<AtomicPredicate> aps_;
  std::map<AtomicPredicate, int> ap_index_;
  std::vector<int> untils_;
  std::map<int, std::vector<Term>> memo_;
  int root_ = -1;
};

}  // namespace

GeneralizedBuchi translate_generalized(const Formula& input, const TranslateOptions& options) {
  Formula f = input.is_nnf() ? input : to_nnf(input);
  Tableau tab(f);
  GeneralizedBuchi g;
  g.ap_universe = tab.aps();
  g.num_sets = tab.untils().size();
  std::map<int, std::size_t> set_of;
  for (std::size_t k = 0; k < tab.untils().size(); ++k) set_of[tab.untils()[k]] = k;

  std::map<std::vector<int>, StateId> state_ids;
  std::deque<std::vector<int>> queue;
  auto state_of = [&](std::vector<int> obligations) {
    std::erase_if(obligations, [&](int id) { return tab.is_true(id); });
    auto it = state_ids.find(obligations);
    if (it != state_ids.end()) return it->second;
    if (state_ids.size() >= options.state_cap)
      throw Error(ErrorCode::resource, "translation exceeded the state cap of " + std::to_string(options.state_cap));
    StateId id = static_cast<StateId>(state_ids.size());
    state_ids.emplace(obligations, id);
    queue.push_back(std::move(obligations));
    return id;
  };
  g.initial = state_of({tab.root()});
  while (!queue.empty()) {
    std::vector<int> obligations = std::move(queue.front());
    queue.pop_front();
    StateId src = state_ids.at(obligations);
    std::vector<Term> terms{Term{}};
    for (int id : obligations) terms = product(terms, tab.expand(id));
    for (const auto& t : terms) {
      GeneralizedTransition tr;
      tr.source = src;
      tr.target = state_of(t.next);
      tr.guard = tab.literal_guard(t.lits);
      tr.accepting_sets.assign(g.num_sets, 1);
      for (int u : t.postponed) tr.accepting_sets[set_of.at(u)] = 0;
      g.transitions.push_back(std::move(tr));
    }
  }
  g.num_states = state_ids.size();
  return g;
}

Nba degeneralize(const GeneralizedBuchi& g, const TranslateOptions& options) {
  const std::size_t n = g.num_sets;
  std::vector<std::vector<std::size_t>> out(g.num_states);
  for (std::size_t t = 0; t < g.transitions.size(); ++t) out[g.transitions[t].source].push_back(t);

  std::map<std::pair<StateId, std::size_t>, StateId> ids;
  std::deque<std::pair<StateId, std::size_t>> queue;
  std::vector<std::pair<StateId, std::size_t>> states;
  auto id_of = [&](StateId s, std::size_t level) {
    auto key = std::make_pair(s, level);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (ids.size() >= options.state_cap)
      throw Error(ErrorCode::resource, "degeneralization exceeded the state cap of " + std::to_string(options.state_cap));
    StateId id = static_cast<StateId>(ids.size());
    ids.emplace(key, id);
    queue.push_back(key);
    states.push_back(key);
    return id;
  };
  id_of(g.initial, 0);
  std::map<std::pair<StateId, StateId>, std::vector<Formula>> guards;
  while (!queue.empty()) {
    auto [s, level] = queue.front();
    queue.pop_front();
    StateId src = ids.at({s, level});
    for (std::size_t t : out[s]) {
      const auto& tr = g.transitions[t];
      std::size_t j = level == n ? 0 : level;
      while (j < n && tr.accepting_sets[j]) ++j;
      StateId dst = id_of(tr.target, j);
      guards[{src, dst}].push_back(tr.guard);
    }
  }
  std::vector<NbaTransition> trans;
  for (auto& [key, gs] : guards) {
    Formula merged = std::any_of(gs.begin(), gs.end(), [](const Formula& f) { return f.kind() == FormulaKind::True; })
                         ? Formula::make_true()
                         : disjunction_of(gs);
    trans.push_back({key.first, key.second, merged});
  }
  std::vector<StateId> accepting;
  for (std::size_t q = 0; q < states.size(); ++q)
    if (states[q].second == n) accepting.push_back(static_cast<StateId>(q));
  return Nba(states.size(), {0}, accepting, std::move(trans), g.ap_universe);
}

Nba translate(const Formula& f, const TranslateOptions& options) {
  return degeneralize(translate_generalized(f, options), options);
}

}  // namespace ltlgrid

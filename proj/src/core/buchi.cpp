#include "ltlgrid/buchi.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ltlgrid/error.hpp"
#include "guard_eval.hpp"

namespace ltlgrid {

namespace {

void sort_unique(std::vector<StateId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Tarjan over an explicit graph; returns component id per node (-1 if unvisited).
std::vector<int> strongly_connected(const std::vector<std::vector<std::size_t>>& adj, std::size_t root) {
  const std::size_t n = adj.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  int counter = 0, comps = 0;
  auto open = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    call.push_back({v, 0});
  };
  open(root);
  while (!call.empty()) {
    Frame& f = call.back();
    if (f.next_edge < adj[f.v].size()) {
      std::size_t w = adj[f.v][f.next_edge++];
      if (index[w] < 0) {
        open(w);
      } else if (on_stack[w]) {
        low[f.v] = std::min(low[f.v], index[w]);
      }
      continue;
    }
    std::size_t v = f.v;
    call.pop_back();
    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = comps;
      } while (w != v);
      ++comps;
    }
  }
  return comp;
}

struct LassoProduct {
  std::size_t positions = 0;
  std::size_t loop_start = 0;
  std::size_t succ(std::size_t i) const { return i + 1 < positions ? i + 1 : loop_start; }
  const Symbol& at(const LassoWord& w, std::size_t i) const {
    return i < w.prefix.size() ? w.prefix[i] : w.cycle[i - w.prefix.size()];
  }
};

LassoProduct lasso_shape(const LassoWord& w) {
  if (w.cycle.empty()) throw Error(ErrorCode::validation, "lasso cycle must be nonempty");
  return {w.prefix.size() + w.cycle.size(), w.prefix.size()};
}

// Product of automaton states and lasso positions. Each product edge records the
// transition that produced it. A virtual root (last node) feeds the initial states.
template <typename Trans>
void build_product(std::size_t num_states, const std::vector<StateId>& initial, const std::vector<Trans>& transitions,
                   const LassoWord& w, std::vector<std::vector<std::size_t>>& adj,
                   std::vector<std::vector<std::size_t>>& edge_trans) {
  LassoProduct shape = lasso_shape(w);
  const std::size_t P = shape.positions;
  const std::size_t n = num_states * P;
  adj.assign(n + 1, {});
  edge_trans.assign(n + 1, {});
  std::vector<std::vector<std::size_t>> out(num_states);
  for (std::size_t t = 0; t < transitions.size(); ++t) out[transitions[t].source].push_back(t);
  // cache guard values per (transition, position)
  std::vector<std::vector<char>> enabled(transitions.size(), std::vector<char>(P, 0));
  for (std::size_t t = 0; t < transitions.size(); ++t)
    for (std::size_t i = 0; i < P; ++i) enabled[t][i] = evaluate_guard(transitions[t].guard, shape.at(w, i));
  for (std::size_t q = 0; q < num_states; ++q)
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t t : out[q])
        if (enabled[t][i]) {
          adj[q * P + i].push_back(transitions[t].target * P + shape.succ(i));
          edge_trans[q * P + i].push_back(t);
        }
  for (StateId q : initial) {
    adj[n].push_back(q * P);
    edge_trans[n].push_back(static_cast<std::size_t>(-1));
  }
}

}  // namespace

Nba::Nba(std::size_t num_states, std::vector<StateId> initial, std::vector<StateId> accepting,
         std::vector<NbaTransition> transitions, std::vector<AtomicPredicate> ap_universe)
    : num_states_(num_states), initial_(std::move(initial)), accepting_(std::move(accepting)) {
  if (num_states_ == 0) throw Error(ErrorCode::validation, "automaton has no states");
  sort_unique(initial_);
  sort_unique(accepting_);
  if (initial_.empty()) throw Error(ErrorCode::validation, "automaton has no initial state");
  for (StateId q : initial_)
    if (q >= num_states_) throw Error(ErrorCode::validation, "initial state " + std::to_string(q) + " out of range");
  accepting_flags_.assign(num_states_, 0);
  for (StateId q : accepting_) {
    if (q >= num_states_) throw Error(ErrorCode::validation, "accepting state " + std::to_string(q) + " out of range");
    accepting_flags_[q] = 1;
  }
  std::sort(ap_universe.begin(), ap_universe.end());
  ap_universe.erase(std::unique(ap_universe.begin(), ap_universe.end()), ap_universe.end());
  ap_universe_ = std::move(ap_universe);
  std::set<AtomicPredicate> universe(ap_universe_.begin(), ap_universe_.end());

  std::map<std::pair<StateId, StateId>, std::vector<Formula>> merged;
  for (auto& t : transitions) {
    if (t.source >= num_states_ || t.target >= num_states_)
      throw Error(ErrorCode::validation, "transition " + std::to_string(t.source) + "->" + std::to_string(t.target) +
                                             " has an endpoint out of range");
    if (!t.guard.is_propositional())
      throw Error(ErrorCode::validation, "guard with temporal operator: " + to_string(t.guard));
    for (const auto& ap : atomic_predicates(t.guard))
      if (!universe.contains(ap))
        throw Error(ErrorCode::validation, "guard mentions undeclared predicate " + ap.to_string());
    auto& bucket = merged[{t.source, t.target}];
    if (std::find(bucket.begin(), bucket.end(), t.guard) == bucket.end()) bucket.push_back(std::move(t.guard));
  }
  outgoing_.assign(num_states_, {});
  for (auto& [key, guards] : merged) {
    outgoing_[key.first].push_back(transitions_.size());
    transitions_.push_back({key.first, key.second, disjunction_of(guards)});
  }
}

bool Nba::is_initial(StateId q) const { return std::binary_search(initial_.begin(), initial_.end(), q); }

const NbaTransition* Nba::find(StateId source, StateId target) const {
  if (source >= num_states_) return nullptr;
  for (std::size_t t : outgoing_[source])
    if (transitions_[t].target == target) return &transitions_[t];
  return nullptr;
}

const Formula* Nba::self_loop(StateId q) const {
  const NbaTransition* t = find(q, q);
  return t ? &t->guard : nullptr;
}

std::string Nba::state_name(StateId q) const {
  if (q < state_names.size() && !state_names[q].empty()) return state_names[q];
  return "q" + std::to_string(q);
}

bool accepts_lasso(const Nba& a, const LassoWord& w) {
  std::vector<std::vector<std::size_t>> adj, edge_trans;
  build_product(a.num_states(), a.initial(), a.transitions(), w, adj, edge_trans);
  const std::size_t P = w.prefix.size() + w.cycle.size();
  const std::size_t root = adj.size() - 1;
  auto comp = strongly_connected(adj, root);
  // a component is usable when it contains an internal edge and an accepting node
  std::map<int, std::pair<bool, bool>> info;  // comp -> (has edge, has accepting)
  for (std::size_t v = 0; v + 1 < adj.size(); ++v) {
    if (comp[v] < 0) continue;
    auto& [edge, acc] = info[comp[v]];
    if (a.is_accepting(static_cast<StateId>(v / P))) acc = true;
    for (std::size_t u : adj[v])
      if (comp[u] == comp[v]) edge = true;
  }
  for (const auto& [c, flags] : info)
    if (flags.first && flags.second) return true;
  return false;
}

bool accepts_lasso(const GeneralizedBuchi& a, const LassoWord& w) {
  std::vector<std::vector<std::size_t>> adj, edge_trans;
  build_product(a.num_states, std::vector<StateId>{a.initial}, a.transitions, w, adj, edge_trans);
  const std::size_t root = adj.size() - 1;
  auto comp = strongly_connected(adj, root);
  std::map<int, std::pair<bool, std::vector<char>>> info;
  for (std::size_t v = 0; v + 1 < adj.size(); ++v) {
    if (comp[v] < 0) continue;
    for (std::size_t e = 0; e < adj[v].size(); ++e) {
      std::size_t u = adj[v][e];
      if (comp[u] != comp[v]) continue;
      auto& [edge, sets] = info[comp[v]];
      edge = true;
      sets.resize(a.num_sets, 0);
      const auto& flags = a.transitions[edge_trans[v][e]].accepting_sets;
      for (std::size_t k = 0; k < a.num_sets; ++k)
        if (flags[k]) sets[k] = 1;
    }
  }
  for (const auto& [c, data] : info) {
    if (!data.first) continue;
    if (std::all_of(data.second.begin(), data.second.end(), [](char x) { return x != 0; })) return true;
  }
  return false;
}

std::set<StateId> successors(const Nba& a, StateId q, const Symbol& s) {
  if (q >= a.num_states()) throw Error(ErrorCode::invalid_argument, "state out of range");
  std::set<StateId> out;
  for (std::size_t t : a.outgoing(q))
    if (evaluate_guard(a.transitions()[t].guard, s)) out.insert(a.transitions()[t].target);
  return out;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

StateId parse_state(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<StateId>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::syntax, "line " + std::to_string(line) + ": bad state index '" + s + "'");
  }
}

}  // namespace

Nba import_automaton(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> states;
  std::vector<StateId> initial, accepting;
  std::vector<AtomicPredicate> aps;
  std::vector<NbaTransition> trans;
  std::vector<std::string> names;
  bool saw_ap = false;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = raw.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (key == "states") {
      std::istringstream rs(rest);
      long long n = -1;
      if (!(rs >> n) || n < 0) throw Error(ErrorCode::syntax, where() + "expected state count");
      states = static_cast<std::size_t>(n);
    } else if (key == "initial") {
      for (const auto& s : split_list(rest)) initial.push_back(parse_state(s, line_no));
    } else if (key == "accepting") {
      for (const auto& s : split_list(rest)) accepting.push_back(parse_state(s, line_no));
    } else if (key == "ap") {
      saw_ap = true;
      for (const auto& s : split_list(rest)) {
        try {
          aps.push_back(parse_atomic_predicate(s));
        } catch (const Error& e) {
          throw Error(ErrorCode::syntax, where() + e.what());
        }
      }
    } else if (key == "name") {
      std::istringstream rs(rest);
      std::string idx, name;
      if (!(rs >> idx >> name)) throw Error(ErrorCode::syntax, where() + "expected 'name <state> <label>'");
      StateId q = parse_state(idx, line_no);
      if (names.size() <= q) names.resize(q + 1);
      names[q] = name;
    } else if (key == "trans") {
      std::istringstream rs(rest);
      std::string src, dst;
      if (!(rs >> src >> dst)) throw Error(ErrorCode::syntax, where() + "expected 'trans <src> <dst> <guard>'");
      std::string guard_text;
      std::getline(rs, guard_text);
      Formula g;
      try {
        g = parse_ltl(guard_text);
      } catch (const Error& e) {
        throw Error(ErrorCode::syntax, where() + "guard: " + e.what());
      }
      if (!g.is_propositional()) throw Error(ErrorCode::validation, where() + "guard has a temporal operator");
      trans.push_back({parse_state(src, line_no), parse_state(dst, line_no), g});
    } else {
      throw Error(ErrorCode::syntax, where() + "unknown key '" + key + "'");
    }
  }
  if (!states || *states == 0) throw Error(ErrorCode::validation, "automaton declares no states");
  if (!saw_ap) {
    // universe defaults to whatever guards mention
    std::set<AtomicPredicate> all;
    for (const auto& t : trans)
      for (const auto& ap : atomic_predicates(t.guard)) all.insert(ap);
    aps.assign(all.begin(), all.end());
  }
  Nba a(*states, initial, accepting, std::move(trans), std::move(aps));
  if (names.size() > *states) throw Error(ErrorCode::validation, "state name index out of range");
  a.state_names = std::move(names);
  return a;
}

std::string export_automaton(const Nba& a) {
  std::ostringstream out;
  auto list = [&](const std::vector<StateId>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  };
  out << "states " << a.num_states() << "\n";
  out << "initial ";
  list(a.initial());
  out << "\naccepting ";
  list(a.accepting());
  out << "\nap ";
  for (std::size_t i = 0; i < a.ap_universe().size(); ++i) out << (i ? "," : "") << a.ap_universe()[i].to_string();
  out << "\n";
  for (std::size_t q = 0; q < a.state_names.size(); ++q)
    if (!a.state_names[q].empty()) out << "name " << q << " " << a.state_names[q] << "\n";
  for (const auto& t : a.transitions()) out << "trans " << t.source << " " << t.target << " " << to_string(t.guard) << "\n";
  return out.str();
}

}  // namespace ltlgrid

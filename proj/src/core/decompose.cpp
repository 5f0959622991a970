#include "ltlgrid/decompose.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "ltlgrid/error.hpp"

namespace ltlgrid {

namespace {

std::size_t hop_limit(const AugmentedNba& a, const DecomposeOptions& options) {
  return options.max_hops ? options.max_hops : a.nba.num_states();
}

}  // namespace

AugmentedNba augment(const Nba& a, const Symbol& initial_symbol) {
  const StateId aux = static_cast<StateId>(a.num_states());
  std::vector<NbaTransition> trans = a.transitions();
  trans.push_back({aux, aux, Formula::make_true()});
  std::vector<Formula> lits;
  for (const auto& ap : a.ap_universe()) {
    Formula atom = Formula::atom(ap);
    lits.push_back(initial_symbol.contains(ap) ? atom : Formula::negation(atom));
  }
  Formula minterm = conjunction_of(lits);
  for (StateId q0 : a.initial()) trans.push_back({aux, q0, minterm});
  AugmentedNba out{Nba(a.num_states() + 1, {aux}, a.accepting(), std::move(trans), a.ap_universe()), aux,
                   initial_symbol.restricted_to({a.ap_universe().begin(), a.ap_universe().end()})};
  out.nba.state_names.resize(a.num_states() + 1);
  for (StateId q = 0; q < a.num_states(); ++q) out.nba.state_names[q] = a.state_name(q);
  out.nba.state_names[aux] = "aux";
  return out;
}

AugmentedNba prune_infeasible(const AugmentedNba& a, const DecomposeOptions& options) {
  std::vector<NbaTransition> kept;
  for (const auto& t : a.nba.transitions())
    if (has_feasible_symbol(t.guard, options.regions, options.enumeration_cap)) kept.push_back(t);
  AugmentedNba out{Nba(a.nba.num_states(), a.nba.initial(), a.nba.accepting(), std::move(kept), a.nba.ap_universe()),
                   a.aux, a.initial_symbol};
  out.nba.state_names = a.nba.state_names;
  return out;
}

std::vector<Symbol> self_loop_symbols(const AugmentedNba& a, StateId q, const DecomposeOptions& options) {
  if (q == a.aux) return {Symbol{}};
  const Formula* g = a.nba.self_loop(q);
  if (!g) return {};
  return feasible_symbols_of_guard(*g, options.regions, options.enumeration_cap).symbols;
}

namespace {

struct RunSearch {
  const AugmentedNba& a;
  const DecomposeOptions& options;
  std::size_t max_hops;
  std::vector<CandidateRun> out;
  std::vector<StateId> path;
  std::vector<Formula> parts;  // hop guards and negated intermediate self-loops

  bool satisfiable(const std::vector<Formula>& fs) const {
    return has_feasible_symbol(conjunction_of(fs), options.regions, options.enumeration_cap);
  }

  void emit(StateId terminal, const Formula& hop) {
    const Formula* self = a.nba.self_loop(terminal);
    if (!self) return;
    std::vector<Formula> fs = parts;
    fs.push_back(hop);
    fs.push_back(*self);
    Formula composite = conjunction_of(fs);
    if (!has_feasible_symbol(composite, options.regions, options.enumeration_cap)) return;
    CandidateRun run;
    run.states = path;
    run.states.push_back(terminal);
    run.composite_guard = composite;
    for (StateId s : run.states)
      if (s != a.aux && a.nba.is_accepting(s)) run.touches_accepting = true;
    out.push_back(std::move(run));
  }

  void extend() {
    StateId cur = path.back();
    const StateId source = path.front();
    for (std::size_t ti : a.nba.outgoing(cur)) {
      const auto& t = a.nba.transitions()[ti];
      StateId nxt = t.target;
      if (path.size() == 1 && nxt == source) {
        emit(nxt, t.guard);  // stay in place, a one-hop run
        continue;
      }
      if (nxt == cur) continue;
      // intermediates are distinct and differ from the source
      bool seen = std::find(path.begin() + 1, path.end(), nxt) != path.end();
      if (seen) continue;
      emit(nxt, t.guard);
      if (nxt == source || path.size() >= max_hops) continue;
      parts.push_back(t.guard);
      if (const Formula* self = a.nba.self_loop(nxt)) parts.push_back(Formula::negation(*self));
      if (satisfiable(parts)) {
        path.push_back(nxt);
        extend();
        path.pop_back();
      }
      if (a.nba.self_loop(nxt)) parts.pop_back();
      parts.pop_back();
    }
  }
};

bool same_target(const Symbol& a, const Symbol& b, int robot) {
  auto ra = a.regions_of(robot), rb = b.regions_of(robot);
  return ra == rb;
}

}  // namespace

std::vector<CandidateRun> enumerate_runs(const AugmentedNba& a, StateId q, const DecomposeOptions& options) {
  if (q >= a.nba.num_states()) throw Error(ErrorCode::invalid_argument, "state out of range");
  RunSearch search{a, options, hop_limit(a, options), {}, {q}, {}};
  search.extend();
  return std::move(search.out);
}

DecomposabilityResult is_decomposable(const CandidateRun& run, const std::vector<Symbol>& self_symbols,
                                      const DecomposeOptions& options) {
  DecomposabilityResult r;
  if (self_symbols.empty()) return r;
  auto run_symbols = feasible_symbols_of_guard(run.composite_guard, options.regions, options.enumeration_cap).symbols;
  std::vector<Symbol> common = run_symbols;
  for (const Symbol& here : self_symbols) {
    std::set<int> here_robots = here.robots();
    std::vector<Symbol> valid;
    for (const Symbol& there : run_symbols) {
      bool ok = true;
      for (int j : there.robots())
        if (here_robots.contains(j) && !same_target(here, there, j)) {
          ok = false;
          break;
        }
      if (ok) valid.push_back(there);
    }
    if (valid.empty()) return r;
    std::vector<Symbol> next;
    std::set_intersection(common.begin(), common.end(), valid.begin(), valid.end(), std::back_inserter(next));
    common = std::move(next);
  }
  r.decomposable = true;
  r.sigma_dec = std::move(common);
  return r;
}

Decomposition decompose(const AugmentedNba& a, const DecomposeOptions& options) {
  Decomposition d;
  d.aux = a.aux;
  d.d_set.insert(a.aux);
  std::vector<StateId> frontier{a.aux};
  while (!frontier.empty()) {
    ++d.rounds;
    std::vector<StateId> next_frontier;
    for (StateId q : frontier) {
      auto self = self_loop_symbols(a, q, options);
      for (auto& run : enumerate_runs(a, q, options)) {
        auto res = is_decomposable(run, self, options);
        if (!res.decomposable || res.sigma_dec.empty()) continue;
        StateId target = run.terminal();
        d.q_next[q].insert(target);
        auto& sig = d.sigma_dec[{q, target}];
        std::vector<Symbol> merged;
        std::set_union(sig.begin(), sig.end(), res.sigma_dec.begin(), res.sigma_dec.end(), std::back_inserter(merged));
        sig = std::move(merged);
        d.witnesses[{q, target}].push_back({std::move(run), std::move(res.sigma_dec)});
        if (d.d_set.insert(target).second) next_frontier.push_back(target);
      }
    }
    std::sort(next_frontier.begin(), next_frontier.end());
    frontier = std::move(next_frontier);
  }
  return d;
}

namespace {

using Clause = std::vector<int>;  // sorted signed literals over an AP index
using Cnf = std::vector<Clause>;

struct CnfBuilder {
  std::map<AtomicPredicate, int> index;
  std::vector<AtomicPredicate> aps;
  std::size_t cap;
  bool overflow = false;

  int lit(const AtomicPredicate& ap) {
    auto it = index.find(ap);
    if (it != index.end()) return it->second;
    aps.push_back(ap);
    int id = static_cast<int>(aps.size());
    index.emplace(ap, id);
    return id;
  }

  Cnf build(const Formula& f, bool neg) {
    if (overflow) return {};
    switch (f.kind()) {
      case FormulaKind::True: return neg ? Cnf{Clause{}} : Cnf{};
      case FormulaKind::False: return neg ? Cnf{} : Cnf{Clause{}};
      case FormulaKind::Atom: return {Clause{neg ? -lit(f.ap()) : lit(f.ap())}};
      case FormulaKind::Not: return build(f.child(0), !neg);
      case FormulaKind::And:
      case FormulaKind::Or: {
        bool is_and = (f.kind() == FormulaKind::And) != neg;
        Cnf l = build(f.lhs(), neg), r = build(f.rhs(), neg);
        if (is_and) {
          l.insert(l.end(), r.begin(), r.end());
          return check(std::move(l));
        }
        Cnf out;
        for (const auto& x : l)
          for (const auto& y : r) {
            Clause c;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(c));
            bool taut = false;
            for (int v : c)
              if (v > 0 && std::binary_search(c.begin(), c.end(), -v)) taut = true;
            if (!taut) out.push_back(std::move(c));
            if (out.size() > cap) {
              overflow = true;
              return {};
            }
          }
        return out;
      }
      default:
        throw Error(ErrorCode::validation, "guard contains a temporal operator");
    }
  }

  Cnf check(Cnf c) {
    if (c.size() > cap) overflow = true;
    return c;
  }
};

}  // namespace

CnfFragment check_local_cnf_fragment(const Nba& a, std::size_t clause_cap) {
  bool indeterminate = false;
  for (const auto& t : a.transitions()) {
    CnfBuilder b;
    b.cap = clause_cap;
    Cnf cnf = b.build(t.guard, false);
    for (const auto& clause : cnf) {
      std::set<int> robots;
      for (int v : clause) robots.insert(b.aps[std::abs(v) - 1].robot);
      if (robots.size() > 1) return CnfFragment::violated;
    }
    if (b.overflow) indeterminate = true;
  }
  return indeterminate ? CnfFragment::indeterminate : CnfFragment::holds;
}

std::string dump_decomposition(const AugmentedNba& a, const Decomposition& d) {
  std::ostringstream out;
  out << "aux " << a.nba.state_name(d.aux) << "\n";
  out << "dset";
  for (StateId q : d.d_set) out << " " << a.nba.state_name(q);
  out << "\n";
  for (const auto& [q, nexts] : d.q_next) {
    out << "next " << a.nba.state_name(q) << " :";
    for (StateId r : nexts) out << " " << a.nba.state_name(r);
    out << "\n";
  }
  for (const auto& [key, runs] : d.witnesses) {
    for (const auto& w : runs) {
      out << "run";
      for (StateId s : w.run.states) out << " " << a.nba.state_name(s);
      out << " | hops " << w.run.hops() << (w.run.touches_accepting ? " accepting" : "") << " | sigma";
      for (const auto& s : w.sigma_dec) out << " " << s.to_string();
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace ltlgrid

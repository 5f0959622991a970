#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltlgrid/buchi.hpp"
#include "ltlgrid/symbols.hpp"

namespace ltlgrid {

// The automaton plus an auxiliary state (always the last state) that waits on
// a True self-loop and enters the original initial states on the initial label.
struct AugmentedNba {
  Nba nba;
  StateId aux = 0;
  Symbol initial_symbol;
};

struct DecomposeOptions {
  std::size_t max_hops = 0;  // 0 means the number of states
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  RegionRelation regions;
};

struct CandidateRun {
  std::vector<StateId> states;  // source, intermediates, terminal
  Formula composite_guard;
  bool touches_accepting = false;

  std::size_t hops() const { return states.size() - 1; }
  StateId source() const { return states.front(); }
  StateId terminal() const { return states.back(); }
};

struct DecomposabilityResult {
  bool decomposable = false;
  std::vector<Symbol> sigma_dec;
};

struct WitnessRun {
  CandidateRun run;
  std::vector<Symbol> sigma_dec;
};

using StatePair = std::pair<StateId, StateId>;

struct Decomposition {
  StateId aux = 0;
  std::set<StateId> d_set;
  std::map<StateId, std::set<StateId>> q_next;
  std::map<StatePair, std::vector<Symbol>> sigma_dec;
  std::map<StatePair, std::vector<WitnessRun>> witnesses;
  std::size_t rounds = 0;
};

AugmentedNba augment(const Nba& a, const Symbol& initial_symbol);
AugmentedNba prune_infeasible(const AugmentedNba& a, const DecomposeOptions& options = {});

// Feasible symbols of the self-loop of q; the auxiliary state only admits the empty symbol.
std::vector<Symbol> self_loop_symbols(const AugmentedNba& a, StateId q, const DecomposeOptions& options = {});

std::vector<CandidateRun> enumerate_runs(const AugmentedNba& a, StateId q, const DecomposeOptions& options = {});
DecomposabilityResult is_decomposable(const CandidateRun& run, const std::vector<Symbol>& self_symbols,
                                      const DecomposeOptions& options = {});
Decomposition decompose(const AugmentedNba& a, const DecomposeOptions& options = {});

enum class CnfFragment { holds, violated, indeterminate };
// True when every guard has a CNF whose clauses each mention a single robot.
CnfFragment check_local_cnf_fragment(const Nba& a, std::size_t clause_cap = 10000);

std::string dump_decomposition(const AugmentedNba& a, const Decomposition& d);

}  // namespace ltlgrid

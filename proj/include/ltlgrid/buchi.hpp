#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltlgrid/ltl.hpp"
#include "ltlgrid/symbols.hpp"

namespace ltlgrid {

using StateId = std::uint32_t;

struct NbaTransition {
  StateId source = 0;
  StateId target = 0;
  Formula guard;
};

struct LassoWord {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;  // nonempty
};

// Parallel transitions between the same pair of states are merged into one
// disjunctive guard on construction.
class Nba {
 public:
  Nba() = default;
  Nba(std::size_t num_states, std::vector<StateId> initial, std::vector<StateId> accepting,
      std::vector<NbaTransition> transitions, std::vector<AtomicPredicate> ap_universe);

  std::size_t num_states() const { return num_states_; }
  const std::vector<StateId>& initial() const { return initial_; }
  const std::vector<StateId>& accepting() const { return accepting_; }
  bool is_accepting(StateId q) const { return accepting_flags_.at(q) != 0; }
  bool is_initial(StateId q) const;
  const std::vector<NbaTransition>& transitions() const { return transitions_; }
  const std::vector<AtomicPredicate>& ap_universe() const { return ap_universe_; }

  // indices into transitions(), ordered by target
  const std::vector<std::size_t>& outgoing(StateId q) const { return outgoing_.at(q); }
  const NbaTransition* find(StateId source, StateId target) const;
  const Formula* self_loop(StateId q) const;

  std::vector<std::string> state_names;  // optional, for dumps

  std::string state_name(StateId q) const;

 private:
  std::size_t num_states_ = 0;
  std::vector<StateId> initial_;
  std::vector<StateId> accepting_;
  std::vector<char> accepting_flags_;
  std::vector<NbaTransition> transitions_;
  std::vector<AtomicPredicate> ap_universe_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

// Transition-based generalized Buchi automaton: a run is accepting when every
// acceptance set is hit by infinitely many transitions.
struct GeneralizedTransition {
  StateId source = 0;
  StateId target = 0;
  Formula guard;
  std::vector<char> accepting_sets;  // one flag per acceptance set
};

struct GeneralizedBuchi {
  std::size_t num_states = 0;
  StateId initial = 0;
  std::size_t num_sets = 0;
  std::vector<GeneralizedTransition> transitions;
  std::vector<AtomicPredicate> ap_universe;
};

struct TranslateOptions {
  std::size_t state_cap = 100000;
};

GeneralizedBuchi translate_generalized(const Formula& f, const TranslateOptions& options = {});
Nba degeneralize(const GeneralizedBuchi& g, const TranslateOptions& options = {});
Nba translate(const Formula& f, const TranslateOptions& options = {});

bool accepts_lasso(const Nba& a, const LassoWord& w);
bool accepts_lasso(const GeneralizedBuchi& a, const LassoWord& w);

std::set<StateId> successors(const Nba& a, StateId q, const Symbol& s);

Nba import_automaton(std::string_view text);
std::string export_automaton(const Nba& a);

}  // namespace ltlgrid

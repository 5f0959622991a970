#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ltlgrid/buchi.hpp"
#include "ltlgrid/decompose.hpp"
#include "ltlgrid/distgraph.hpp"
#include "ltlgrid/gridworld.hpp"
#include "ltlgrid/localplan.hpp"
#include "ltlgrid/scenario.hpp"

namespace ltlgrid {

struct OfflinePlan {
  Nba nba;
  AugmentedNba pruned;
  Decomposition decomposition;
  DistanceGraph graph;
  CnfFragment cnf = CnfFragment::indeterminate;
  double seconds = 0.0;
};

OfflinePlan compile_offline(const Nba& nba, const Symbol& initial, const DecomposeOptions& options = {});

struct MissionConfig {
  std::size_t accepting_target = 2;
  std::size_t max_steps = 10000;
  SymbolPolicy symbol_policy = SymbolPolicy::minimal;
  bool random_state_ties = false;
  std::uint64_t seed = 0;
  double sensor_range = 1.0;
  bool occlusion = false;
  bool relaxed_avoidance = false;
  bool reverse_update_order = false;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

MissionConfig config_from(const Scenario& s);

enum class EventKind {
  sense,
  replan,
  arrive,
  wait,
  dispatch,
  transition,
  accepting,
  symbol_reselect,
  edge_removed,
  failure,
};

std::string to_string(EventKind k);

struct Event {
  std::size_t tick = 0;
  EventKind kind = EventKind::sense;
  std::optional<int> robot;
  std::optional<StateId> q_from;
  std::optional<StateId> q_to;
  std::optional<Symbol> symbol;
  std::string detail;
};

std::string to_json_line(const Event& e);

enum class RobotStatus { idle, planning, moving, arrived };

struct RobotRuntime {
  int index = 1;
  Cell cell;
  double speed = 1.0;
  double progress = 0.0;
  RobotStatus status = RobotStatus::idle;
  Target target;
  Path path;
  std::size_t path_pos = 0;
  bool held = false;
};

enum class OutcomeKind { success, infeasible_offline, infeasible_online };

std::string to_string(OutcomeKind k);
int exit_code(OutcomeKind k);

struct MissionStats {
  std::size_t steps = 0;
  std::size_t transitions = 0;
  std::size_t replans = 0;
  std::size_t symbol_reselections = 0;
  std::size_t edge_removals = 0;
  std::size_t holds = 0;
  std::vector<double> plan_latency_ms;
  std::vector<double> map_update_ms;
};

struct MissionOutcome {
  OutcomeKind kind = OutcomeKind::infeasible_offline;
  std::string reason;
  std::size_t accepting_traversals = 0;
  std::vector<std::size_t> t_f;
  MissionStats stats;
  std::vector<Event> events;
  std::vector<std::vector<Cell>> trajectory;  // per tick, robots in index order
};

struct NoProgressAvailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One hop closer to the accepting-edge sources, or an
// accepting edge when already at one.
StateId select_next_state(const DistanceGraph& g, StateId q, std::mt19937_64* tie_rng = nullptr);
Symbol select_symbol(const std::vector<Symbol>& candidates, SymbolPolicy policy, std::mt19937_64& rng);

class Mission {
 public:
  Mission(const TrueEnvironment& env, const std::vector<RobotSpec>& robots, OfflinePlan plan, MissionConfig config);

  bool running() const { return !finished_; }
  void step();

  std::size_t tick() const { return t_; }
  StateId q_current() const { return q_current_; }
  std::optional<StateId> q_next() const { return q_next_; }
  const Symbol& sigma_next() const { return sigma_next_; }
  const std::set<int>& n_next() const { return n_next_; }
  const Formula& b_next() const { return b_next_; }
  bool settling() const { return settling_; }
  const std::vector<RobotRuntime>& robots() const { return robots_; }
  const OccupancyMap& map() const { return map_; }
  const DistanceGraph& graph() const { return graph_; }
  const OfflinePlan& plan() const { return plan_; }
  std::size_t accepting_traversals() const { return outcome_.accepting_traversals; }
  const MissionOutcome& outcome() const { return outcome_; }
  MissionOutcome take_outcome() { return std::move(outcome_); }

 private:
  void start();
  void move_robots();
  void sense_all();
  void replan_blocked();
  void detect_arrivals();
  void check_invariants();
  void maybe_transition();
  void dispatch(bool keep_target);
  bool assign_tasks();
  bool plan_for(RobotRuntime& r, const char* why);
  void symbol_failed(int robot);
  void finish(OutcomeKind kind, const std::string& reason);
  void log(EventKind kind, std::optional<int> robot = std::nullopt, const std::string& detail = {});

  Symbol current_label() const;
  bool arrived(const RobotRuntime& r) const;
  bool completes(const Symbol& lab) const;
  std::vector<std::string> forbidden_for(const RobotRuntime& r) const;
  RobotRuntime& robot(int index) { return robots_[index - 1]; }

  const TrueEnvironment& env_;
  OfflinePlan plan_;
  MissionConfig config_;
  DistanceGraph graph_;
  OccupancyMap map_;
  std::vector<RobotRuntime> robots_;
  std::mt19937_64 rng_;

  std::size_t t_ = 0;
  StateId q_current_ = 0;
  std::optional<StateId> q_next_;
  Symbol sigma_next_;
  Formula b_inv_;
  Formula b_next_;
  std::set<AtomicPredicate> next_aps_;
  std::size_t hops_ = 1;
  bool accepting_run_ = false;
  std::set<int> n_next_;
  std::map<StatePair, std::set<Symbol>> failed_;

  bool settling_ = false;
  std::size_t settle_until_ = 0;
  std::size_t last_transition_ = static_cast<std::size_t>(-1);
  bool finished_ = false;
  MissionOutcome outcome_;
};

struct RunHooks {
  std::function<void(const Mission&)> on_tick;  // after every tick, including tick 0
  const Nba* automaton = nullptr;                // overrides the scenario automaton
};

MissionOutcome run_mission(const Scenario& s, const MissionConfig& config, const RunHooks& hooks = {});

struct CommunicationSummary {
  std::size_t selection_rounds = 0;
  std::size_t arrival_notifications = 0;
  std::size_t transitions = 0;
};

CommunicationSummary communication_events(const std::vector<Event>& log);

std::string summary_json(const MissionOutcome& o);

}  // namespace ltlgrid

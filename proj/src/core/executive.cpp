#include "ltlgrid/executive.hpp"

#include <algorithm>
#include <chrono>

#include "json.hpp"
#include "ltlgrid/error.hpp"

namespace ltlgrid {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool mentions_obstacle(const Symbol& s) {
  return std::any_of(s.aps().begin(), s.aps().end(), [](const AtomicPredicate& ap) { return ap.region == kObstacleRegion; });
}

Symbol only_robot(const Symbol& s, int robot) {
  std::vector<AtomicPredicate> aps;
  for (const auto& ap : s.aps())
    if (ap.robot == robot) aps.push_back(ap);
  return Symbol(std::move(aps));
}

void negative_regions(const Formula& f, int robot, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::Not && f.child(0).kind() == FormulaKind::Atom) {
    if (f.child(0).ap().robot == robot) out.insert(f.child(0).ap().region);
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) negative_regions(f.child(i), robot, out);
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t idx = static_cast<std::size_t>(p * (v.size() - 1) + 0.5);
  return v[std::min(idx, v.size() - 1)];
}

}  // namespace

OfflinePlan compile_offline(const Nba& nba, const Symbol& initial, const DecomposeOptions& options) {
  auto start = Clock::now();
  OfflinePlan plan;
  plan.nba = nba;
  plan.pruned = prune_infeasible(augment(nba, initial), options);
  plan.decomposition = decompose(plan.pruned, options);
  plan.graph = build_graph(plan.decomposition);
  plan.cnf = check_local_cnf_fragment(nba);
  plan.seconds = ms_since(start) / 1000.0;
  return plan;
}

MissionConfig config_from(const Scenario& s) {
  MissionConfig c;
  c.accepting_target = s.accepting_target;
  c.max_steps = s.max_steps;
  c.symbol_policy = s.policy;
  c.seed = s.seed;
  c.sensor_range = s.sensor_range;
  c.occlusion = s.occlusion;
  c.relaxed_avoidance = s.relaxed_avoidance;
  return c;
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::sense: return "sense";
    case EventKind::replan: return "replan";
    case EventKind::arrive: return "arrive";
    case EventKind::wait: return "wait";
    case EventKind::dispatch: return "dispatch";
    case EventKind::transition: return "transition";
    case EventKind::accepting: return "accepting";
    case EventKind::symbol_reselect: return "symbol_reselect";
    case EventKind::edge_removed: return "edge_removed";
    case EventKind::failure: return "failure";
  }
  return "unknown";
}

std::string to_json_line(const Event& e) {
  nlohmann::ordered_json j;
  j["tick"] = e.tick;
  j["kind"] = to_string(e.kind);
  if (e.robot) j["robot"] = *e.robot;
  if (e.q_from) j["q_from"] = *e.q_from;
  if (e.q_to) j["q_to"] = *e.q_to;
  if (e.symbol) j["symbol"] = e.symbol->to_string();
  j["detail"] = e.detail;
  return j.dump();
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::success: return "success";
    case OutcomeKind::infeasible_offline: return "infeasible_offline";
    case OutcomeKind::infeasible_online: return "infeasible_online";
  }
  return "unknown";
}

int exit_code(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::success: return 0;
    case OutcomeKind::infeasible_offline: return 2;
    case OutcomeKind::infeasible_online: return 3;
  }
  return 1;
}

StateId select_next_state(const DistanceGraph& g, StateId q, std::mt19937_64* tie_rng) {
  std::size_t d = distance_to_vf(g, q);
  if (d == kInfinite) throw NoProgressAvailable("no path to an accepting edge from state " + std::to_string(q));
  std::vector<StateId> candidates;
  if (g.v_f.contains(q)) {
    // prefer accepting edges that lead back towards another accepting edge
    std::size_t best = kInfinite;
    for (StateId r : g.successors(q))
      if (g.is_accepting_edge(q, r)) best = std::min(best, distance_to_vf(g, r));
    for (StateId r : g.successors(q))
      if (g.is_accepting_edge(q, r) && distance_to_vf(g, r) == best) candidates.push_back(r);
  } else {
    for (StateId r : g.successors(q))
      if (distance_to_vf(g, r) == d - 1) candidates.push_back(r);
  }
  if (candidates.empty()) throw NoProgressAvailable("no successor makes progress from state " + std::to_string(q));
  if (tie_rng && candidates.size() > 1) return candidates[(*tie_rng)() % candidates.size()];
  return candidates.front();
}

Symbol select_symbol(const std::vector<Symbol>& candidates, SymbolPolicy policy, std::mt19937_64& rng) {
  if (candidates.empty()) throw Error(ErrorCode::invalid_argument, "no candidate symbols");
  if (policy == SymbolPolicy::random) return candidates[rng() % candidates.size()];
  return *std::min_element(candidates.begin(), candidates.end(), [](const Symbol& a, const Symbol& b) {
    auto ra = a.robots().size(), rb = b.robots().size();
    if (ra != rb) return ra < rb;
    return a < b;
  });
}

Mission::Mission(const TrueEnvironment& env, const std::vector<RobotSpec>& robots, OfflinePlan plan,
                 MissionConfig config)
    : env_(env), plan_(std::move(plan)), config_(config), graph_(plan_.graph),
      map_(env.layout().width(), env.layout().height()), rng_(config.seed) {
  for (const auto& spec : robots) {
    RobotRuntime r;
    r.index = spec.index;
    r.cell = spec.start;
    r.speed = spec.speed;
    robots_.push_back(r);
  }
  q_current_ = plan_.decomposition.aux;
  b_inv_ = Formula::make_true();
  start();
}

void Mission::log(EventKind kind, std::optional<int> robot, const std::string& detail) {
  Event e;
  e.tick = t_;
  e.kind = kind;
  e.robot = robot;
  e.detail = detail;
  switch (kind) {
    case EventKind::dispatch:
    case EventKind::transition:
    case EventKind::accepting:
    case EventKind::symbol_reselect:
    case EventKind::edge_removed:
      e.q_from = q_current_;
      e.q_to = q_next_;
      if (kind != EventKind::edge_removed) e.symbol = sigma_next_;
      break;
    default:
      break;
  }
  outcome_.events.push_back(std::move(e));
}

void Mission::finish(OutcomeKind kind, const std::string& reason) {
  if (finished_) return;
  finished_ = true;
  outcome_.kind = kind;
  outcome_.reason = reason;
  if (kind != OutcomeKind::success) log(EventKind::failure, std::nullopt, reason);
}

Symbol Mission::current_label() const {
  std::vector<RobotPose> poses;
  for (const auto& r : robots_) poses.push_back({r.index, r.cell});
  return label(poses, env_);
}

bool Mission::arrived(const RobotRuntime& r) const {
  return robot_label(r.index, r.cell, env_).restricted_to(next_aps_) == only_robot(sigma_next_, r.index);
}

bool Mission::completes(const Symbol& lab) const {
  return lab.restricted_to(next_aps_) == sigma_next_ && evaluate_guard(b_next_, lab);
}

std::vector<std::string> Mission::forbidden_for(const RobotRuntime& r) const {
  const auto& lay = env_.layout();
  std::set<std::string> allowed(r.target.regions.begin(), r.target.regions.end());
  for (int id : lay.regions_at(r.cell)) allowed.insert(lay.labels()[id]);
  std::vector<std::string> out;
  if (config_.relaxed_avoidance) {
    std::set<std::string> avoid;
    negative_regions(to_nnf(b_inv_), r.index, avoid);
    for (const auto& name : avoid)
      if (!allowed.contains(name)) out.push_back(name);
    return out;
  }
  for (const auto& name : lay.labels())
    if (!allowed.contains(name)) out.push_back(name);
  return out;
}

bool Mission::plan_for(RobotRuntime& r, const char* why) {
  ReachabilityTask task{r.index, r.cell, r.target, forbidden_for(r), true};
  r.status = RobotStatus::planning;
  auto start = Clock::now();
  auto path = plan_reach(task, map_, env_.layout());
  outcome_.stats.plan_latency_ms.push_back(ms_since(start));
  if (why) {
    ++outcome_.stats.replans;
    log(EventKind::replan, r.index, why);
  }
  if (!path) return false;
  r.path = std::move(*path);
  r.path_pos = 0;
  r.held = false;
  r.status = RobotStatus::moving;
  return true;
}

void Mission::symbol_failed(int robot) {
  failed_[{q_current_, *q_next_}].insert(sigma_next_);
  ++outcome_.stats.symbol_reselections;
  log(EventKind::symbol_reselect, robot,
      "robot " + std::to_string(robot) + " cannot reach " + this->robot(robot).target.to_string());
  dispatch(true);
}

bool Mission::assign_tasks() {
  auto targets = symbol_targets(sigma_next_, n_next_, env_.layout().relation());
  for (auto& r : robots_) {
    r.held = false;
    r.progress = 0.0;
    r.path.clear();
    r.path_pos = 0;
    if (!n_next_.contains(r.index)) {
      r.status = RobotStatus::idle;
      r.target = Target{};
      continue;
    }
    r.target = targets.at(r.index);
    if (arrived(r)) {
      r.status = RobotStatus::arrived;
      log(EventKind::arrive, r.index, r.target.to_string());
      continue;
    }
    if (!plan_for(r, nullptr)) {
      failed_[{q_current_, *q_next_}].insert(sigma_next_);
      ++outcome_.stats.symbol_reselections;
      log(EventKind::symbol_reselect, r.index,
          "robot " + std::to_string(r.index) + " cannot reach " + r.target.to_string());
      return false;
    }
  }
  return true;
}

void Mission::dispatch(bool keep_target) {
  settling_ = false;
  const auto& dec = plan_.decomposition;
  while (!finished_) {
    if (!keep_target || !q_next_ || !graph_.has_edge(q_current_, *q_next_)) {
      try {
        q_next_ = select_next_state(graph_, q_current_, config_.random_state_ties ? &rng_ : nullptr);
      } catch (const NoProgressAvailable& e) {
        q_next_.reset();
        finish(OutcomeKind::infeasible_online, "no-candidate-states");
        return;
      }
    }
    keep_target = true;
    StatePair edge{q_current_, *q_next_};
    const bool accepting_edge = graph_.is_accepting_edge(edge.first, edge.second);
    std::map<Symbol, const WitnessRun*> best;
    auto wit = dec.witnesses.find(edge);
    if (wit != dec.witnesses.end()) {
      const auto& failed = failed_[edge];
      for (const auto& w : wit->second) {
        if (accepting_edge && !w.run.touches_accepting) continue;
        for (const auto& s : w.sigma_dec) {
          if (failed.contains(s) || mentions_obstacle(s)) continue;
          auto it = best.find(s);
          if (it == best.end() || w.run.hops() < it->second->run.hops()) best[s] = &w;
        }
      }
    }
    if (best.empty()) {
      graph_ = remove_edge(graph_, edge.first, edge.second);
      ++outcome_.stats.edge_removals;
      log(EventKind::edge_removed, std::nullopt, "no realizable symbol left");
      q_next_.reset();
      keep_target = false;
      continue;
    }
    std::vector<Symbol> candidates;
    for (const auto& [s, w] : best) candidates.push_back(s);
    sigma_next_ = select_symbol(candidates, config_.symbol_policy, rng_);
    const WitnessRun* w = best.at(sigma_next_);
    b_next_ = w->run.composite_guard;
    hops_ = w->run.hops();
    accepting_run_ = w->run.touches_accepting;
    next_aps_ = atomic_predicates(b_next_);
    n_next_.clear();
    for (const auto& ap : next_aps_) n_next_.insert(ap.robot);
    std::size_t d_here = distance_to_vf(graph_, q_current_), d_there = distance_to_vf(graph_, *q_next_);
    log(EventKind::dispatch, std::nullopt,
        "d_F " + (d_here == kInfinite ? std::string("inf") : std::to_string(d_here)) + " -> " +
            (d_there == kInfinite ? std::string("inf") : std::to_string(d_there)) + ", hops " +
            std::to_string(hops_) + (accepting_run_ ? ", accepting" : ""));
    if (assign_tasks()) return;
  }
}

void Mission::start() {
  t_ = 0;
  if (distance_to_vf(graph_, q_current_) == kInfinite) {
    finished_ = true;
    outcome_.kind = OutcomeKind::infeasible_offline;
    outcome_.reason = "no decomposable accepting path";
    return;
  }
  sense_all();
  dispatch(false);
  if (!finished_) detect_arrivals();
  if (!finished_) check_invariants();
  if (!finished_) maybe_transition();
  std::vector<Cell> cells;
  for (const auto& r : robots_) cells.push_back(r.cell);
  outcome_.trajectory.push_back(std::move(cells));
}

void Mission::step() {
  if (finished_) return;
  if (t_ >= config_.max_steps) {
    finish(OutcomeKind::infeasible_online, "budget");
    return;
  }
  ++t_;
  outcome_.stats.steps = t_;
  move_robots();
  if (!finished_) sense_all();
  if (!finished_) replan_blocked();
  if (!finished_) detect_arrivals();
  if (!finished_) check_invariants();
  if (!finished_) maybe_transition();
  std::vector<Cell> cells;
  for (const auto& r : robots_) cells.push_back(r.cell);
  outcome_.trajectory.push_back(std::move(cells));
}

void Mission::move_robots() {
  if (settling_ || !q_next_) return;
  std::vector<int> order;
  for (const auto& r : robots_)
    if (r.status == RobotStatus::moving) order.push_back(r.index);
  if (config_.reverse_update_order) std::reverse(order.begin(), order.end());
  std::vector<int> held;
  for (int j : order) {
    RobotRuntime& r = robot(j);
    if (r.status != RobotStatus::moving) continue;
    r.progress = std::min(r.progress + r.speed, 1.0);
    if (r.progress < 1.0 - 1e-9) continue;
    if (r.path_pos + 1 >= r.path.size() || map_.at(r.path[r.path_pos + 1]) != CellState::free) {
      // the next cell is not known free yet; plan again with a known first step
      if (!plan_for(r, "next cell not known free")) {
        symbol_failed(j);
        return;
      }
      if (r.path.size() < 2) continue;
    }
    Cell prev = r.cell;
    r.cell = r.path[r.path_pos + 1];
    Symbol lab = current_label();
    if (!evaluate_guard(b_inv_, lab) && !completes(lab)) {
      r.cell = prev;
      if (!r.held) {
        r.held = true;
        ++outcome_.stats.holds;
        log(EventKind::wait, j, "holding to keep the current self-loop");
      }
      held.push_back(j);
      continue;
    }
    r.held = false;
    r.progress -= 1.0;
    ++r.path_pos;
  }
  if (held.size() > 1) {
    // several robots may only move together, e.g. to swap region memberships at once
    std::vector<Cell> before;
    for (int j : held) {
      before.push_back(robot(j).cell);
      robot(j).cell = robot(j).path[robot(j).path_pos + 1];
    }
    Symbol lab = current_label();
    if (evaluate_guard(b_inv_, lab) || completes(lab)) {
      for (int j : held) {
        robot(j).held = false;
        robot(j).progress -= 1.0;
        ++robot(j).path_pos;
      }
    } else {
      for (std::size_t i = 0; i < held.size(); ++i) robot(held[i]).cell = before[i];
    }
  }
}

void Mission::sense_all() {
  SenseOptions opts{config_.occlusion};
  for (const auto& r : robots_) {
    auto obs = sense(env_, r.cell, config_.sensor_range, opts);
    auto start = Clock::now();
    std::size_t revealed = map_.apply(obs);
    outcome_.stats.map_update_ms.push_back(ms_since(start));
    if (revealed) log(EventKind::sense, r.index, "revealed " + std::to_string(revealed) + " cells");
  }
}

void Mission::replan_blocked() {
  for (auto& r : robots_) {
    if (r.status != RobotStatus::moving) continue;
    if (!path_blocked(r.path, map_, r.path_pos + 1)) continue;
    if (!plan_for(r, "path blocked")) {
      symbol_failed(r.index);
      return;
    }
  }
}

void Mission::detect_arrivals() {
  if (settling_ || !q_next_) return;
  for (auto& r : robots_) {
    if (r.status != RobotStatus::moving || !arrived(r)) continue;
    r.status = RobotStatus::arrived;
    r.path.clear();
    r.path_pos = 0;
    log(EventKind::arrive, r.index, r.target.to_string());
  }
}

void Mission::check_invariants() {
  for (const auto& r : robots_)
    if (env_.occupied(r.cell)) {
      finish(OutcomeKind::infeasible_online, "invariant: robot " + std::to_string(r.index) + " on an obstacle");
      return;
    }
  if (settling_ || !q_next_) return;
  bool all_arrived = std::all_of(n_next_.begin(), n_next_.end(),
                                 [&](int j) { return robots_[j - 1].status == RobotStatus::arrived; });
  if (!all_arrived && !evaluate_guard(b_inv_, current_label()))
    finish(OutcomeKind::infeasible_online, "invariant: self-loop guard violated during transit");
}

void Mission::maybe_transition() {
  if (finished_ || !q_next_) return;
  if (!settling_) {
    bool all_arrived = std::all_of(n_next_.begin(), n_next_.end(),
                                   [&](int j) { return robots_[j - 1].status == RobotStatus::arrived; });
    if (!all_arrived) return;
    if (!completes(current_label())) {
      finish(OutcomeKind::infeasible_online, "invariant: arrival label does not enable the transition");
      return;
    }
    settling_ = true;
    settle_until_ = t_ + hops_ - 1;
  }
  if (t_ < settle_until_ || t_ == last_transition_) return;
  log(EventKind::transition, std::nullopt, "hops " + std::to_string(hops_));
  ++outcome_.stats.transitions;
  last_transition_ = t_;
  if (accepting_run_) {
    ++outcome_.accepting_traversals;
    outcome_.t_f.push_back(t_);
    log(EventKind::accepting, std::nullopt, "traversal " + std::to_string(outcome_.accepting_traversals));
  }
  q_current_ = *q_next_;
  q_next_.reset();
  settling_ = false;
  failed_.clear();
  const Formula* self = plan_.pruned.nba.self_loop(q_current_);
  b_inv_ = self ? *self : Formula::make_true();
  for (auto& r : robots_) {
    r.status = RobotStatus::idle;
    r.path.clear();
  }
  if (outcome_.accepting_traversals >= config_.accepting_target) {
    finish(OutcomeKind::success, "accepting target reached");
    return;
  }
  dispatch(false);
}

MissionOutcome run_mission(const Scenario& s, const MissionConfig& config, const RunHooks& hooks) {
  TrueEnvironment env = make_environment(s);
  Nba nba = hooks.automaton ? *hooks.automaton : scenario_automaton(s);
  DecomposeOptions opts;
  opts.regions = s.relation;
  opts.enumeration_cap = config.enumeration_cap;
  OfflinePlan plan = compile_offline(nba, initial_symbol(s), opts);
  Mission m(env, s.robots, std::move(plan), config);
  if (hooks.on_tick) hooks.on_tick(m);
  while (m.running()) {
    m.step();
    if (hooks.on_tick) hooks.on_tick(m);
  }
  return m.take_outcome();
}

CommunicationSummary communication_events(const std::vector<Event>& log) {
  CommunicationSummary c;
  for (const auto& e : log) {
    if (e.kind == EventKind::dispatch || e.kind == EventKind::symbol_reselect) ++c.selection_rounds;
    if (e.kind == EventKind::arrive) ++c.arrival_notifications;
    if (e.kind == EventKind::transition) ++c.transitions;
  }
  return c;
}

std::string summary_json(const MissionOutcome& o) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(o.kind);
  j["reason"] = o.reason;
  j["accepting_traversals"] = o.accepting_traversals;
  j["t_f"] = o.t_f;
  j["steps"] = o.stats.steps;
  j["transitions"] = o.stats.transitions;
  j["replans"] = o.stats.replans;
  j["symbol_reselections"] = o.stats.symbol_reselections;
  j["edge_removals"] = o.stats.edge_removals;
  j["holds"] = o.stats.holds;
  const auto& lat = o.stats.plan_latency_ms;
  j["plan_latency_ms"] = {{"count", lat.size()},
                          {"p50", percentile(lat, 0.5)},
                          {"p90", percentile(lat, 0.9)},
                          {"max", lat.empty() ? 0.0 : *std::max_element(lat.begin(), lat.end())}};
  const auto& upd = o.stats.map_update_ms;
  double mean = 0.0;
  for (double v : upd) mean += v;
  if (!upd.empty()) mean /= static_cast<double>(upd.size());
  j["map_update_ms"] = {{"count", upd.size()}, {"mean", mean}};
  auto c = communication_events(o.events);
  j["communication"] = {{"selection_rounds", c.selection_rounds}, {"arrival_notifications", c.arrival_notifications}};
  return j.dump(2);
}

}  // namespace ltlgrid

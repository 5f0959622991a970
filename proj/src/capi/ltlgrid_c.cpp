#include "ltlgrid/ltlgrid.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ltlgrid/buchi.hpp"
#include "ltlgrid/error.hpp"
#include "ltlgrid/executive.hpp"
#include "ltlgrid/ltl.hpp"
#include "ltlgrid/scenario.hpp"

struct ltlg_formula {
  ltlgrid::Formula f;
  std::string text;
};

struct ltlg_automaton {
  ltlgrid::Nba nba;
  std::string text;
};

struct ltlg_scenario {
  ltlgrid::Scenario s;
  std::string text;
};

struct ltlg_report {
  int exit_code = 0;
  std::string text;
  std::string json;
};

namespace {

using namespace ltlgrid;
namespace fs = std::filesystem;

thread_local std::string g_last_error;

ltlg_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::syntax: return LTLG_SYNTAX;
    case ErrorCode::validation: return LTLG_VALIDATION;
    case ErrorCode::resource: return LTLG_RESOURCE;
    case ErrorCode::io: return LTLG_IO;
    case ErrorCode::invalid_argument: return LTLG_INVALID_ARGUMENT;
    default: return LTLG_INTERNAL;
  }
}

template <class F>
ltlg_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LTLG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LTLG_RESOURCE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LTLG_INTERNAL;
  }
}

ltlg_status bad_argument(const char* what) {
  g_last_error = what;
  return LTLG_INVALID_ARGUMENT;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

fs::path prepare_dir(const char* out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

std::vector<Symbol> parse_symbol_list(const char* text) {
  std::vector<Symbol> out;
  if (!text) return out;
  std::string_view sv(text);
  while (!sv.empty()) {
    auto pos = sv.find(';');
    auto part = sv.substr(0, pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty()) out.push_back(parse_symbol(part));
    if (pos == std::string_view::npos) break;
    sv.remove_prefix(pos + 1);
  }
  return out;
}

MissionConfig apply(const Scenario& s, const ltlg_options* opts) {
  MissionConfig c = config_from(s);
  if (!opts) return c;
  if (opts->has_seed) c.seed = opts->seed;
  if (opts->accepting_target) c.accepting_target = opts->accepting_target;
  if (opts->max_steps) c.max_steps = opts->max_steps;
  if (opts->relaxed_avoidance) c.relaxed_avoidance = true;
  if (opts->occlusion) c.occlusion = true;
  return c;
}

const char* cnf_name(CnfFragment c) {
  switch (c) {
    case CnfFragment::holds: return "holds";
    case CnfFragment::violated: return "violated";
    case CnfFragment::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string dist_text(std::size_t d) { return d == kInfinite ? "inf" : std::to_string(d); }

std::string trajectory_csv(const MissionOutcome& o, const Scenario& s) {
  std::ostringstream out;
  out << "tick,robot,row,col\n";
  for (std::size_t t = 0; t < o.trajectory.size(); ++t)
    for (std::size_t i = 0; i < o.trajectory[t].size(); ++i)
      out << t << "," << s.robots[i].index << "," << o.trajectory[t][i].row << "," << o.trajectory[t][i].col << "\n";
  return out.str();
}

std::string first_tf(const MissionOutcome& o) { return o.t_f.empty() ? std::string() : std::to_string(o.t_f.front()); }

}  // namespace

extern "C" {

void ltlg_options_init(ltlg_options* opts) {
  if (opts) *opts = ltlg_options{};
}

const char* ltlg_last_error(void) { return g_last_error.c_str(); }

const char* ltlg_version(void) { return "0.1.0"; }

ltlg_status ltlg_formula_parse(const char* text, ltlg_formula** out) {
  if (!text || !out) return bad_argument("null argument");
  return guarded([&] {
    auto f = parse_ltl(text);
    *out = new ltlg_formula{f, to_string(f)};
  });
}

ltlg_status ltlg_formula_text(const ltlg_formula* f, const char** out) {
  if (!f || !out) return bad_argument("null argument");
  *out = f->text.c_str();
  return LTLG_OK;
}

ltlg_status ltlg_formula_nnf(const ltlg_formula* f, ltlg_formula** out) {
  if (!f || !out) return bad_argument("null argument");
  return guarded([&] {
    auto n = to_nnf(f->f);
    *out = new ltlg_formula{n, to_string(n)};
  });
}

void ltlg_formula_free(ltlg_formula* f) { delete f; }

ltlg_status ltlg_automaton_translate(const ltlg_formula* f, ltlg_automaton** out) {
  if (!f || !out) return bad_argument("null argument");
  return guarded([&] {
    auto a = translate(f->f);
    *out = new ltlg_automaton{a, export_automaton(a)};
  });
}

ltlg_status ltlg_automaton_import(const char* text, ltlg_automaton** out) {
  if (!text || !out) return bad_argument("null argument");
  return guarded([&] {
    auto a = import_automaton(text);
    *out = new ltlg_automaton{a, export_automaton(a)};
  });
}

ltlg_status ltlg_automaton_export(const ltlg_automaton* a, const char** out) {
  if (!a || !out) return bad_argument("null argument");
  *out = a->text.c_str();
  return LTLG_OK;
}

size_t ltlg_automaton_num_states(const ltlg_automaton* a) { return a ? a->nba.num_states() : 0; }

size_t ltlg_automaton_num_transitions(const ltlg_automaton* a) { return a ? a->nba.transitions().size() : 0; }

ltlg_status ltlg_automaton_accepts_lasso(const ltlg_automaton* a, const char* prefix, const char* cycle,
                                         int* accepted) {
  if (!a || !cycle || !accepted) return bad_argument("null argument");
  return guarded([&] {
    LassoWord w{parse_symbol_list(prefix), parse_symbol_list(cycle)};
    if (w.cycle.empty()) throw Error(ErrorCode::invalid_argument, "lasso cycle must be nonempty");
    *accepted = accepts_lasso(a->nba, w) ? 1 : 0;
  });
}

void ltlg_automaton_free(ltlg_automaton* a) { delete a; }

ltlg_status ltlg_scenario_load_file(const char* path, ltlg_scenario** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] {
    auto s = load_scenario(path);
    *out = new ltlg_scenario{s, save_scenario(s)};
  });
}

ltlg_status ltlg_scenario_parse(const char* text, ltlg_scenario** out) {
  if (!text || !out) return bad_argument("null argument");
  return guarded([&] {
    auto s = parse_scenario(text);
    *out = new ltlg_scenario{s, save_scenario(s)};
  });
}

ltlg_status ltlg_scenario_text(const ltlg_scenario* s, const char** out) {
  if (!s || !out) return bad_argument("null argument");
  *out = s->text.c_str();
  return LTLG_OK;
}

void ltlg_scenario_free(ltlg_scenario* s) { delete s; }

ltlg_status ltlg_compile(const ltlg_scenario* sc, const char* out_dir, ltlg_report** out) {
  if (!sc || !out) return bad_argument("null argument");
  return guarded([&] {
    const Scenario& s = sc->s;
    Nba nba = scenario_automaton(s);
    DecomposeOptions opts;
    opts.regions = s.relation;
    OfflinePlan plan = compile_offline(nba, initial_symbol(s), opts);
    const auto& g = plan.graph;
    const StateId aux = plan.decomposition.aux;
    bool feasible = distance_to_vf(g, aux) != kInfinite;

    if (out_dir) {
      fs::path dir = prepare_dir(out_dir);
      write_file(dir / "automaton.txt", export_automaton(nba));
      write_file(dir / "pruned.txt", export_automaton(plan.pruned.nba));
      write_file(dir / "decomposition.txt", dump_decomposition(plan.pruned, plan.decomposition));
      write_file(dir / "graph.dot", to_dot(g, plan.pruned.nba));
    }

    std::ostringstream text;
    text << "automaton: " << nba.num_states() << " states, " << nba.transitions().size() << " transitions\n";
    text << "pruned: " << plan.pruned.nba.num_states() << " states, " << plan.pruned.nba.transitions().size()
         << " transitions\n";
    text << "graph: " << g.nodes.size() << " nodes, " << g.edges.size() << " edges, " << g.accepting_edges.size()
         << " accepting\n";
    text << "local cnf fragment: " << cnf_name(plan.cnf) << "\n";
    text << distance_table(g, plan.pruned.nba);
    if (!feasible) text << "no decomposable accepting path\n";

    nlohmann::ordered_json j;
    j["feasible"] = feasible;
    j["states"] = nba.num_states();
    j["pruned_states"] = plan.pruned.nba.num_states();
    j["graph_nodes"] = g.nodes.size();
    j["graph_edges"] = g.edges.size();
    j["local_cnf_fragment"] = cnf_name(plan.cnf);
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (StateId q : g.nodes) d[plan.pruned.nba.state_name(q)] = dist_text(distance_to_vf(g, q));
    j["d_F"] = d;
    j["seconds"] = plan.seconds;

    *out = new ltlg_report{feasible ? 0 : exit_code(OutcomeKind::infeasible_offline), text.str(), j.dump(2)};
  });
}

ltlg_status ltlg_run(const ltlg_scenario* sc, const ltlg_options* opts, const char* out_dir, ltlg_report** out) {
  if (!sc || !out) return bad_argument("null argument");
  return guarded([&] {
    const Scenario& s = sc->s;
    MissionConfig config = apply(s, opts);
    fs::path dir;
    if (out_dir) dir = prepare_dir(out_dir);
    std::size_t every = opts ? opts->snapshot_every : 0;

    RunHooks hooks;
    if (out_dir && every) {
      hooks.on_tick = [&](const Mission& m) {
        if (m.tick() % every == 0 || !m.running())
          write_file(dir / ("map_" + std::to_string(m.tick()) + ".pgm"), export_pgm(m.map()));
      };
    }
    MissionOutcome o = run_mission(s, config, hooks);

    std::string summary = summary_json(o);
    if (out_dir) {
      std::string events;
      for (const auto& e : o.events) events += to_json_line(e) + "\n";
      write_file(dir / "events.jsonl", events);
      write_file(dir / "summary.json", summary + "\n");
      write_file(dir / "trajectory.csv", trajectory_csv(o, s));
    }

    std::ostringstream text;
    text << "outcome: " << to_string(o.kind);
    if (!o.reason.empty()) text << " (" << o.reason << ")";
    text << "\n";
    if (o.kind == OutcomeKind::infeasible_offline) text << "no decomposable accepting path\n";
    text << "accepting traversals: " << o.accepting_traversals << "\n";
    text << "t_F:";
    for (auto t : o.t_f) text << " " << t;
    text << "\nsteps: " << o.stats.steps << ", transitions: " << o.stats.transitions
         << ", replans: " << o.stats.replans << ", symbol reselections: " << o.stats.symbol_reselections
         << ", edge removals: " << o.stats.edge_removals << "\n";
    *out = new ltlg_report{exit_code(o.kind), text.str(), summary};
  });
}

ltlg_status ltlg_sweep_sensor_range(const ltlg_scenario* sc, const ltlg_options* opts, const double* values,
                                    size_t count, const char* out_dir, ltlg_report** out) {
  if (!sc || !out || (!values && count)) return bad_argument("null argument");
  if (count == 0) return bad_argument("no sweep values");
  for (size_t i = 0; i < count; ++i)
    if (!(values[i] >= 1.0)) return bad_argument("sensor range values must be at least 1");
  return guarded([&] {
    const Scenario& s = sc->s;
    std::vector<MissionOutcome> results(count);
    std::vector<std::string> errors(count);
    std::vector<std::thread> workers;
    for (size_t i = 0; i < count; ++i) {
      workers.emplace_back([&, i] {
        try {
          MissionConfig c = apply(s, opts);
          c.sensor_range = values[i];
          results[i] = run_mission(s, c);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
      if (!e.empty()) throw Error(ErrorCode::invariant, e);

    std::ostringstream csv;
    csv << "sensor_range,outcome,t_f1\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    int worst = 0;
    for (size_t i = 0; i < count; ++i) {
      const auto& o = results[i];
      std::string outcome = o.kind == OutcomeKind::success ? "success"
                            : o.kind == OutcomeKind::infeasible_offline ? "infeasible"
                                                                        : "infeasible_online";
      csv << values[i] << "," << outcome << "," << first_tf(o) << "\n";
      nlohmann::ordered_json row;
      row["sensor_range"] = values[i];
      row["outcome"] = outcome;
      if (o.t_f.empty())
        row["t_f1"] = nullptr;
      else
        row["t_f1"] = o.t_f.front();
      rows.push_back(row);
      worst = std::max(worst, exit_code(o.kind));
    }
    if (out_dir) write_file(prepare_dir(out_dir) / "sweep.csv", csv.str());
    *out = new ltlg_report{worst, csv.str(), rows.dump(2)};
  });
}

int ltlg_report_exit_code(const ltlg_report* r) { return r ? r->exit_code : 1; }

const char* ltlg_report_text(const ltlg_report* r) { return r ? r->text.c_str() : ""; }

const char* ltlg_report_json(const ltlg_report* r) { return r ? r->json.c_str() : ""; }

void ltlg_report_free(ltlg_report* r) { delete r; }

}  // extern "C"

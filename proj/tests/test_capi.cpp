#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ltlgrid/ltlgrid.h"

namespace fs = std::filesystem;

namespace {

std::string scenario_path(const char* name) { return std::string(SCENARIO_DIR) + "/" + name + ".scn"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("ltlgrid_capi_" + name);
  fs::remove_all(dir);
  return dir;
}

int cli(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ltlg_scenario* load(const char* name) {
  ltlg_scenario* s = nullptr;
  REQUIRE(ltlg_scenario_load_file(scenario_path(name).c_str(), &s) == LTLG_OK);
  return s;
}

}  // namespace

TEST_CASE("formulas through the C interface") {
  ltlg_formula* f = nullptr;
  REQUIRE(ltlg_formula_parse("G F p1@l1 -> X p2@l3", &f) == LTLG_OK);
  const char* text = nullptr;
  REQUIRE(ltlg_formula_text(f, &text) == LTLG_OK);
  CHECK(std::string(text).find("p2@l3") != std::string::npos);
  ltlg_formula* n = nullptr;
  REQUIRE(ltlg_formula_nnf(f, &n) == LTLG_OK);
  ltlg_formula_free(n);
  ltlg_formula_free(f);

  ltlg_formula* bad = nullptr;
  CHECK(ltlg_formula_parse("p1@l1 &", &bad) == LTLG_SYNTAX);
  CHECK(bad == nullptr);
  CHECK(std::string(ltlg_last_error()).size() > 0);
  CHECK(ltlg_formula_parse(nullptr, &bad) == LTLG_INVALID_ARGUMENT);
  CHECK(std::string(ltlg_version()) == "0.1.0");
}

TEST_CASE("automata through the C interface") {
  ltlg_formula* f = nullptr;
  REQUIRE(ltlg_formula_parse("p1@l1 U p1@l2", &f) == LTLG_OK);
  ltlg_automaton* a = nullptr;
  REQUIRE(ltlg_automaton_translate(f, &a) == LTLG_OK);
  CHECK(ltlg_automaton_num_states(a) >= 2);
  int acc = -1;
  REQUIRE(ltlg_automaton_accepts_lasso(a, "{p1@l1};{p1@l1}", "{p1@l2}", &acc) == LTLG_OK);
  CHECK(acc == 1);
  REQUIRE(ltlg_automaton_accepts_lasso(a, "{}", "{p1@l2}", &acc) == LTLG_OK);
  CHECK(acc == 0);
  REQUIRE(ltlg_automaton_accepts_lasso(a, nullptr, "{p1@l1}", &acc) == LTLG_OK);
  CHECK(acc == 0);
  CHECK(ltlg_automaton_accepts_lasso(a, "", "", &acc) == LTLG_INVALID_ARGUMENT);
  CHECK(ltlg_automaton_accepts_lasso(a, "", "{p1@", &acc) == LTLG_SYNTAX);

  const char* text = nullptr;
  REQUIRE(ltlg_automaton_export(a, &text) == LTLG_OK);
  ltlg_automaton* b = nullptr;
  REQUIRE(ltlg_automaton_import(text, &b) == LTLG_OK);
  CHECK(ltlg_automaton_num_states(b) == ltlg_automaton_num_states(a));
  CHECK(ltlg_automaton_num_transitions(b) == ltlg_automaton_num_transitions(a));
  ltlg_automaton* c = nullptr;
  CHECK(ltlg_automaton_import("states 0\n", &c) != LTLG_OK);
  ltlg_automaton_free(b);
  ltlg_automaton_free(a);
  ltlg_formula_free(f);
}

TEST_CASE("scenario handles") {
  ltlg_scenario* s = load("two_regions");
  const char* text = nullptr;
  REQUIRE(ltlg_scenario_text(s, &text) == LTLG_OK);
  ltlg_scenario* again = nullptr;
  REQUIRE(ltlg_scenario_parse(text, &again) == LTLG_OK);
  const char* text2 = nullptr;
  REQUIRE(ltlg_scenario_text(again, &text2) == LTLG_OK);
  CHECK(std::string(text) == std::string(text2));
  ltlg_scenario_free(again);
  ltlg_scenario_free(s);

  ltlg_scenario* missing = nullptr;
  CHECK(ltlg_scenario_load_file("/nonexistent/x.scn", &missing) == LTLG_IO);
  CHECK(ltlg_scenario_parse("size 3 3\nformula F p1@nowhere\nrobot 1 0 0\n", &missing) == LTLG_VALIDATION);
}

TEST_CASE("compile writes its artifacts") {
  ltlg_scenario* s = load("two_regions");
  fs::path dir = fresh_dir("compile");
  ltlg_report* r = nullptr;
  REQUIRE(ltlg_compile(s, dir.c_str(), &r) == LTLG_OK);
  CHECK(ltlg_report_exit_code(r) == 0);
  std::string text = ltlg_report_text(r);
  CHECK(text.find("aux 2") != std::string::npos);
  CHECK(text.find("local cnf fragment: holds") != std::string::npos);
  for (const char* f : {"automaton.txt", "pruned.txt", "decomposition.txt", "graph.dot"}) CHECK(fs::exists(dir / f));
  CHECK(slurp(dir / "graph.dot").find("digraph") != std::string::npos);
  ltlg_report_free(r);
  ltlg_scenario_free(s);

  s = load("shared_guard");
  REQUIRE(ltlg_compile(s, nullptr, &r) == LTLG_OK);
  CHECK(ltlg_report_exit_code(r) == 2);
  CHECK(std::string(ltlg_report_text(r)).find("no decomposable accepting path") != std::string::npos);
  CHECK(std::string(ltlg_report_text(r)).find("local cnf fragment: violated") != std::string::npos);
  ltlg_report_free(r);
  ltlg_scenario_free(s);
}

TEST_CASE("run writes events, summary, snapshots and trajectory") {
  ltlg_scenario* s = load("walled_goal");
  ltlg_options opts;
  ltlg_options_init(&opts);
  opts.snapshot_every = 5;
  fs::path dir = fresh_dir("run");
  ltlg_report* r = nullptr;
  REQUIRE(ltlg_run(s, &opts, dir.c_str(), &r) == LTLG_OK);
  CHECK(ltlg_report_exit_code(r) == 0);
  std::string events = slurp(dir / "events.jsonl");
  CHECK(events.find("\"kind\":\"symbol_reselect\"") != std::string::npos);
  std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"t_f\"") != std::string::npos);
  CHECK(summary.find("\"p50\"") != std::string::npos);
  CHECK(fs::exists(dir / "map_0.pgm"));
  CHECK(fs::exists(dir / "map_5.pgm"));
  CHECK(slurp(dir / "map_0.pgm").rfind("P2", 0) == 0);
  CHECK(slurp(dir / "trajectory.csv").rfind("tick,robot,row,col\n0,1,10,10\n", 0) == 0);
  ltlg_report_free(r);

  // same seed, same log
  fs::path dir2 = fresh_dir("run2");
  REQUIRE(ltlg_run(s, &opts, dir2.c_str(), &r) == LTLG_OK);
  CHECK(slurp(dir2 / "events.jsonl") == events);
  ltlg_report_free(r);

  opts.max_steps = 3;
  REQUIRE(ltlg_run(s, &opts, nullptr, &r) == LTLG_OK);
  CHECK(ltlg_report_exit_code(r) == 3);
  ltlg_report_free(r);
  ltlg_scenario_free(s);
}

TEST_CASE("sensor range sweep") {
  ltlg_scenario* s = load("maze");
  double values[] = {1, 2, 4, 8};
  fs::path dir = fresh_dir("sweep");
  ltlg_report* r = nullptr;
  REQUIRE(ltlg_sweep_sensor_range(s, nullptr, values, 4, dir.c_str(), &r) == LTLG_OK);
  std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("sensor_range,outcome,t_f1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  ltlg_report_free(r);
  double bad[] = {0.5};
  CHECK(ltlg_sweep_sensor_range(s, nullptr, bad, 1, nullptr, &r) == LTLG_INVALID_ARGUMENT);
  ltlg_scenario_free(s);

  s = load("until_from_l1");
  double one[] = {2};
  REQUIRE(ltlg_sweep_sensor_range(s, nullptr, one, 1, nullptr, &r) == LTLG_OK);
  CHECK(std::string(ltlg_report_text(r)) == "sensor_range,outcome,t_f1\n2,infeasible,\n");
  ltlg_report_free(r);
  ltlg_scenario_free(s);
}

TEST_CASE("command line exit codes") {
  CHECK(cli("compile --scenario " + scenario_path("two_regions")) == 0);
  CHECK(cli("compile --scenario " + scenario_path("shared_guard")) == 2);
  CHECK(cli("run --scenario " + scenario_path("until_from_l1")) == 2);
  CHECK(cli("run --scenario " + scenario_path("until_from_l2")) == 0);
  CHECK(cli("run --scenario " + scenario_path("maze") + " --max-steps 4") == 3);
  CHECK(cli("run --scenario /nonexistent.scn") != 0);
  fs::path dir = fresh_dir("cli");
  CHECK(cli("sweep --scenario " + scenario_path("maze") + " --values 1,8 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
}

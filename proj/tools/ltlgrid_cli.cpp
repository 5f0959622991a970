#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ltlgrid/ltlgrid.h"

namespace {

struct Flags {
  std::string scenario;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::size_t accepting_target = 0;
  std::size_t max_steps = 0;
  std::size_t snapshot_every = 0;
  bool relaxed = false;
  bool occlusion = false;
  std::string values = "1,2,4,8";
};

int fail(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, ltlg_last_error());
  return 1;
}

int finish(ltlg_report* report) {
  std::fputs(ltlg_report_text(report), stdout);
  int code = ltlg_report_exit_code(report);
  ltlg_report_free(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot LTL mission planning on grid worlds"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", f.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "Output directory for artifacts");
  };
  std::vector<CLI::Option*> seed_opts;
  auto add_run = [&](CLI::App* sub) {
    seed_opts.push_back(sub->add_option("--seed", f.seed, "Override the scenario seed"));
    sub->add_option("--accepting-target", f.accepting_target, "Accepting traversals to reach")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", f.max_steps, "Step budget")->check(CLI::PositiveNumber);
    sub->add_flag("--relaxed-avoidance", f.relaxed, "Only avoid regions the current self-loop forbids");
    sub->add_flag("--occlusion", f.occlusion, "Obstacles occlude the sensor");
  };

  auto* compile = app.add_subcommand("compile", "Run the offline pipeline and dump its artifacts");
  add_common(compile);
  auto* run = app.add_subcommand("run", "Execute a mission");
  add_common(run);
  add_run(run);
  run->add_option("--snapshot-every", f.snapshot_every, "Write a map snapshot every k ticks");
  auto* sweep = app.add_subcommand("sweep", "Rerun a mission over several sensor ranges");
  add_common(sweep);
  add_run(sweep);
  sweep->add_option("--values", f.values, "Comma-separated sensor ranges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (auto* o : seed_opts) f.has_seed = f.has_seed || o->count() > 0;

  ltlg_scenario* scenario = nullptr;
  if (ltlg_scenario_load_file(f.scenario.c_str(), &scenario) != LTLG_OK) return fail("loading scenario");

  ltlg_options opts;
  ltlg_options_init(&opts);
  opts.has_seed = f.has_seed;
  opts.seed = f.seed;
  opts.accepting_target = f.accepting_target;
  opts.max_steps = f.max_steps;
  opts.snapshot_every = f.snapshot_every;
  opts.relaxed_avoidance = f.relaxed;
  opts.occlusion = f.occlusion;
  const char* out_dir = f.out.empty() ? nullptr : f.out.c_str();

  ltlg_report* report = nullptr;
  ltlg_status st;
  if (*compile) {
    st = ltlg_compile(scenario, out_dir, &report);
  } else if (*run) {
    st = ltlg_run(scenario, &opts, out_dir, &report);
  } else {
    std::vector<double> values;
    std::stringstream ss(f.values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: bad --values entry '%s'\n", item.c_str());
        ltlg_scenario_free(scenario);
        return 1;
      }
    }
    st = ltlg_sweep_sensor_range(scenario, &opts, values.data(), values.size(), out_dir, &report);
  }
  ltlg_scenario_free(scenario);
  if (st != LTLG_OK) return fail(app.get_subcommands().front()->get_name().c_str());
  return finish(report);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltlgrid/buchi.hpp"
#include "ltlgrid/gridworld.hpp"
#include "ltlgrid/ltl.hpp"
#include "ltlgrid/symbols.hpp"

namespace ltlgrid {

enum class SymbolPolicy { minimal, random };

struct RobotSpec {
  int index = 1;
  Cell start;
  double speed = 1.0;  // cells per tick, in (0, 1]
  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

struct Scenario {
  std::string name;
  int width = 10;
  int height = 10;
  std::set<Cell> obstacles;
  std::map<std::string, std::set<Cell>> regions;
  RegionRelation relation;
  std::vector<RobotSpec> robots;
  double sensor_range = 1.0;
  std::vector<std::pair<std::string, std::string>> definitions;  // name -> subformula text
  std::string formula;
  std::string automaton;  // optional automaton text used instead of translating the formula
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
  std::size_t accepting_target = 2;
  SymbolPolicy policy = SymbolPolicy::minimal;
  bool occlusion = false;
  bool relaxed_avoidance = false;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string save_scenario(const Scenario& s);

void validate_scenario(const Scenario& s);
std::string expanded_formula(const Scenario& s);
Formula scenario_formula(const Scenario& s);
Nba scenario_automaton(const Scenario& s);  // imported automaton or translation of the formula
TrueEnvironment make_environment(const Scenario& s);
std::vector<RobotPose> initial_poses(const Scenario& s);
Symbol initial_symbol(const Scenario& s);

}  // namespace ltlgrid

#include <doctest.h>

#include <filesystem>
#include <random>

#include "ltlgrid/error.hpp"
#include "ltlgrid/scenario.hpp"

using namespace ltlgrid;

namespace {

const char* kSmall = R"(name small
size 6 4
sensor_range 1.5
seed 9
legend a l1
legend b l2
overlap l1 l2
define visit F p1@l1
formula visit & G !p2@obs
robot 2 3 5 speed 0.5
robot 1 0 0
grid
......
.aab..
..#b..
......
end
)";

ErrorCode code_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invariant;
}

Scenario random_scenario(std::mt19937_64& rng) {
  Scenario s;
  std::uniform_int_distribution<int> dim(2, 12);
  s.width = dim(rng);
  s.height = dim(rng);
  s.name = "rand" + std::to_string(rng() % 1000);
  s.sensor_range = 1.0 + static_cast<double>(rng() % 40) / 8.0;
  s.seed = rng();
  s.max_steps = 1 + rng() % 5000;
  s.accepting_target = 1 + rng() % 3;
  s.policy = rng() % 2 ? SymbolPolicy::random : SymbolPolicy::minimal;
  s.occlusion = rng() % 2;
  s.relaxed_avoidance = rng() % 2;
  std::vector<Cell> cells;
  for (int r = 0; r < s.height; ++r)
    for (int c = 0; c < s.width; ++c) cells.push_back({r, c});
  std::shuffle(cells.begin(), cells.end(), rng);
  std::size_t k = 0;
  int robots = 1 + static_cast<int>(rng() % 3);
  for (int j = 1; j <= robots; ++j) s.robots.push_back({j, cells[k++], (1 + rng() % 4) / 4.0});
  int regions = 1 + static_cast<int>(rng() % 3);
  for (int i = 1; i <= regions && k < cells.size(); ++i) s.regions["l" + std::to_string(i)].insert(cells[k++]);
  while (k < cells.size() && rng() % 3) s.obstacles.insert(cells[k++]);
  s.formula = "F p1@l1";
  if (rng() % 2) {
    s.definitions.push_back({"goal", "p1@l1"});
    s.formula = "G F goal";
  }
  return s;
}

}  // namespace

TEST_CASE("parse a small scenario") {
  Scenario s = parse_scenario(kSmall);
  CHECK(s.name == "small");
  CHECK(s.width == 6);
  CHECK(s.height == 4);
  CHECK(s.sensor_range == doctest::Approx(1.5));
  REQUIRE(s.robots.size() == 2);
  CHECK(s.robots[0].index == 1);
  CHECK(s.robots[1].speed == doctest::Approx(0.5));
  CHECK(s.obstacles == std::set<Cell>{{2, 2}});
  CHECK(s.regions.at("l1") == std::set<Cell>{{1, 1}, {1, 2}});
  CHECK(s.regions.at("l2") == std::set<Cell>{{1, 3}, {2, 3}});
  CHECK_FALSE(s.relation.disjoint("l1", "l2"));
  CHECK(expanded_formula(s).find("visit") == std::string::npos);
  CHECK(initial_symbol(s).to_string() == "{}");
}

TEST_CASE("round trip of the shipped scenarios") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SCENARIO_DIR)) {
    if (entry.path().extension() != ".scn") continue;
    ++seen;
    CAPTURE(entry.path().string());
    Scenario s = load_scenario(entry.path().string());
    Scenario back = parse_scenario(save_scenario(s));
    CHECK(back == s);
    CHECK(save_scenario(back) == save_scenario(s));
  }
  CHECK(seen >= 6);
}

TEST_CASE("round trip of random scenarios") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Scenario s = random_scenario(rng);
    validate_scenario(s);
    Scenario back = parse_scenario(save_scenario(s));
    REQUIRE(back == s);
  }
}

TEST_CASE("validation errors") {
  const std::string head = "size 4 4\nlegend a l1\n";
  CHECK(code_of("size 4 4\nformula F p1@l1\nrobot 1 0 0\n") == ErrorCode::validation);  // undeclared region
  CHECK(code_of(head + "formula F p2@l1\nrobot 1 0 0\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F p1@l1\nrobot 1 9 0\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F p1@l1\nrobot 1 0 0\nobstacle 0,0\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F p1@l1\nrobot 2 0 0\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F p1@l1\nrobot 1 0 0 speed 1.5\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "sensor_range 0.5\nformula F p1@l1\nrobot 1 0 0\nregion l1 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F p1@l1\nrobot 1 0 0\nregion l1 1,1\nregion l2 1,1\n") == ErrorCode::validation);
  CHECK(code_of(head + "formula F (p1@l1\nrobot 1 0 0\nregion l1 1,1\n") == ErrorCode::syntax);
  CHECK(code_of(head + "formula F p1@l1\nrobot 1 0 0\ngrid\n....\n....\nend\n") == ErrorCode::syntax);
  CHECK(code_of(head + "bogus 1\n") == ErrorCode::syntax);
  CHECK(code_of("formula F p1@l1\nrobot 1 0 0\n") == ErrorCode::validation);
  CHECK(code_of(head + "define a b\ndefine b a\nformula F a\nrobot 1 0 0\nregion l1 1,1\n") == ErrorCode::validation);
}

TEST_CASE("overlapping regions are accepted only when declared") {
  std::string base = "size 4 4\nformula F p1@l1\nrobot 1 0 0\nregion l1 1,1 1,2\nregion l2 1,2\n";
  CHECK(code_of(base) == ErrorCode::validation);
  Scenario s = parse_scenario(base + "overlap l1 l2\n");
  CHECK(make_environment(s).layout().regions_at({1, 2}).size() == 2);
}

TEST_CASE("embedded automaton replaces translation") {
  std::string text =
      "size 3 1\nregion l1 0,2\nrobot 1 0 0\nautomaton\nstates 1\ninitial 0\naccepting 0\ntrans 0 0 !p1@l1\nend\n";
  Scenario s = parse_scenario(text);
  Nba a = scenario_automaton(s);
  CHECK(a.num_states() == 1);
  CHECK(a.transitions().size() == 1);
}

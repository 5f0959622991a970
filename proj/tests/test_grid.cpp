#include <chrono>
#include <deque>
#include <random>

#include "doctest.h"
#include "ltlgrid/error.hpp"
#include "ltlgrid/gridworld.hpp"
#include "ltlgrid/localplan.hpp"

using namespace ltlgrid;

namespace {

RegionLayout small_layout() {
  return RegionLayout(10, 10, {{"l1", {{1, 1}, {1, 2}}}, {"l2", {{8, 8}}}, {"l3", {{5, 5}}}});
}

OccupancyMap fully_known(const TrueEnvironment& env) {
  OccupancyMap m(env.layout().width(), env.layout().height());
  std::vector<Observation> all;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) all.push_back({{r, c}, env.occupied({r, c})});
  m.apply(all);
  return m;
}

// Plain BFS hop count with the same move rules, written independently.
int bfs_hops(const OccupancyMap& m, const RegionLayout& lay, Cell start, const std::vector<char>& goal,
             const std::vector<char>& forbidden) {
  auto ok = [&](int r, int c) {
    if (r < 0 || c < 0 || r >= lay.height() || c >= lay.width()) return false;
    std::size_t i = static_cast<std::size_t>(r) * lay.width() + c;
    if (m.at({r, c}) == CellState::occupied) return false;
    return goal[i] || !forbidden[i];
  };
  std::vector<int> d(lay.num_cells(), -1);
  std::deque<Cell> q{start};
  d[lay.index(start)] = 0;
  while (!q.empty()) {
    Cell c = q.front();
    q.pop_front();
    if (goal[lay.index(c)] && m.at(c) != CellState::occupied) return d[lay.index(c)];
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        int r = c.row + dr, cc = c.col + dc;
        if (!ok(r, cc)) continue;
        if (dr && dc && !(ok(c.row + dr, c.col) && ok(c.row, c.col + dc))) continue;
        std::size_t i = static_cast<std::size_t>(r) * lay.width() + cc;
        if (d[i] >= 0) continue;
        d[i] = d[lay.index(c)] + 1;
        q.push_back({r, cc});
      }
  }
  return -1;
}

}  // namespace

TEST_CASE("sense disk shapes") {
  TrueEnvironment env(small_layout(), {});
  CHECK(sense(env, {5, 5}, 1.0).size() == 5);
  CHECK(sense(env, {5, 5}, 1.5).size() == 9);
  CHECK(sense(env, {0, 0}, 1.0).size() == 3);
  CHECK(sense(env, {5, 5}, 2.0).size() == 13);
}

TEST_CASE("occlusion hides cells behind walls") {
  TrueEnvironment env(small_layout(), {{5, 6}});
  auto open = sense(env, {5, 5}, 3.0);
  auto blocked = sense(env, {5, 5}, 3.0, {true});
  auto has = [](const std::vector<Observation>& v, Cell c) {
    return std::any_of(v.begin(), v.end(), [&](const Observation& o) { return o.cell == c; });
  };
  CHECK(has(open, {5, 8}));
  CHECK_FALSE(has(blocked, {5, 8}));
  CHECK(has(blocked, {5, 6}));
}

TEST_CASE("map updates are monotone and reject contradictions") {
  OccupancyMap m(4, 4);
  CHECK(m.unknown_count() == 16);
  std::vector<Observation> obs{{{0, 0}, false}, {{0, 1}, true}};
  CHECK(m.apply(obs) == 2);
  CHECK(m.revision() == 1);
  CHECK(m.apply(obs) == 0);
  CHECK(m.revision() == 1);
  CHECK(m.at({0, 1}) == CellState::occupied);
  std::vector<Observation> bad{{{0, 1}, false}};
  CHECK_THROWS_AS(m.apply(bad), Error);
  auto m2 = update_map(m, std::vector<Observation>{{{3, 3}, false}});
  CHECK(m2.unknown_count() == 13);
  CHECK(m.unknown_count() == 14);
}

TEST_CASE("labels") {
  TrueEnvironment env(small_layout(), {{4, 4}});
  std::vector<RobotPose> poses{{1, {1, 1}}, {2, {0, 0}}, {3, {4, 4}}};
  CHECK(label(poses, env) == Symbol{{1, "l1"}, {3, "obs"}});
}

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(RegionLayout(3, 3, {{"a", {{0, 0}}}, {"b", {{0, 0}}}}), Error);
  RegionRelation rel;
  rel.declare_overlap("a", "b");
  CHECK_NOTHROW(RegionLayout(3, 3, {{"a", {{0, 0}}}, {"b", {{0, 0}}}}, rel));
  CHECK_THROWS_AS(RegionLayout(3, 3, {{"a", {{5, 0}}}}), Error);
  CHECK_THROWS_AS(RegionLayout(3, 3, {{"obs", {{0, 0}}}}), Error);
}

TEST_CASE("export formats") {
  OccupancyMap m(2, 1);
  m.apply(std::vector<Observation>{{{0, 0}, true}});
  CHECK(export_pgm(m) == "P2\n2 1\n255\n0 128\n");
  CHECK(export_csv(m) == "row,col,state\n0,0,occupied\n0,1,unknown\n");
}

TEST_CASE("plans avoid forbidden regions and corners") {
  TrueEnvironment env(small_layout(), {});
  OccupancyMap m = fully_known(env);
  ReachabilityTask t{1, {0, 0}, Target{{"l2"}}, {"l3", "l1"}};
  auto p = plan_reach(t, m, env.layout());
  REQUIRE(p);
  CHECK(p->size() == 11);  // the corner rule forces a detour around l1
  for (Cell c : *p) CHECK_FALSE(c == Cell{5, 5});

  // corner cutting between two walls
  TrueEnvironment wall(RegionLayout(3, 3, {{"g", {{0, 2}}}}), {{0, 1}, {1, 2}});
  OccupancyMap wm = fully_known(wall);
  auto q = plan_reach({1, {1, 1}, Target{{"g"}}, {}}, wm, wall.layout());
  CHECK_FALSE(q);
  CHECK_FALSE(region_reachable(wm, wall.layout(), {1, 1}, Target{{"g"}}, {}));
}

TEST_CASE("unknown cells are optimistic; known first step option") {
  TrueEnvironment env(small_layout(), {});
  OccupancyMap m(10, 10);
  auto p = plan_reach({1, {0, 0}, Target{{"l2"}}, {}}, m, env.layout());
  REQUIRE(p);
  CHECK(p->size() == 9);
  ReachabilityTask strict{1, {0, 0}, Target{{"l2"}}, {}, true};
  CHECK_FALSE(plan_reach(strict, m, env.layout()));
  m.apply(sense(env, {0, 0}, 1.0));
  auto s = plan_reach(strict, m, env.layout());
  REQUIRE(s);
  CHECK(m.at((*s)[1]) == CellState::free);
}

TEST_CASE("free space and unknown targets") {
  TrueEnvironment env(small_layout(), {});
  OccupancyMap m = fully_known(env);
  auto p = plan_reach({1, {1, 1}, Target{}, {}}, m, env.layout());
  REQUIRE(p);
  CHECK(p->size() == 2);
  CHECK_FALSE(env.layout().in_any_region(p->back()));
  CHECK_FALSE(plan_reach({1, {0, 0}, Target{{"obs"}}, {}}, m, env.layout()));
  CHECK_FALSE(plan_reach({1, {0, 0}, Target{{"nowhere"}}, {}}, m, env.layout()));
  auto here = plan_reach({1, {8, 8}, Target{{"l2"}}, {}}, m, env.layout());
  REQUIRE(here);
  CHECK(here->size() == 1);
}

TEST_CASE("path blocked") {
  OccupancyMap m(5, 1);
  Path p{{0, 0}, {0, 1}, {0, 2}, {0, 3}};
  CHECK_FALSE(path_blocked(p, m));
  m.apply(std::vector<Observation>{{{0, 2}, true}});
  CHECK(path_blocked(p, m) == 2);
  CHECK_FALSE(path_blocked(p, m, 3));
}

TEST_CASE("planner hop counts match bfs on random maps") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int w = 5 + static_cast<int>(rng() % 20), h = 5 + static_cast<int>(rng() % 20);
    std::map<std::string, std::vector<Cell>> regions;
    for (int k = 0; k < 3; ++k) {
      std::vector<Cell> cells;
      int r = static_cast<int>(rng() % h), c = static_cast<int>(rng() % w);
      cells.push_back({r, c});
      if (c + 1 < w) cells.push_back({r, c + 1});
      regions["r" + std::to_string(k)] = cells;
    }
    RegionRelation rel;
    rel.declare_overlap("r0", "r1");
    rel.declare_overlap("r0", "r2");
    rel.declare_overlap("r1", "r2");
    RegionLayout lay(w, h, regions, rel);
    OccupancyMap m(w, h);
    std::vector<Observation> obs;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        auto roll = rng() % 10;
        if (roll < 5) obs.push_back({{r, c}, roll < 2});
      }
    m.apply(obs);
    Cell start{static_cast<int>(rng() % h), static_cast<int>(rng() % w)};
    Target goal = rng() % 4 == 0 ? Target{} : Target{{"r0"}};
    std::vector<std::string> forbidden = {"r1"};
    if (rng() % 2) forbidden.push_back("r2");
    auto goal_cells = target_cells(lay, goal);
    std::vector<char> forb(lay.num_cells(), 0);
    for (const auto& f : forbidden)
      for (Cell c : lay.cells_of(lay.region_id(f))) forb[lay.index(c)] = 1;
    int expect = bfs_hops(m, lay, start, goal_cells, forb);
    auto p = plan_reach({1, start, goal, forbidden}, m, lay);
    CHECK(region_reachable(m, lay, start, goal, forbidden) == (expect >= 0));
    if (expect < 0) {
      CHECK_FALSE(p);
      continue;
    }
    REQUIRE(p);
    CHECK(static_cast<int>(p->size()) - 1 == expect);
    CHECK(goal_cells[lay.index(p->back())]);
    for (std::size_t i = 1; i < p->size(); ++i) {
      Cell a = (*p)[i - 1], b = (*p)[i];
      CHECK(std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)) == 1);
      CHECK(m.at(b) != CellState::occupied);
      CHECK((goal_cells[lay.index(b)] || !forb[lay.index(b)]));
    }
  }
}

TEST_CASE("planner is deterministic and fast on a large grid") {
  std::mt19937_64 rng(5);
  std::vector<Cell> occ;
  for (int r = 0; r < 100; ++r)
    for (int c = 0; c < 100; ++c)
      if (rng() % 5 == 0 && !(r < 2 && c < 2) && !(r > 97 && c > 97)) occ.push_back({r, c});
  TrueEnvironment env(RegionLayout(100, 100, {{"g", {{99, 99}}}}), occ);
  OccupancyMap m = fully_known(env);
  auto a = plan_reach({1, {0, 0}, Target{{"g"}}, {}}, m, env.layout());
  auto b = plan_reach({1, {0, 0}, Target{{"g"}}, {}}, m, env.layout());
  CHECK(a == b);
}

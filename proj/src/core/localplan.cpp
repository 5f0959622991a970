#include "ltlgrid/localplan.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <queue>
#include <tuple>

namespace ltlgrid {

namespace {

constexpr int kMoves[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

struct Grid {
  const OccupancyMap& map;
  const RegionLayout& layout;
  std::vector<char> goal;
  std::vector<char> blocked;  // known occupied or forbidden, goal cells excepted

  Grid(const OccupancyMap& m, const RegionLayout& l, const Target& target, const std::vector<std::string>& forbidden)
      : map(m), layout(l), goal(target_cells(l, target)), blocked(l.num_cells(), 0) {
    for (const auto& name : forbidden) {
      int id = l.region_id(name);
      if (id < 0) continue;
      for (Cell c : l.cells_of(id)) blocked[l.index(c)] = 1;
    }
    for (std::size_t i = 0; i < blocked.size(); ++i) {
      if (goal[i]) blocked[i] = 0;
      if (m.at(l.cell(i)) == CellState::occupied) {
        blocked[i] = 1;
        goal[i] = 0;
      }
    }
  }

  bool open(Cell c) const { return layout.in_bounds(c) && !blocked[layout.index(c)]; }

  bool can_step(Cell from, int dr, int dc) const {
    Cell to{from.row + dr, from.col + dc};
    if (!open(to)) return false;
    if (dr != 0 && dc != 0) return open({from.row + dr, from.col}) && open({from.row, from.col + dc});
    return true;
  }
};

}  // namespace

std::vector<char> target_cells(const RegionLayout& layout, const Target& goal) {
  std::vector<char> out(layout.num_cells(), 0);
  if (goal.free_space()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = !layout.in_any_region(layout.cell(i));
    return out;
  }
  std::vector<int> ids;
  for (const auto& name : goal.regions) {
    int id = layout.region_id(name);
    if (id < 0) return out;  // includes the obstacle label: never a reach target
    ids.push_back(id);
  }
  for (Cell c : layout.cells_of(ids.front())) {
    const auto& here = layout.regions_at(c);
    bool all = std::all_of(ids.begin(), ids.end(),
                           [&](int id) { return std::find(here.begin(), here.end(), id) != here.end(); });
    if (all) out[layout.index(c)] = 1;
  }
  return out;
}

bool satisfies_target(const RegionLayout& layout, Cell c, const Target& goal) {
  const auto& here = layout.regions_at(c);
  if (goal.free_space()) return here.empty();
  for (const auto& name : goal.regions) {
    int id = layout.region_id(name);
    if (id < 0 || std::find(here.begin(), here.end(), id) == here.end()) return false;
  }
  return true;
}

std::optional<Path> plan_reach(const ReachabilityTask& task, const OccupancyMap& map, const RegionLayout& layout) {
  Grid grid(map, layout, task.goal, task.forbidden_regions);
  if (!layout.in_bounds(task.start)) return std::nullopt;
  const std::size_t start = layout.index(task.start);
  if (grid.goal[start]) return Path{task.start};

  // admissible bound: Chebyshev distance to the goal bounding box
  int r0 = layout.height(), r1 = -1, c0 = layout.width(), c1 = -1;
  bool any_goal = false;
  for (std::size_t i = 0; i < grid.goal.size(); ++i)
    if (grid.goal[i]) {
      any_goal = true;
      Cell c = layout.cell(i);
      r0 = std::min(r0, c.row), r1 = std::max(r1, c.row);
      c0 = std::min(c0, c.col), c1 = std::max(c1, c.col);
    }
  if (!any_goal) return std::nullopt;
  const bool use_box = !task.goal.free_space();
  auto h = [&](Cell c) {
    if (!use_box) return 0;
    int dr = c.row < r0 ? r0 - c.row : (c.row > r1 ? c.row - r1 : 0);
    int dc = c.col < c0 ? c0 - c.col : (c.col > c1 ? c.col - c1 : 0);
    return std::max(dr, dc);
  };

  const std::size_t n = layout.num_cells();
  std::vector<int> g(n, -1);
  std::vector<std::size_t> parent(n, n);
  std::vector<char> closed(n, 0);
  using Entry = std::tuple<int, int, std::uint64_t, std::size_t>;  // f, h, sequence, cell
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::uint64_t seq = 0;
  g[start] = 0;
  open.emplace(h(task.start), h(task.start), seq++, start);
  while (!open.empty()) {
    auto [f, hv, s, idx] = open.top();
    open.pop();
    if (closed[idx]) continue;
    closed[idx] = 1;
    if (grid.goal[idx]) {
      Path path;
      for (std::size_t v = idx; v != n; v = parent[v]) path.push_back(layout.cell(v));
      std::reverse(path.begin(), path.end());
      return path;
    }
    Cell cur = layout.cell(idx);
    for (const auto& m : kMoves) {
      if (!grid.can_step(cur, m[0], m[1])) continue;
      Cell nb{cur.row + m[0], cur.col + m[1]};
      if (idx == start && task.require_known_first_step && map.at(nb) != CellState::free) continue;
      std::size_t ni = layout.index(nb);
      if (closed[ni]) continue;
      int ng = g[idx] + 1;
      if (g[ni] >= 0 && g[ni] <= ng) continue;
      g[ni] = ng;
      parent[ni] = idx;
      int hn = h(nb);
      open.emplace(ng + hn, hn, seq++, ni);
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> path_blocked(std::span<const Cell> path, const OccupancyMap& map, std::size_t from) {
  for (std::size_t i = from; i < path.size(); ++i)
    if (map.at(path[i]) == CellState::occupied) return i;
  return std::nullopt;
}

bool region_reachable(const OccupancyMap& map, const RegionLayout& layout, Cell start, const Target& goal,
                      const std::vector<std::string>& forbidden) {
  Grid grid(map, layout, goal, forbidden);
  if (!layout.in_bounds(start)) return false;
  std::vector<char> seen(layout.num_cells(), 0);
  std::deque<Cell> queue{start};
  seen[layout.index(start)] = 1;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    if (grid.goal[layout.index(c)]) return true;
    for (const auto& m : kMoves) {
      if (!grid.can_step(c, m[0], m[1])) continue;
      Cell nb{c.row + m[0], c.col + m[1]};
      if (seen[layout.index(nb)]) continue;
      seen[layout.index(nb)] = 1;
      queue.push_back(nb);
    }
  }
  return false;
}

}  // namespace ltlgrid

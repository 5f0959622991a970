#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltlgrid/gridworld.hpp"
#include "ltlgrid/symbols.hpp"

namespace ltlgrid {

struct ReachabilityTask {
  int robot = 1;
  Cell start;
  Target goal;
  std::vector<std::string> forbidden_regions;
  // the first move must enter a cell already known to be free
  bool require_known_first_step = false;
};

using Path = std::vector<Cell>;  // includes the start cell

// Shortest 8-connected path over cells not known to be occupied, avoiding the
// forbidden regions except where they coincide with the goal. Diagonal moves
// may not cut a corner. nullopt when the goal cannot be reached.
std::optional<Path> plan_reach(const ReachabilityTask& task, const OccupancyMap& map, const RegionLayout& layout);

std::optional<std::size_t> path_blocked(std::span<const Cell> path, const OccupancyMap& map, std::size_t from = 0);

bool region_reachable(const OccupancyMap& map, const RegionLayout& layout, Cell start, const Target& goal,
                      const std::vector<std::string>& forbidden);

// cells that satisfy the target, ignoring the map
std::vector<char> target_cells(const RegionLayout& layout, const Target& goal);
bool satisfies_target(const RegionLayout& layout, Cell c, const Target& goal);

}  // namespace ltlgrid

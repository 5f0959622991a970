#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltlgrid/decompose.hpp"

namespace ltlgrid {

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

struct DistanceGraph {
  std::set<StateId> nodes;
  std::set<StatePair> edges;
  std::set<StatePair> accepting_edges;
  std::set<StateId> v_f;  // sources of accepting edges
  std::map<StateId, std::size_t> dist_to_vf;

  std::vector<StateId> successors(StateId q) const;
  bool has_edge(StateId a, StateId b) const { return edges.contains({a, b}); }
  bool is_accepting_edge(StateId a, StateId b) const { return accepting_edges.contains({a, b}); }
};

DistanceGraph build_graph(const Decomposition& d);
std::size_t distance(const DistanceGraph& g, StateId from, StateId to);
std::size_t distance_to_vf(const DistanceGraph& g, StateId q);
DistanceGraph remove_edge(const DistanceGraph& g, StateId from, StateId to);

std::string to_dot(const DistanceGraph& g, const Nba& names);
std::string distance_table(const DistanceGraph& g, const Nba& names);

}  // namespace ltlgrid

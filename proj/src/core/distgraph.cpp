#include "ltlgrid/distgraph.hpp"

#include <deque>
#include <sstream>

#include "ltlgrid/error.hpp"

namespace ltlgrid {

namespace {

void recompute(DistanceGraph& g) {
  g.v_f.clear();
  for (const auto& [a, b] : g.accepting_edges) g.v_f.insert(a);
  g.dist_to_vf.clear();
  for (StateId q : g.nodes) g.dist_to_vf[q] = kInfinite;
  std::map<StateId, std::vector<StateId>> reverse;
  for (const auto& [a, b] : g.edges) reverse[b].push_back(a);
  std::deque<StateId> queue;
  for (StateId q : g.v_f) {
    g.dist_to_vf[q] = 0;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : reverse[q])
      if (g.dist_to_vf[p] == kInfinite) {
        g.dist_to_vf[p] = g.dist_to_vf[q] + 1;
        queue.push_back(p);
      }
  }
}

std::string dist_text(std::size_t d) { return d == kInfinite ? "inf" : std::to_string(d); }

}  // namespace

std::vector<StateId> DistanceGraph::successors(StateId q) const {
  std::vector<StateId> out;
  for (auto it = edges.lower_bound({q, 0}); it != edges.end() && it->first == q; ++it) out.push_back(it->second);
  return out;
}

DistanceGraph build_graph(const Decomposition& d) {
  DistanceGraph g;
  g.nodes = d.d_set;
  for (const auto& [q, nexts] : d.q_next)
    for (StateId r : nexts) g.edges.insert({q, r});
  for (const auto& [key, runs] : d.witnesses)
    for (const auto& w : runs)
      if (w.run.touches_accepting) g.accepting_edges.insert(key);
  recompute(g);
  return g;
}

std::size_t distance(const DistanceGraph& g, StateId from, StateId to) {
  if (!g.nodes.contains(from) || !g.nodes.contains(to)) return kInfinite;
  if (from == to) return 0;
  std::map<StateId, std::size_t> dist{{from, 0}};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId r : g.successors(q)) {
      if (dist.contains(r)) continue;
      dist[r] = dist[q] + 1;
      if (r == to) return dist[r];
      queue.push_back(r);
    }
  }
  return kInfinite;
}

std::size_t distance_to_vf(const DistanceGraph& g, StateId q) {
  auto it = g.dist_to_vf.find(q);
  return it == g.dist_to_vf.end() ? kInfinite : it->second;
}

DistanceGraph remove_edge(const DistanceGraph& g, StateId from, StateId to) {
  if (!g.edges.contains({from, to}))
    throw Error(ErrorCode::missing_edge, "no edge " + std::to_string(from) + "->" + std::to_string(to));
  DistanceGraph out = g;
  out.edges.erase({from, to});
  out.accepting_edges.erase({from, to});
  recompute(out);
  return out;
}

std::string to_dot(const DistanceGraph& g, const Nba& names) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (StateId q : g.nodes) {
    out << "  n" << q << " [label=\"" << names.state_name(q) << "\\nd=" << dist_text(distance_to_vf(g, q)) << "\"";
    if (g.v_f.contains(q)) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& [a, b] : g.edges) {
    out << "  n" << a << " -> n" << b;
    if (g.accepting_edges.contains({a, b})) out << " [style=dashed, color=red]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string distance_table(const DistanceGraph& g, const Nba& names) {
  std::ostringstream out;
  out << "state d_F\n";
  for (StateId q : g.nodes) out << names.state_name(q) << " " << dist_text(distance_to_vf(g, q)) << "\n";
  return out.str();
}

}  // namespace ltlgrid

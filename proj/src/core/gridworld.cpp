#include "ltlgrid/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ltlgrid/error.hpp"

namespace ltlgrid {

RegionLayout::RegionLayout(int width, int height, std::map<std::string, std::vector<Cell>> regions,
                           RegionRelation relation)
    : width_(width), height_(height), relation_(std::move(relation)) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::validation, "grid dimensions must be positive");
  at_.assign(num_cells(), {});
  for (auto& [label, cells] : regions) {
    if (label == kObstacleRegion) throw Error(ErrorCode::validation, "region label 'obs' is reserved");
    if (cells.empty()) throw Error(ErrorCode::validation, "region '" + label + "' has no cells");
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    for (Cell c : cells) {
      if (!in_bounds(c))
        throw Error(ErrorCode::validation, "region '" + label + "' has a cell outside the grid");
      for (int other : at_[index(c)])
        if (relation_.disjoint(labels_[other], label))
          throw Error(ErrorCode::validation,
                      "regions '" + labels_[other] + "' and '" + label + "' share a cell but are not declared overlapping");
      at_[index(c)].push_back(id);
    }
    cells_.push_back(std::move(cells));
  }
}

int RegionLayout::region_id(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

TrueEnvironment::TrueEnvironment(RegionLayout layout, const std::vector<Cell>& occupied)
    : layout_(std::move(layout)), occupied_(layout_.num_cells(), 0) {
  for (Cell c : occupied) {
    if (!layout_.in_bounds(c)) throw Error(ErrorCode::validation, "obstacle outside the grid");
    occupied_[layout_.index(c)] = 1;
  }
}

OccupancyMap::OccupancyMap(int width, int height)
    : width_(width), height_(height), cells_(static_cast<std::size_t>(width) * height, CellState::unknown),
      unknown_(cells_.size()) {}

std::size_t OccupancyMap::apply(std::span<const Observation> observations) {
  std::size_t resolved = 0;
  for (const auto& o : observations) {
    if (!in_bounds(o.cell)) throw Error(ErrorCode::invalid_argument, "observation outside the map");
    CellState want = o.occupied ? CellState::occupied : CellState::free;
    CellState& cur = cells_[static_cast<std::size_t>(o.cell.row) * width_ + o.cell.col];
    if (cur == CellState::unknown) {
      cur = want;
      ++resolved;
      --unknown_;
    } else if (cur != want) {
      throw Error(ErrorCode::integrity, "observation contradicts the map at (" + std::to_string(o.cell.row) + "," +
                                            std::to_string(o.cell.col) + ")");
    }
  }
  if (resolved) ++revision_;
  return resolved;
}

OccupancyMap update_map(OccupancyMap m, std::span<const Observation> observations) {
  m.apply(observations);
  return m;
}

namespace {

// cells strictly between a and b on a Bresenham line
bool line_clear(const TrueEnvironment& env, Cell a, Cell b) {
  int dr = std::abs(b.row - a.row), dc = std::abs(b.col - a.col);
  int sr = a.row < b.row ? 1 : -1, sc = a.col < b.col ? 1 : -1;
  int err = dc - dr;
  Cell c = a;
  while (true) {
    if (c == b) return true;
    if (!(c == a) && env.occupied(c)) return false;
    int e2 = 2 * err;
    if (e2 > -dr) {
      err -= dr;
      c.col += sc;
    }
    if (e2 < dc) {
      err += dc;
      c.row += sr;
    }
  }
}

}  // namespace

std::vector<Observation> sense(const TrueEnvironment& env, Cell pose, double range, const SenseOptions& options) {
  const auto& lay = env.layout();
  if (!lay.in_bounds(pose)) throw Error(ErrorCode::invalid_argument, "pose outside the grid");
  std::vector<Observation> out;
  int r = static_cast<int>(std::floor(range));
  double r2 = range * range + 1e-9;
  for (int dr = -r; dr <= r; ++dr)
    for (int dc = -r; dc <= r; ++dc) {
      if (dr * dr + dc * dc > r2) continue;
      Cell c{pose.row + dr, pose.col + dc};
      if (!lay.in_bounds(c)) continue;
      if (options.occlusion && !line_clear(env, pose, c)) continue;
      out.push_back({c, env.occupied(c)});
    }
  return out;
}

Symbol robot_label(int robot, Cell c, const TrueEnvironment& env) {
  std::vector<AtomicPredicate> aps;
  for (int id : env.layout().regions_at(c)) aps.push_back({robot, env.layout().labels()[id]});
  if (env.occupied(c)) aps.push_back({robot, std::string(kObstacleRegion)});
  return Symbol(std::move(aps));
}

Symbol label(std::span<const RobotPose> poses, const TrueEnvironment& env) {
  std::vector<AtomicPredicate> aps;
  for (const auto& p : poses) {
    auto s = robot_label(p.robot, p.cell, env);
    aps.insert(aps.end(), s.aps().begin(), s.aps().end());
  }
  return Symbol(std::move(aps));
}

std::string export_pgm(const OccupancyMap& m) {
  std::ostringstream out;
  out << "P2\n" << m.width() << " " << m.height() << "\n255\n";
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) {
      CellState s = m.at({r, c});
      int v = s == CellState::occupied ? 0 : (s == CellState::unknown ? 128 : 255);
      out << (c ? " " : "") << v;
    }
    out << "\n";
  }
  return out.str();
}

std::string export_csv(const OccupancyMap& m) {
  std::ostringstream out;
  out << "row,col,state\n";
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) {
      CellState s = m.at({r, c});
      out << r << "," << c << "," << (s == CellState::occupied ? "occupied" : s == CellState::free ? "free" : "unknown")
          << "\n";
    }
  return out.str();
}

}  // namespace ltlgrid

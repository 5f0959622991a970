#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ltlgrid/symbols.hpp"

namespace ltlgrid {

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Region geometry, known in advance. Regions may share cells only when declared
// overlapping.
class RegionLayout {
 public:
  RegionLayout() = default;
  RegionLayout(int width, int height, std::map<std::string, std::vector<Cell>> regions, RegionRelation relation = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width_ + c.col; }
  Cell cell(std::size_t i) const { return {static_cast<int>(i / width_), static_cast<int>(i % width_)}; }
  std::size_t num_cells() const { return static_cast<std::size_t>(width_) * height_; }

  const std::vector<std::string>& labels() const { return labels_; }
  int region_id(const std::string& label) const;  // -1 when unknown
  const std::vector<Cell>& cells_of(int id) const { return cells_[id]; }
  const std::vector<int>& regions_at(Cell c) const { return at_[index(c)]; }
  bool in_any_region(Cell c) const { return !at_[index(c)].empty(); }
  const RegionRelation& relation() const { return relation_; }

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<Cell>> cells_;
  std::vector<std::vector<int>> at_;
  RegionRelation relation_;
};

class TrueEnvironment {
 public:
  TrueEnvironment() = default;
  TrueEnvironment(RegionLayout layout, const std::vector<Cell>& occupied);

  const RegionLayout& layout() const { return layout_; }
  bool occupied(Cell c) const { return occupied_[layout_.index(c)] != 0; }

 private:
  RegionLayout layout_;
  std::vector<char> occupied_;
};

enum class CellState : std::uint8_t { unknown, free, occupied };

struct Observation {
  Cell cell;
  bool occupied = false;
};

class OccupancyMap {
 public:
  OccupancyMap() = default;
  OccupancyMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_; }
  CellState at(Cell c) const { return cells_[static_cast<std::size_t>(c.row) * width_ + c.col]; }
  std::size_t unknown_count() const { return unknown_; }
  std::uint64_t revision() const { return revision_; }

  // Returns the number of cells that stopped being unknown. Throws on a
  // contradicting observation.
  std::size_t apply(std::span<const Observation> observations);

 private:
  int width_ = 0, height_ = 0;
  std::vector<CellState> cells_;
  std::size_t unknown_ = 0;
  std::uint64_t revision_ = 0;
};

struct RobotPose {
  int robot = 1;
  Cell cell;
};

struct SenseOptions {
  bool occlusion = false;  // cells hidden behind an obstacle are not observed
};

std::vector<Observation> sense(const TrueEnvironment& env, Cell pose, double range, const SenseOptions& options = {});
OccupancyMap update_map(OccupancyMap m, std::span<const Observation> observations);
Symbol label(std::span<const RobotPose> poses, const TrueEnvironment& env);
Symbol robot_label(int robot, Cell c, const TrueEnvironment& env);

std::string export_pgm(const OccupancyMap& m);
std::string export_csv(const OccupancyMap& m);

}  // namespace ltlgrid

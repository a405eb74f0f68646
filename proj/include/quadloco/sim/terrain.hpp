// Copyright 2026 The Quadloco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUADLOCO_SIM_TERRAIN_HPP_
#define QUADLOCO_SIM_TERRAIN_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quadloco/sim/types.hpp"

namespace quadloco::sim {

enum class TerrainKind : std::uint32_t { kFlat = 0, kSlopes = 1, kSteps = 2 };

std::string_view terrain_kind_name(TerrainKind kind);

struct TerrainParams {
  double size = 16.0;              // m, square side centered on the origin
  double cell_size = 0.1;          // m
  double max_slope_deg = 15.0;     // slopes terrain
  double min_segment = 1.0;        // m, slope segment length range
  double max_segment = 3.0;
  double step_height = 0.05;       // m, steps terrain
  int step_block_cells = 4;        // cells per step block side
};

// Heightfield terrain sampled bilinearly. Flat terrain stores no grid and
// returns exactly 0 with normal +z everywhere. Outside the grid the nearest
// edge value is used.
class Terrain {
 public:
  Terrain() = default;  // flat

  static Terrain flat() { return Terrain(); }
  // Piecewise-planar ramps along a random direction, each with an
  // inclination drawn uniformly from [0, max_slope_deg] and a random sign.
  static Terrain slopes(std::uint64_t seed, const TerrainParams& params = {});
  // Blocks of step_block_cells^2 cells, each at height 0 or step_height.
  static Terrain steps(std::uint64_t seed, const TerrainParams& params = {});
  static Terrain generate(TerrainKind kind, std::uint64_t seed,
                          const TerrainParams& params = {});
  static Terrain from_grid(TerrainKind kind, double cell_size, int nx, int ny,
                           double origin_x, double origin_y,
                           std::vector<double> heights);

  TerrainKind kind() const { return kind_; }
  double cell_size() const { return cell_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  const std::vector<double>& heights() const { return heights_; }
  double grid(int ix, int iy) const { return heights_[iy * nx_ + ix]; }

  double height(double x, double y) const;
  // Unit upward normal of the bilinear surface.
  Vec3 normal(double x, double y) const;

  // Binary heightfield: "QLHF", u32 version, u32 kind, f64 cell size,
  // u32 nx, u32 ny, f64 origin x, f64 origin y, nx*ny f64 heights (row-major
  // in y), all little-endian.
  void save(const std::string& path) const;
  static Terrain load(const std::string& path);

  friend bool operator==(const Terrain&, const Terrain&) = default;

 private:
  // Gradient (dh/dx, dh/dy) and height at (x, y).
  void sample(double x, double y, double& h, double& gx, double& gy) const;

  TerrainKind kind_ = TerrainKind::kFlat;
  double cell_size_ = 0.1;
  int nx_ = 0;
  int ny_ = 0;
  double origin_x_ = 0.0;
  double origin_y_ = 0.0;
  std::vector<double> heights_;
};

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_TERRAIN_HPP_

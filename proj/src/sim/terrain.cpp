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

#include "quadloco/sim/terrain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "quadloco/error.hpp"

namespace quadloco::sim {

namespace {

constexpr char kMagic[4] = {'Q', 'L', 'H', 'F'};
constexpr std::uint32_t kVersion = 1;

int cells_for(const TerrainParams& p) {
  if (!(p.cell_size > 0.0) || !(p.size > p.cell_size)) {
    throw ConfigError("terrain: invalid size/cell_size");
  }
  return static_cast<int>(std::lround(p.size / p.cell_size)) + 1;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.put(static_cast<char>((bits >> (8 * b)) & 0xff));
}

std::uint64_t get_bytes(std::istream& in, int n) {
  std::uint64_t v = 0;
  for (int b = 0; b < n; ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw IoError("heightfield: truncated file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

}  // namespace

std::string_view terrain_kind_name(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::kFlat: return "flat";
    case TerrainKind::kSlopes: return "slopes";
    case TerrainKind::kSteps: return "steps";
  }
  return "unknown";
}

Terrain Terrain::from_grid(TerrainKind kind, double cell_size, int nx, int ny,
                           double origin_x, double origin_y,
                           std::vector<double> heights) {
  if (!(cell_size > 0.0) || nx < 2 || ny < 2 ||
      heights.size() != static_cast<std::size_t>(nx) * ny) {
    throw ConfigError("terrain: inconsistent heightfield dimensions");
  }
  Terrain t;
  t.kind_ = kind;
  t.cell_size_ = cell_size;
  t.nx_ = nx;
  t.ny_ = ny;
  t.origin_x_ = origin_x;
  t.origin_y_ = origin_y;
  t.heights_ = std::move(heights);
  return t;
}

Terrain Terrain::slopes(std::uint64_t seed, const TerrainParams& p) {
  const int n = cells_for(p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double direction = 2.0 * std::numbers::pi * unit(rng);
  const double ux = std::cos(direction);
  const double uy = std::sin(direction);

  // Profile f(s) along the ramp direction, s in [-size, size].
  const double reach = p.size;
  std::vector<double> knots{-reach};
  std::vector<double> values{0.0};
  const double max_tan = std::tan(p.max_slope_deg * std::numbers::pi / 180.0);
  while (knots.back() < reach) {
    const double len = p.min_segment + (p.max_segment - p.min_segment) * unit(rng);
    const double angle = p.max_slope_deg * unit(rng) * std::numbers::pi / 180.0;
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double slope = std::min(std::tan(angle), max_tan) * sign;
    values.push_back(values.back() + slope * len);
    knots.push_back(knots.back() + len);
  }
  auto profile = [&](double s) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), s);
    const std::size_t i = std::clamp<std::size_t>(it - knots.begin(), 1, knots.size() - 1);
    const double t = (s - knots[i - 1]) / (knots[i] - knots[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
  };

  const double origin = -0.5 * p.size;
  std::vector<double> h(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double x = origin + ix * p.cell_size;
      const double y = origin + iy * p.cell_size;
      h[iy * n + ix] = profile(x * ux + y * uy);
    }
  }
  // Shift so the terrain is at zero height under the origin.
  const double h0 = profile(0.0);
  for (double& v : h) v -= h0;
  return from_grid(TerrainKind::kSlopes, p.cell_size, n, n, origin, origin,
                   std::move(h));
}

Terrain Terrain::steps(std::uint64_t seed, const TerrainParams& p) {
  const int n = cells_for(p);
  if (p.step_block_cells < 1) throw ConfigError("terrain: step_block_cells < 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution raised(0.5);
  const int blocks = (n + p.step_block_cells - 1) / p.step_block_cells;
  std::vector<int> level(static_cast<std::size_t>(blocks) * blocks);
  for (auto& l : level) l = raised(rng) ? 1 : 0;
  const double origin = -0.5 * p.size;
  std::vector<double> h(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int b = (iy / p.step_block_cells) * blocks + ix / p.step_block_cells;
      h[iy * n + ix] = level[b] * p.step_height;
    }
  }
  return from_grid(TerrainKind::kSteps, p.cell_size, n, n, origin, origin,
                   std::move(h));
}

Terrain Terrain::generate(TerrainKind kind, std::uint64_t seed,
                          const TerrainParams& params) {
  switch (kind) {
    case TerrainKind::kFlat: return flat();
    case TerrainKind::kSlopes: return slopes(seed, params);
    case TerrainKind::kSteps: return steps(seed, params);
  }
  throw ConfigError("terrain: unknown kind");
}

void Terrain::sample(double x, double y, double& h, double& gx,
                     double& gy) const {
  const double fx = std::clamp((x - origin_x_) / cell_size_, 0.0, nx_ - 1.0);
  const double fy = std::clamp((y - origin_y_) / cell_size_, 0.0, ny_ - 1.0);
  const int ix = std::min(static_cast<int>(fx), nx_ - 2);
  const int iy = std::min(static_cast<int>(fy), ny_ - 2);
  const double tx = fx - ix;
  const double ty = fy - iy;
  const double h00 = grid(ix, iy);
  const double h10 = grid(ix + 1, iy);
  const double h01 = grid(ix, iy + 1);
  const double h11 = grid(ix + 1, iy + 1);
  const double bottom = h00 + tx * (h10 - h00);
  const double top = h01 + tx * (h11 - h01);
  h = bottom + ty * (top - bottom);
  gx = ((1.0 - ty) * (h10 - h00) + ty * (h11 - h01)) / cell_size_;
  gy = ((1.0 - tx) * (h01 - h00) + tx * (h11 - h10)) / cell_size_;
}

double Terrain::height(double x, double y) const {
  if (heights_.empty()) return 0.0;
  double h, gx, gy;
  sample(x, y, h, gx, gy);
  return h;
}

Vec3 Terrain::normal(double x, double y) const {
  if (heights_.empty()) return Vec3::UnitZ();
  double h, gx, gy;
  sample(x, y, h, gx, gy);
  return Vec3(-gx, -gy, 1.0).normalized();
}

void Terrain::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kind_));
  put_f64(out, cell_size_);
  put_u32(out, static_cast<std::uint32_t>(nx_));
  put_u32(out, static_cast<std::uint32_t>(ny_));
  put_f64(out, origin_x_);
  put_f64(out, origin_y_);
  for (double h : heights_) put_f64(out, h);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Terrain Terrain::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) {
    throw IoError("'" + path + "' is not a heightfield file");
  }
  if (get_bytes(in, 4) != kVersion) throw IoError("heightfield: unsupported version");
  const auto kind = static_cast<TerrainKind>(get_bytes(in, 4));
  if (kind != TerrainKind::kFlat && kind != TerrainKind::kSlopes &&
      kind != TerrainKind::kSteps) {
    throw IoError("heightfield: unknown terrain kind");
  }
  Terrain t;
  t.kind_ = kind;
  t.cell_size_ = std::bit_cast<double>(get_bytes(in, 8));
  t.nx_ = static_cast<int>(get_bytes(in, 4));
  t.ny_ = static_cast<int>(get_bytes(in, 4));
  t.origin_x_ = std::bit_cast<double>(get_bytes(in, 8));
  t.origin_y_ = std::bit_cast<double>(get_bytes(in, 8));
  const std::size_t count = static_cast<std::size_t>(t.nx_) * t.ny_;
  if (count > (std::size_t{1} << 28)) throw IoError("heightfield: implausible size");
  t.heights_.resize(count);
  for (auto& h : t.heights_) h = std::bit_cast<double>(get_bytes(in, 8));
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError("heightfield: trailing data");
  }
  return t;
}

}  // namespace quadloco::sim

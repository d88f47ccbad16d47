#include "vsim/vsr.hpp"

#include <algorithm>
#include <cmath>

namespace vsim {

VSR assemble_vsr(World& world, const VSRDescription& desc, const Vec2& origin) {
  const int w = desc.width();
  const int h = desc.height();

  Grid2D<bool> occ(w, h);
  int n_occupied = 0;
  double side = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!desc.occupied(x, y)) continue;
      occ.at(x, y) = true;
      n_occupied += 1;
      const MaterialSpec& m = *desc.at(x, y);
      m.validate();
      if (side == 0.0) {
        side = m.side_length;
      } else if (m.side_length != side) {
        throw std::invalid_argument("assemble_vsr: all voxels must share one side_length");
      }
    }
  }
  if (n_occupied == 0) throw std::invalid_argument("assemble_vsr: empty description");
  if (largest_connected_region(occ).count_occupied() != n_occupied) {
    throw std::invalid_argument("assemble_vsr: voxels must form one connected region");
  }

  VSR vsr;
  vsr.voxels = Grid2D<Voxel>(w, h);
  vsr.collision_group = world.allocate_collision_group();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!desc.occupied(x, y)) continue;
      Vec2 center = origin + Vec2{x * side, y * side};
      vsr.voxels.at(x, y) =
          build_voxel(world, *desc.at(x, y), center, vsr.collision_group);
      vsr.cells.push_back({x, y});
    }
  }

  auto weld_pair = [&](BodyId a, BodyId b) {
    Vec2 anchor = (world.body(a).position + world.body(b).position) / 2.0;
    vsr.weld_ids.push_back(world.add_weld(a, b, anchor));
  };
  for (auto [x, y] : vsr.cells) {
    const Voxel& v = *vsr.voxels.at(x, y);
    if (desc.in_bounds(x + 1, y) && desc.occupied(x + 1, y)) {
      const Voxel& r = *vsr.voxels.at(x + 1, y);
      weld_pair(v.masses[1], r.masses[0]);  // top pair across the shared side
      weld_pair(v.masses[2], r.masses[3]);  // bottom pair
    }
    if (desc.in_bounds(x, y + 1) && desc.occupied(x, y + 1)) {
      const Voxel& u = *vsr.voxels.at(x, y + 1);
      weld_pair(v.masses[0], u.masses[3]);  // left pair across the shared side
      weld_pair(v.masses[1], u.masses[2]);  // right pair
    }
  }
  return vsr;
}

Vec2 vsr_center(const World& world, const VSR& vsr) {
  Vec2 sum;
  int n = 0;
  for (auto [x, y] : vsr.cells) {
    for (BodyId id : vsr.voxels.at(x, y)->masses) {
      sum += world.body(id).position;
      n += 1;
    }
  }
  return sum / static_cast<double>(n);
}

void vsr_apply_actuation_forces(World& world, const VSR& vsr) {
  for (auto [x, y] : vsr.cells) {
    apply_actuation_forces(world, *vsr.voxels.at(x, y));
  }
}

double vsr_lowest_point(const World& world, const VSR& vsr) {
  double lowest = 1e300;
  for (auto [x, y] : vsr.cells) {
    for (BodyId id : vsr.voxels.at(x, y)->masses) {
      const Body& b = world.body(id);
      double c = std::cos(b.rotation), s = std::sin(b.rotation);
      double reach = b.half_side * (std::abs(c) + std::abs(s));
      lowest = std::min(lowest, b.position.y - reach);
    }
  }
  return lowest;
}

std::pair<int, int> description_bounds(const VSRDescription& desc) {
  int min_x = desc.width(), max_x = -1, min_y = desc.height(), max_y = -1;
  for (int y = 0; y < desc.height(); ++y) {
    for (int x = 0; x < desc.width(); ++x) {
      if (!desc.occupied(x, y)) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) return {0, 0};
  return {max_x - min_x + 1, max_y - min_y + 1};
}

}  // namespace vsim

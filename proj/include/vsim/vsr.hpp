#pragma once

#include <vector>

#include "vsim/grid.hpp"
#include "vsim/voxel.hpp"

namespace vsim {

// Per-cell material layout. Occupied cells must share one side_length and
// form a single 4-connected region.
using VSRDescription = Grid2D<MaterialSpec>;

// Assembled robot: voxels in the description's grid positions, adjacent
// voxels joined by two welds (one per coincident mass pair).
struct VSR {
  Grid2D<Voxel> voxels;
  std::vector<int> weld_ids;
  int collision_group = -1;
  // occupied cells in scan order: y = 0 (bottom row) upward, x left to right
  std::vector<std::pair<int, int>> cells;

  int voxel_count() const { return static_cast<int>(cells.size()); }
};

// Cell (x, y) is centered at origin + (x*l, y*l); y grows upward.
VSR assemble_vsr(World& world, const VSRDescription& desc, const Vec2& origin);

// mean of all mass centers (equal masses, so this is the center of mass)
Vec2 vsr_center(const World& world, const VSR& vsr);

// re-applies force-mode actuation; call once before every world step
void vsr_apply_actuation_forces(World& world, const VSR& vsr);

// lowest corner over all masses at the current pose
double vsr_lowest_point(const World& world, const VSR& vsr);

// occupied bounding box, in voxels
std::pair<int, int> description_bounds(const VSRDescription& desc);

}  // namespace vsim

#pragma once

#include <array>
#include <vector>

#include "vsim/material.hpp"
#include "vsim/physics.hpp"

namespace vsim {

// One soft voxel: four rigid square masses joined by spring-damper scaffolding
// and two diagonal distance-capping ropes. Mass order is fixed: index 0 =
// top-left, 1 = top-right, 2 = bottom-right, 3 = bottom-left.
struct Voxel {
  struct Spring {
    int id = -1;
    ScaffoldingGroup group;
    double rest0 = 0.0;  // as-built rest length, basis for area actuation
  };
  struct RopeRef {
    int id = -1;
    double max0 = 0.0;  // as-built cap
  };

  MaterialSpec material;
  std::array<BodyId, 4> masses{-1, -1, -1, -1};
  std::vector<Spring> springs;
  std::vector<RopeRef> ropes;
  double control = 0.0;          // last actuation value, clamped
  double rest_quad_area = 0.0;   // (l - l_m*l)^2, mass-center quad area at rest
  double last_angle = 0.0;       // fallback when the orientation is degenerate
  long clamped_controls = 0;
  long self_intersections = 0;
};

// Builds the four masses, the scaffolding springs selected by the material,
// and both ropes, centered at origin. collision_group < 0 allocates a fresh
// group so the masses never collide with each other.
Voxel build_voxel(World& world, const MaterialSpec& spec, const Vec2& origin,
                  int collision_group = -1);

// Stores the clamped control value; in Area mode instantly rescales every
// spring rest length and rope cap by sqrt(1 - f*rho_area). f = 1 shrinks,
// f = -1 expands, f = 0 restores the as-built lengths. Values outside [-1, 1]
// are clamped and counted; non-finite values count as clamped and act as 0.
void actuate(World& world, Voxel& voxel, double f);

// Force-mode actuation force for the current control value; re-applied before
// every step so the force acts continuously. No-op in Area mode or at f = 0.
void apply_actuation_forces(World& world, const Voxel& voxel);

Vec2 voxel_center(const World& world, const Voxel& voxel);
Vec2 voxel_velocity(const World& world, const Voxel& voxel);

// Orientation: angle of the sum of the unit vectors along the top edge
// (mass 0 -> 1) and the bottom edge (mass 3 -> 2). Falls back to the last
// well-defined value when the sum is degenerate.
double voxel_angle(const World& world, Voxel& voxel);

// Shoelace area of the mass-center quadrilateral (absolute value; a bow-tie
// crossing increments the self-intersection counter).
double voxel_area(const World& world, Voxel& voxel);

// voxel_area normalized so the as-built configuration reads exactly 1.
double voxel_area_ratio(const World& world, Voxel& voxel);

// True iff any of the four masses touched terrain or a body outside the
// voxel's collision group during the last step.
bool voxel_touching(const World& world, const Voxel& voxel);

}  // namespace vsim

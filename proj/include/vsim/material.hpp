#pragma once

#include <cstdint>
#include <stdexcept>

namespace vsim {

// Spring-damper scaffolding groups inside a voxel. Members per group:
// side-external 4, side-internal 4, side-cross 8, central-cross 2.
enum class ScaffoldingGroup : uint8_t {
  SideExternal = 1,
  SideInternal = 2,
  SideCross = 4,
  CentralCross = 8,
};

using Scaffolding = uint8_t;  // bitwise OR of ScaffoldingGroup values

constexpr Scaffolding kScaffoldingAll =
    static_cast<Scaffolding>(ScaffoldingGroup::SideExternal) |
    static_cast<Scaffolding>(ScaffoldingGroup::SideInternal) |
    static_cast<Scaffolding>(ScaffoldingGroup::SideCross) |
    static_cast<Scaffolding>(ScaffoldingGroup::CentralCross);

constexpr bool scaffolding_has(Scaffolding s, ScaffoldingGroup g) {
  return (s & static_cast<Scaffolding>(g)) != 0;
}

enum class ActuationMode : uint8_t {
  Area,   // rest lengths rescaled so the equilibrium area becomes (1 - f*rho_area)
  Force,  // center-directed force |f|*max_force on each mass
};

struct MaterialSpec {
  double side_length = 3.0;       // voxel side l, m
  double mass_side_ratio = 0.3;   // mass square side as a fraction of l, in (0, 0.5]
  double linear_damping = 1.0;
  double angular_damping = 1.0;
  double mass = 1.0;              // per mass body, kg
  double friction = 100.0;
  double restitution = 0.1;
  double spring_frequency = 8.0;  // Hz
  double spring_damping = 0.3;    // damping ratio
  double max_force = 1000.0;      // N, force actuation
  double max_area_change = 0.2;   // rho_area, area actuation, in [0, 1)
  Scaffolding scaffolding = kScaffoldingAll;
  bool ropes_enabled = true;
  ActuationMode actuation = ActuationMode::Area;

  void validate() const {
    if (!(side_length > 0.0)) throw std::invalid_argument("MaterialSpec: side_length must be > 0");
    if (!(mass_side_ratio > 0.0 && mass_side_ratio <= 0.5)) {
      throw std::invalid_argument("MaterialSpec: mass_side_ratio must be in (0, 0.5]");
    }
    if (linear_damping < 0.0 || angular_damping < 0.0) {
      throw std::invalid_argument("MaterialSpec: dampings must be >= 0");
    }
    if (!(mass > 0.0)) throw std::invalid_argument("MaterialSpec: mass must be > 0");
    if (friction < 0.0) throw std::invalid_argument("MaterialSpec: friction must be >= 0");
    if (restitution < 0.0) throw std::invalid_argument("MaterialSpec: restitution must be >= 0");
    if (!(spring_frequency > 0.0)) {
      throw std::invalid_argument("MaterialSpec: spring_frequency must be > 0");
    }
    if (spring_damping < 0.0) throw std::invalid_argument("MaterialSpec: spring_damping must be >= 0");
    if (max_force < 0.0) throw std::invalid_argument("MaterialSpec: max_force must be >= 0");
    if (!(max_area_change >= 0.0 && max_area_change < 1.0)) {
      throw std::invalid_argument("MaterialSpec: max_area_change must be in [0, 1)");
    }
  }
};

}  // namespace vsim

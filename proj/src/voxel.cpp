#include "vsim/voxel.hpp"

#include <cmath>

namespace vsim {

namespace {

// mass centers sit at origin +- (l - l_m*l)/2 on both axes
Vec2 mass_offset(int index, double d) {
  switch (index) {
    case 0: return {-d, d};   // top-left
    case 1: return {d, d};    // top-right
    case 2: return {d, -d};   // bottom-right
    default: return {-d, -d}; // bottom-left
  }
}

struct Side {
  int a, b;     // mass indices, a -> b along the side
  Vec2 out;     // outward axis of this side
  Vec2 along;   // unit vector from a toward b
};

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).cross(c - a);
  };
  double o1 = orient(p1, p2, q1);
  double o2 = orient(p1, p2, q2);
  double o3 = orient(q1, q2, p1);
  double o4 = orient(q1, q2, p2);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

Voxel build_voxel(World& world, const MaterialSpec& spec, const Vec2& origin,
                  int collision_group) {
  spec.validate();
  Voxel v;
  v.material = spec;
  const double l = spec.side_length;
  const double mass_side = spec.mass_side_ratio * l;
  const double d = (l - mass_side) / 2.0;
  const double hs = mass_side / 2.0;
  v.rest_quad_area = (l - mass_side) * (l - mass_side);

  int group = collision_group >= 0 ? collision_group : world.allocate_collision_group();
  for (int i = 0; i < 4; ++i) {
    Body b;
    b.position = origin + mass_offset(i, d);
    b.half_side = hs;
    b.mass = spec.mass;
    b.linear_damping = spec.linear_damping;
    b.angular_damping = spec.angular_damping;
    b.friction = spec.friction;
    b.restitution = spec.restitution;
    b.collision_group = group;
    v.masses[i] = world.add_body(b);
  }

  auto add_spring = [&](ScaffoldingGroup g, int ma, const Vec2& la, int mb, const Vec2& lb) {
    SpringDamper s;
    s.body_a = v.masses[ma];
    s.body_b = v.masses[mb];
    s.local_anchor_a = la;
    s.local_anchor_b = lb;
    Vec2 pa = world.body(s.body_a).world_point(la);
    Vec2 pb = world.body(s.body_b).world_point(lb);
    s.rest_length = (pb - pa).length();
    s.frequency = spec.spring_frequency;
    s.damping_ratio = spec.spring_damping;
    int id = world.add_spring(s);
    v.springs.push_back({id, g, s.rest_length});
  };

  // left: 3 -> 0, right: 2 -> 1, bottom: 3 -> 2, top: 0 -> 1 (indices, not labels)
  const Side sides[4] = {
      {3, 0, {-1, 0}, {0, 1}},
      {2, 1, {1, 0}, {0, 1}},
      {3, 2, {0, -1}, {1, 0}},
      {0, 1, {0, 1}, {1, 0}},
  };
  for (const Side& s : sides) {
    Vec2 o = s.out * hs;
    Vec2 u = s.along * hs;
    if (scaffolding_has(spec.scaffolding, ScaffoldingGroup::SideExternal)) {
      add_spring(ScaffoldingGroup::SideExternal, s.a, o + u, s.b, o - u);
    }
    if (scaffolding_has(spec.scaffolding, ScaffoldingGroup::SideInternal)) {
      add_spring(ScaffoldingGroup::SideInternal, s.a, -o + u, s.b, -o - u);
    }
    if (scaffolding_has(spec.scaffolding, ScaffoldingGroup::SideCross)) {
      add_spring(ScaffoldingGroup::SideCross, s.a, o + u, s.b, -o - u);
      add_spring(ScaffoldingGroup::SideCross, s.a, -o + u, s.b, o - u);
    }
  }
  if (scaffolding_has(spec.scaffolding, ScaffoldingGroup::CentralCross)) {
    add_spring(ScaffoldingGroup::CentralCross, 0, {0, 0}, 2, {0, 0});
    add_spring(ScaffoldingGroup::CentralCross, 1, {0, 0}, 3, {0, 0});
  }

  if (spec.ropes_enabled) {
    // Taut at the as-built diagonal; expansion actuation rescales the cap.
    for (auto [ma, mb] : {std::pair{0, 2}, std::pair{1, 3}}) {
      Rope r;
      r.body_a = v.masses[ma];
      r.body_b = v.masses[mb];
      r.local_anchor_a = {0, 0};
      r.local_anchor_b = {0, 0};
      r.max_length = (world.body(r.body_b).position - world.body(r.body_a).position).length();
      int id = world.add_rope(r);
      v.ropes.push_back({id, r.max_length});
    }
  }
  return v;
}

void actuate(World& world, Voxel& voxel, double f) {
  if (!std::isfinite(f)) {
    voxel.clamped_controls += 1;
    f = 0.0;
  } else if (f < -1.0 || f > 1.0) {
    voxel.clamped_controls += 1;
    f = f < -1.0 ? -1.0 : 1.0;
  }
  voxel.control = f;
  if (voxel.material.actuation == ActuationMode::Area) {
    double scale = std::sqrt(1.0 - f * voxel.material.max_area_change);
    for (const Voxel::Spring& s : voxel.springs) {
      world.set_rest_length(s.id, s.rest0 * scale);
    }
    for (const Voxel::RopeRef& r : voxel.ropes) {
      world.rope(r.id).max_length = r.max0 * scale;
    }
  }
}

void apply_actuation_forces(World& world, const Voxel& voxel) {
  if (voxel.material.actuation != ActuationMode::Force || voxel.control == 0.0) return;
  Vec2 center = voxel_center(world, voxel);
  for (BodyId id : voxel.masses) {
    Vec2 to_center = (center - world.body(id).position).normalized();
    world.apply_force(id, to_center * (voxel.control * voxel.material.max_force));
  }
}

Vec2 voxel_center(const World& world, const Voxel& voxel) {
  Vec2 sum;
  for (BodyId id : voxel.masses) sum += world.body(id).position;
  return sum / 4.0;
}

Vec2 voxel_velocity(const World& world, const Voxel& voxel) {
  Vec2 sum;
  for (BodyId id : voxel.masses) sum += world.body(id).linear_velocity;
  return sum / 4.0;
}

double voxel_angle(const World& world, Voxel& voxel) {
  Vec2 top = world.body(voxel.masses[1]).position - world.body(voxel.masses[0]).position;
  Vec2 bottom = world.body(voxel.masses[2]).position - world.body(voxel.masses[3]).position;
  Vec2 sum = top.normalized() + bottom.normalized();
  if (sum.length_sq() < 1e-24) return voxel.last_angle;
  voxel.last_angle = std::atan2(sum.y, sum.x);
  return voxel.last_angle;
}

double voxel_area(const World& world, Voxel& voxel) {
  Vec2 p[4];
  for (int i = 0; i < 4; ++i) p[i] = world.body(voxel.masses[i]).position;
  double twice = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % 4];
    twice += a.x * b.y - b.x * a.y;
  }
  if (segments_intersect(p[0], p[1], p[2], p[3]) || segments_intersect(p[1], p[2], p[3], p[0])) {
    voxel.self_intersections += 1;
  }
  return std::abs(twice) / 2.0;
}

double voxel_area_ratio(const World& world, Voxel& voxel) {
  return voxel_area(world, voxel) / voxel.rest_quad_area;
}

bool voxel_touching(const World& world, const Voxel& voxel) {
  for (BodyId id : voxel.masses) {
    if (world.contact_query(id)) return true;
  }
  return false;
}

}  // namespace vsim

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "vsim/vsr.hpp"

using namespace vsim;

namespace {

Settings no_gravity() {
  Settings s;
  s.gravity = {0, 0};
  return s;
}

Scaffolding groups(std::initializer_list<ScaffoldingGroup> gs) {
  Scaffolding s = 0;
  for (auto g : gs) s |= static_cast<Scaffolding>(g);
  return s;
}

int count_group(const Voxel& v, ScaffoldingGroup g) {
  return static_cast<int>(
      std::count_if(v.springs.begin(), v.springs.end(),
                    [g](const Voxel::Spring& s) { return s.group == g; }));
}

// endpoints of a spring in world coordinates, rounded to kill noise
std::pair<Vec2, Vec2> endpoints(const World& w, const SpringDamper& s) {
  return {w.body(s.body_a).world_point(s.local_anchor_a),
          w.body(s.body_b).world_point(s.local_anchor_b)};
}

bool near(const Vec2& a, const Vec2& b) { return (a - b).length() < 1e-12; }

}  // namespace

TEST_CASE("scaffolding spring counts per configuration") {
  using G = ScaffoldingGroup;
  struct Row {
    Scaffolding s;
    int expect;
  };
  const Row rows[] = {
      {groups({G::SideExternal, G::CentralCross}), 6},
      {groups({G::SideExternal, G::SideInternal, G::CentralCross}), 10},
      {kScaffoldingAll, 18},
      {groups({G::SideExternal, G::SideInternal, G::SideCross}), 16},
      {groups({G::SideExternal}), 4},
      {groups({G::SideCross}), 8},
      {groups({G::CentralCross}), 2},
  };
  for (const Row& r : rows) {
    World w(no_gravity());
    MaterialSpec m;
    m.scaffolding = r.s;
    Voxel v = build_voxel(w, m, {0, 0});
    CHECK(static_cast<int>(v.springs.size()) == r.expect);
    CHECK(w.spring_count() == static_cast<size_t>(r.expect));
  }
}

TEST_CASE("mass placement and rest geometry at defaults") {
  World w(no_gravity());
  MaterialSpec m;  // side 3, mass squares 0.9
  Voxel v = build_voxel(w, m, {10, 20});
  // centers sit at +-(l - l_m)/2 from the voxel center; 0 = top-left,
  // clockwise
  CHECK(near(w.body(v.masses[0]).position, {10 - 1.05, 20 + 1.05}));
  CHECK(near(w.body(v.masses[1]).position, {10 + 1.05, 20 + 1.05}));
  CHECK(near(w.body(v.masses[2]).position, {10 + 1.05, 20 - 1.05}));
  CHECK(near(w.body(v.masses[3]).position, {10 - 1.05, 20 - 1.05}));
  int group = w.body(v.masses[0]).collision_group;
  CHECK(group >= 0);
  for (BodyId id : v.masses) {
    CHECK(w.body(id).half_side == doctest::Approx(0.45));
    CHECK(w.body(id).mass == doctest::Approx(1.0));
    CHECK(w.body(id).collision_group == group);
  }
  CHECK(near(voxel_center(w, v), {10, 20}));
  CHECK(v.rest_quad_area == doctest::Approx(2.1 * 2.1).epsilon(1e-12));
}

TEST_CASE("spring rest lengths by group") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  using G = ScaffoldingGroup;
  CHECK(count_group(v, G::SideExternal) == 4);
  CHECK(count_group(v, G::SideInternal) == 4);
  CHECK(count_group(v, G::SideCross) == 8);
  CHECK(count_group(v, G::CentralCross) == 2);
  for (const Voxel::Spring& s : v.springs) {
    double rest = w.spring(s.id).rest_length;
    CHECK(rest == doctest::Approx(s.rest0).epsilon(1e-12));
    switch (s.group) {
      case G::SideExternal:
      case G::SideInternal:
        // straight runs between facing mass edges: l - 2 * l_m
        CHECK(rest == doctest::Approx(1.2).epsilon(1e-9));
        break;
      case G::SideCross:
        // diagonal of the 0.9 x 1.2 gap rectangle
        CHECK(rest == doctest::Approx(1.5).epsilon(1e-9));
        break;
      case G::CentralCross:
        CHECK(rest == doctest::Approx(2.1 * std::sqrt(2.0)).epsilon(1e-9));
        break;
    }
    // as-built springs start at their rest length exactly
    auto [pa, pb] = endpoints(w, w.spring(s.id));
    CHECK((pb - pa).length() == doctest::Approx(rest).epsilon(1e-9));
  }
}

TEST_CASE("external springs run along the outer boundary, internal along the inner ring") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  auto segment_set = [&](ScaffoldingGroup g) {
    std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> out;
    for (const Voxel::Spring& s : v.springs) {
      if (s.group != g) continue;
      auto [pa, pb] = endpoints(w, w.spring(s.id));
      auto key = [](const Vec2& p) {
        return std::pair{std::round(p.x * 1e6) / 1e6, std::round(p.y * 1e6) / 1e6};
      };
      auto ka = key(pa), kb = key(pb);
      out.insert({std::min(ka, kb), std::max(ka, kb)});
    }
    return out;
  };
  using P = std::pair<double, double>;
  std::set<std::pair<P, P>> expect_ext = {
      {{-1.5, -0.6}, {-1.5, 0.6}},  // left
      {{1.5, -0.6}, {1.5, 0.6}},    // right
      {{-0.6, -1.5}, {0.6, -1.5}},  // bottom
      {{-0.6, 1.5}, {0.6, 1.5}},    // top
  };
  std::set<std::pair<P, P>> expect_int = {
      {{-0.6, -0.6}, {-0.6, 0.6}},
      {{0.6, -0.6}, {0.6, 0.6}},
      {{-0.6, -0.6}, {0.6, -0.6}},
      {{-0.6, 0.6}, {0.6, 0.6}},
  };
  CHECK(segment_set(ScaffoldingGroup::SideExternal) == expect_ext);
  CHECK(segment_set(ScaffoldingGroup::SideInternal) == expect_int);
}

TEST_CASE("central springs and ropes join opposite mass centers") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  for (const Voxel::Spring& s : v.springs) {
    if (s.group != ScaffoldingGroup::CentralCross) continue;
    auto [pa, pb] = endpoints(w, w.spring(s.id));
    CHECK(std::abs(pa.x) == doctest::Approx(1.05));
    CHECK(std::abs(pa.y) == doctest::Approx(1.05));
    CHECK(near(pb, -pa));
  }
  REQUIRE(v.ropes.size() == 2);
  for (const Voxel::RopeRef& r : v.ropes) {
    CHECK(r.max0 == doctest::Approx(2.1 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(w.rope(r.id).max_length == doctest::Approx(r.max0).epsilon(1e-12));
  }
  MaterialSpec no_ropes;
  no_ropes.ropes_enabled = false;
  World w2(no_gravity());
  Voxel v2 = build_voxel(w2, no_ropes, {0, 0});
  CHECK(v2.ropes.empty());
  CHECK(w2.rope_count() == 0);
}

TEST_CASE("area actuation rescales rest lengths and rope caps from the as-built values") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  double s_half = std::sqrt(1.0 - 0.5 * 0.2);
  actuate(w, v, 0.5);
  CHECK(v.control == 0.5);
  for (const Voxel::Spring& s : v.springs) {
    CHECK(w.spring(s.id).rest_length == doctest::Approx(s.rest0 * s_half).epsilon(1e-12));
  }
  for (const Voxel::RopeRef& r : v.ropes) {
    CHECK(w.rope(r.id).max_length == doctest::Approx(r.max0 * s_half).epsilon(1e-12));
  }
  // repeated actuation scales from the as-built basis, never compounds
  actuate(w, v, 0.5);
  for (const Voxel::Spring& s : v.springs) {
    CHECK(w.spring(s.id).rest_length == doctest::Approx(s.rest0 * s_half).epsilon(1e-12));
  }
  // expansion grows the caps
  actuate(w, v, -1.0);
  double s_exp = std::sqrt(1.2);
  for (const Voxel::RopeRef& r : v.ropes) {
    CHECK(w.rope(r.id).max_length == doctest::Approx(r.max0 * s_exp).epsilon(1e-12));
  }
  // zero restores everything
  actuate(w, v, 0.0);
  for (const Voxel::Spring& s : v.springs) {
    CHECK(w.spring(s.id).rest_length == doctest::Approx(s.rest0).epsilon(1e-12));
  }
}

TEST_CASE("out-of-range and non-finite controls clamp and count") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  actuate(w, v, 2.0);
  CHECK(v.control == 1.0);
  CHECK(v.clamped_controls == 1);
  actuate(w, v, -3.0);
  CHECK(v.control == -1.0);
  CHECK(v.clamped_controls == 2);
  actuate(w, v, std::nan(""));
  CHECK(v.control == 0.0);
  CHECK(v.clamped_controls == 3);
  actuate(w, v, 1.0);
  CHECK(v.clamped_controls == 3);
}

TEST_CASE("force actuation pushes every mass toward the center") {
  World w(no_gravity());
  MaterialSpec m;
  m.actuation = ActuationMode::Force;
  Voxel v = build_voxel(w, m, {0, 0});
  actuate(w, v, 1.0);
  // rest lengths untouched in force mode
  for (const Voxel::Spring& s : v.springs) {
    CHECK(w.spring(s.id).rest_length == doctest::Approx(s.rest0).epsilon(1e-12));
  }
  apply_actuation_forces(w, v);
  w.step();
  for (BodyId id : v.masses) {
    Vec2 vel = w.body(id).linear_velocity;
    Vec2 inward = (Vec2{0, 0} - w.body(id).position).normalized();
    CHECK(vel.dot(inward) > 0.0);
  }
  // f = 0 applies nothing
  World w2(no_gravity());
  Voxel v2 = build_voxel(w2, m, {0, 0});
  actuate(w2, v2, 0.0);
  apply_actuation_forces(w2, v2);
  w2.step();
  for (BodyId id : v2.masses) CHECK(w2.body(id).linear_velocity.length() == 0.0);
}

TEST_CASE("area actuation settles near its target without gravity") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  actuate(w, v, 1.0);
  for (int i = 0; i < 15 * 60; ++i) w.step();
  CHECK(voxel_area_ratio(w, v) == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("voxel kinematics readouts") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {2, 3});
  CHECK(near(voxel_velocity(w, v), {0, 0}));
  for (BodyId id : v.masses) w.body(id).linear_velocity = {0.5, -0.25};
  CHECK(near(voxel_velocity(w, v), {0.5, -0.25}));
  CHECK(voxel_angle(w, v) == doctest::Approx(0.0));
  // rotate every mass center 30 degrees about the voxel center
  double th = 3.14159265358979323846 / 6;
  for (BodyId id : v.masses) {
    Vec2 r = w.body(id).position - Vec2{2, 3};
    w.body(id).position = Vec2{2, 3} + r.rotated(th);
  }
  CHECK(voxel_angle(w, v) == doctest::Approx(th).epsilon(1e-9));
  CHECK(voxel_area_ratio(w, v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate orientation falls back to the last well-defined angle") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  double th = 0.4;
  for (BodyId id : v.masses) {
    Vec2 r = w.body(id).position;
    w.body(id).position = r.rotated(th);
  }
  CHECK(voxel_angle(w, v) == doctest::Approx(th).epsilon(1e-9));
  // collapse the top edge onto the reversed bottom edge: unit vectors cancel
  w.body(v.masses[0]).position = {-1, 0};
  w.body(v.masses[1]).position = {1, 0};
  w.body(v.masses[2]).position = {-1, -0.1};
  w.body(v.masses[3]).position = {1, -0.1};
  CHECK(voxel_angle(w, v) == doctest::Approx(th).epsilon(1e-9));
}

TEST_CASE("bow-tie quadrilateral increments the self-intersection counter") {
  World w(no_gravity());
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 0});
  (void)voxel_area(w, v);
  CHECK(v.self_intersections == 0);
  std::swap(w.body(v.masses[0]).position, w.body(v.masses[1]).position);
  (void)voxel_area(w, v);
  CHECK(v.self_intersections == 1);
}

TEST_CASE("touching reflects external contact only") {
  Settings st;  // gravity on
  World w(st);
  Terrain t;
  t.vertices = {{-50, 0}, {50, 0}};
  w.set_terrain(t);
  MaterialSpec m;
  Voxel v = build_voxel(w, m, {0, 10});
  w.step();
  CHECK_FALSE(voxel_touching(w, v));
  World w2(st);
  w2.set_terrain(t);
  Voxel v2 = build_voxel(w2, m, {0, 1.5});  // bottom masses start at the floor
  for (int i = 0; i < 30; ++i) w2.step();
  CHECK(voxel_touching(w2, v2));
}

TEST_CASE("assembly welds adjacent voxels pairwise") {
  World w(no_gravity());
  MaterialSpec m;
  VSRDescription d1(1, 1);
  d1.at(0, 0) = m;
  VSR one = assemble_vsr(w, d1, {0, 0});
  CHECK(one.voxel_count() == 1);
  CHECK(one.weld_ids.empty());

  World w2(no_gravity());
  VSRDescription d2(2, 1);
  d2.at(0, 0) = m;
  d2.at(1, 0) = m;
  VSR row = assemble_vsr(w2, d2, {0, 0});
  CHECK(row.voxel_count() == 2);
  CHECK(row.weld_ids.size() == 2);

  World w3(no_gravity());
  VSRDescription d3(2, 2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) d3.at(x, y) = m;
  VSR quad = assemble_vsr(w3, d3, {0, 0});
  CHECK(quad.voxel_count() == 4);
  CHECK(quad.weld_ids.size() == 8);
  // one shared collision group across the whole robot
  for (const auto& [x, y] : quad.cells) {
    for (BodyId id : quad.voxels.at(x, y)->masses) {
      CHECK(w3.body(id).collision_group == quad.collision_group);
    }
  }
}

TEST_CASE("assembly cell order is bottom row first, left to right") {
  World w(no_gravity());
  MaterialSpec m;
  VSRDescription d(2, 2);
  d.at(0, 0) = m;
  d.at(1, 0) = m;
  d.at(1, 1) = m;
  VSR vsr = assemble_vsr(w, d, {0, 0});
  std::vector<std::pair<int, int>> want = {{0, 0}, {1, 0}, {1, 1}};
  CHECK(vsr.cells == want);
  // cell (x, y) centers at origin + (x*l, y*l)
  CHECK(near(voxel_center(w, *vsr.voxels.at(1, 1)), {3, 3}));
  CHECK(near(vsr_center(w, vsr), {(0.0 + 3.0 + 3.0) / 3, (0.0 + 0.0 + 3.0) / 3}));
  CHECK(vsr_lowest_point(w, vsr) == doctest::Approx(-1.5));
  CHECK(description_bounds(d) == std::pair{2, 2});
}

TEST_CASE("invalid descriptions are rejected") {
  World w(no_gravity());
  MaterialSpec m;
  VSRDescription empty(3, 3);
  CHECK_THROWS_AS(assemble_vsr(w, empty, {0, 0}), std::invalid_argument);

  VSRDescription split(3, 1);
  split.at(0, 0) = m;
  split.at(2, 0) = m;
  CHECK_THROWS_AS(assemble_vsr(w, split, {0, 0}), std::invalid_argument);

  VSRDescription mixed(2, 1);
  mixed.at(0, 0) = m;
  MaterialSpec other = m;
  other.side_length = 2.0;
  mixed.at(1, 0) = other;
  CHECK_THROWS_AS(assemble_vsr(w, mixed, {0, 0}), std::invalid_argument);
}

TEST_CASE("welded pair drifts as one rigid assembly") {
  World w(no_gravity());
  MaterialSpec m;
  VSRDescription d(2, 1);
  d.at(0, 0) = m;
  d.at(1, 0) = m;
  VSR vsr = assemble_vsr(w, d, {0, 0});
  for (BodyId id : vsr.voxels.at(0, 0)->masses) w.body(id).linear_velocity = {1, 0};
  for (int i = 0; i < 120; ++i) w.step();
  // the impulse spreads across the welds; body damping shrinks it but both
  // voxels must end up co-moving
  Vec2 vl = voxel_velocity(w, *vsr.voxels.at(0, 0));
  Vec2 vr = voxel_velocity(w, *vsr.voxels.at(1, 0));
  CHECK(vr.x > 0.05);
  CHECK((vl - vr).length() < 0.01);
}

TEST_CASE("material validation rejects out-of-range parameters") {
  MaterialSpec ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = [](auto mutate) {
    MaterialSpec m;
    mutate(m);
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  };
  bad([](MaterialSpec& m) { m.side_length = 0; });
  bad([](MaterialSpec& m) { m.mass_side_ratio = 0.6; });
  bad([](MaterialSpec& m) { m.mass_side_ratio = 0; });
  bad([](MaterialSpec& m) { m.linear_damping = -1; });
  bad([](MaterialSpec& m) { m.mass = 0; });
  bad([](MaterialSpec& m) { m.friction = -0.1; });
  bad([](MaterialSpec& m) { m.restitution = -0.1; });
  bad([](MaterialSpec& m) { m.spring_frequency = 0; });
  bad([](MaterialSpec& m) { m.spring_damping = -0.5; });
  bad([](MaterialSpec& m) { m.max_force = -1; });
  bad([](MaterialSpec& m) { m.max_area_change = 1.0; });
}

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vsim/vec2.hpp"

namespace vsim {

using BodyId = int;

// Axis-aligned-at-rest rigid square. Squares are the only dynamic shape; the
// moment of inertia is mass * side^2 / 6 about the center.
struct Body {
  Vec2 position;
  double rotation = 0.0;
  Vec2 linear_velocity;
  double angular_velocity = 0.0;
  double half_side = 0.45;
  double mass = 1.0;
  double linear_damping = 0.0;
  double angular_damping = 0.0;
  double friction = 0.0;
  double restitution = 0.0;
  bool kinematic = false;
  // Bodies sharing a non-negative group never collide with each other.
  int collision_group = -1;

  // derived, filled in by World::add_body
  double inertia = 0.0;
  double inv_mass = 0.0;
  double inv_inertia = 0.0;

  Vec2 world_point(const Vec2& local) const { return position + local.rotated(rotation); }
  Vec2 local_point(const Vec2& world) const { return (world - position).rotated(-rotation); }
  Vec2 velocity_at(const Vec2& world) const {
    return linear_velocity + angular_cross(angular_velocity, world - position);
  }
};

// Parallel spring + viscous damper between two anchor points. Parameterized by
// frequency (Hz) and damping ratio; stiffness k and damping c derive from the
// reduced mass of the pair. Applied as explicit forces each substep.
struct SpringDamper {
  BodyId body_a = -1;
  BodyId body_b = -1;
  Vec2 local_anchor_a;
  Vec2 local_anchor_b;
  double rest_length = 1.0;
  double frequency = 8.0;
  double damping_ratio = 0.3;

  // cached by World::add_spring
  double k = 0.0;
  double c = 0.0;
};

struct SpringCoefficients {
  double k = 0.0;  // N/m
  double c = 0.0;  // N*s/m
};

// Unilateral distance cap between two anchors: applies impulses only while the
// anchors are farther apart than max_length and never pushes them apart.
struct Rope {
  BodyId body_a = -1;
  BodyId body_b = -1;
  Vec2 local_anchor_a;
  Vec2 local_anchor_b;
  double max_length = 1.0;

  // diagnostics
  double last_impulse = 0.0;       // |impulse| applied in the most recent substep
  double total_abs_impulse = 0.0;  // accumulated since construction
};

// Rigid 3-DOF attachment: coincident anchor points plus locked relative angle.
struct WeldJoint {
  BodyId body_a = -1;
  BodyId body_b = -1;
  Vec2 local_anchor_a;
  Vec2 local_anchor_b;
  double reference_angle = 0.0;
};

// Static ground: x-monotone polyline heightfield.
struct Terrain {
  std::vector<Vec2> vertices;
  double friction = 100.0;
  double restitution = 0.1;

  // height of the polyline at x, clamped to the end segments
  double height_at(double x) const;
  // index of the segment whose x-span contains x (clamped to [0, n-2])
  int segment_at(double x) const;
};

struct Settings {
  double dt = 1.0 / 60.0;
  Vec2 gravity{0.0, -9.81};
  int velocity_iterations = 10;
  int position_iterations = 4;
  // Substeps per step(). Explicit spring forces are integrated stably only
  // when f * (dt/substeps) stays well below 2; the margin also keeps taut
  // ropes and deep contacts from ringing.
  int substeps = 10;
};

struct SimulationDiverged : std::runtime_error {
  explicit SimulationDiverged(int body)
      : std::runtime_error("simulation diverged: non-finite state on body " +
                           std::to_string(body)),
        body_index(body) {}
  int body_index;
};

// diagnostics captured for one solved contact point
struct ContactImpulse {
  double normal_impulse = 0.0;
  double tangent_impulse = 0.0;
  double friction = 0.0;
};

struct WorldWarnings {
  long degenerate_springs = 0;  // coincident anchors, force skipped
};

class World {
 public:
  World() = default;
  explicit World(const Settings& s) : settings_(s) {}

  Settings& settings() { return settings_; }
  const Settings& settings() const { return settings_; }

  BodyId add_body(Body b);
  int add_spring(SpringDamper s);
  int add_rope(Rope r);
  // anchor given in world coordinates; bodies must currently satisfy it
  int add_weld(BodyId a, BodyId b, const Vec2& world_anchor);
  void set_terrain(Terrain t);

  Body& body(BodyId id) { return bodies_.at(id); }
  const Body& body(BodyId id) const { return bodies_.at(id); }
  size_t body_count() const { return bodies_.size(); }

  SpringDamper& spring(int id) { return springs_.at(id); }
  const SpringDamper& spring(int id) const { return springs_.at(id); }
  size_t spring_count() const { return springs_.size(); }

  Rope& rope(int id) { return ropes_.at(id); }
  const Rope& rope(int id) const { return ropes_.at(id); }
  size_t rope_count() const { return ropes_.size(); }

  const WeldJoint& weld(int id) const { return welds_.at(id); }
  size_t weld_count() const { return welds_.size(); }

  const std::optional<Terrain>& terrain() const { return terrain_; }

  int allocate_collision_group() { return next_group_++; }

  // Derives k = m_eff * f^2 and c = 2 * d * sqrt(k * m_eff), where
  // m_eff is the reduced mass of the pair; a kinematic partner contributes as
  // infinite mass, so m_eff becomes the other body's mass. Errors when both
  // bodies are kinematic.
  SpringCoefficients spring_coefficients(const SpringDamper& s) const;

  // Axial spring-damper forces at the current state: first element acts on
  // body_a, second on body_b; equal and opposite.
  std::pair<Vec2, Vec2> spring_force(const SpringDamper& s) const;

  // Accumulates a center force to act over the next step().
  void apply_force(BodyId id, const Vec2& force);

  void set_rest_length(int spring_id, double length);

  // One dt advance: forces (gravity, pending applied, springs), semi-implicit
  // Euler velocity update with damping factor 1/(1+h*d), contact detection,
  // sequential-impulse velocity solve (welds, ropes, contacts), position
  // integration, then positional correction. Internally split into
  // settings.substeps equal substeps; pending applied forces act across the
  // whole step. Throws SimulationDiverged when any body state goes
  // non-finite.
  void step();

  long step_count() const { return step_count_; }
  double elapsed_time() const { return static_cast<double>(step_count_) * settings_.dt; }

  // True iff the body had at least one contact point with terrain or with a
  // body outside its collision group during the last solved step.
  bool contact_query(BodyId id) const { return external_contact_.at(id); }

  // contact diagnostics for the final substep of the last step()
  const std::vector<ContactImpulse>& last_contact_impulses() const {
    return contact_impulses_;
  }

  const WorldWarnings& warnings() const { return warnings_; }

 private:
  struct Contact;

  void substep(double h, bool first_substep);
  void find_contacts(std::vector<Contact>& out);
  void collide_body_terrain(BodyId id, std::vector<Contact>& out);
  void collide_body_body(BodyId a, BodyId b, std::vector<Contact>& out);
  void rebuild_pairs();
  void check_finite() const;

  Settings settings_;
  std::vector<Body> bodies_;
  std::vector<SpringDamper> springs_;
  std::vector<Rope> ropes_;
  std::vector<WeldJoint> welds_;
  std::optional<Terrain> terrain_;
  long step_count_ = 0;
  int next_group_ = 0;

  std::vector<Vec2> pending_force_;
  std::vector<Vec2> step_force_;
  std::vector<Vec2> accum_force_;
  std::vector<double> accum_torque_;
  std::vector<char> external_contact_;
  std::vector<std::pair<BodyId, BodyId>> collision_pairs_;
  bool pairs_dirty_ = true;
  double terrain_max_y_ = 0.0;
  std::vector<ContactImpulse> contact_impulses_;
  WorldWarnings warnings_;
};

}  // namespace vsim

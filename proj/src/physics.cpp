#include "vsim/physics.hpp"

#include <algorithm>
#include <cmath>

namespace vsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLinearSlop = 2e-3;          // allowed resting penetration, m
constexpr double kBaumgarte = 0.2;            // positional correction factor
constexpr double kMaxCorrection = 0.2;        // per-iteration position clamp, m
constexpr double kRestitutionThreshold = 1.0; // approach speed gate, m/s
constexpr double kMinSpringLength = 1e-9;

struct Mat33 {
  // symmetric 3x3, row major
  double a11, a12, a13, a22, a23, a33;

  // solves M * x = rhs via Cramer; returns false when near-singular
  bool solve(const Vec2& rhs_lin, double rhs_ang, Vec2& out_lin, double& out_ang) const {
    double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                 a13 * (a12 * a23 - a22 * a13);
    if (std::abs(det) < 1e-12) return false;
    double inv = 1.0 / det;
    double bx = rhs_lin.x, by = rhs_lin.y, bz = rhs_ang;
    out_lin.x = inv * (bx * (a22 * a33 - a23 * a23) - a12 * (by * a33 - a23 * bz) +
                       a13 * (by * a23 - a22 * bz));
    out_lin.y = inv * (a11 * (by * a33 - a23 * bz) - bx * (a12 * a33 - a13 * a23) +
                       a13 * (a12 * bz - by * a13));
    out_ang = inv * (a11 * (a22 * bz - by * a23) - a12 * (a12 * bz - by * a13) +
                     bx * (a12 * a23 - a22 * a13));
    return true;
  }
};

}  // namespace

double Terrain::height_at(double x) const {
  int i = segment_at(x);
  const Vec2& p1 = vertices[i];
  const Vec2& p2 = vertices[i + 1];
  double t = (x - p1.x) / (p2.x - p1.x);
  return p1.y + t * (p2.y - p1.y);
}

int Terrain::segment_at(double x) const {
  int n = static_cast<int>(vertices.size());
  int lo = 0, hi = n - 2;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (vertices[mid].x <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

struct World::Contact {
  BodyId a = -1;  // -1 means terrain
  BodyId b = -1;
  Vec2 normal;  // unit, from a toward b
  Vec2 point;
  double penetration = 0.0;
  Vec2 local_a;  // anchor in a's frame; world point when a is terrain
  Vec2 local_b;
  double friction = 0.0;
  double restitution = 0.0;
  // solver scratch
  Vec2 ra, rb;
  double normal_mass = 0.0;
  double tangent_mass = 0.0;
  double bias = 0.0;
  double jn = 0.0;
  double jt = 0.0;
};

BodyId World::add_body(Body b) {
  if (b.mass <= 0.0) throw std::invalid_argument("Body: mass must be positive");
  if (b.half_side <= 0.0) throw std::invalid_argument("Body: half_side must be positive");
  double side = 2.0 * b.half_side;
  b.inertia = b.mass * side * side / 6.0;
  if (b.kinematic) {
    b.inv_mass = 0.0;
    b.inv_inertia = 0.0;
  } else {
    b.inv_mass = 1.0 / b.mass;
    b.inv_inertia = 1.0 / b.inertia;
  }
  bodies_.push_back(b);
  pending_force_.push_back({0.0, 0.0});
  step_force_.push_back({0.0, 0.0});
  accum_force_.push_back({0.0, 0.0});
  accum_torque_.push_back(0.0);
  external_contact_.push_back(0);
  pairs_dirty_ = true;
  return static_cast<BodyId>(bodies_.size() - 1);
}

SpringCoefficients World::spring_coefficients(const SpringDamper& s) const {
  const Body& a = bodies_.at(s.body_a);
  const Body& b = bodies_.at(s.body_b);
  if (a.kinematic && b.kinematic) {
    throw std::invalid_argument("SpringDamper: both bodies kinematic");
  }
  double m_eff;
  if (a.kinematic)
    m_eff = b.mass;
  else if (b.kinematic)
    m_eff = a.mass;
  else
    m_eff = a.mass * b.mass / (a.mass + b.mass);
  // The frequency parameter acts as the stiffness rate omega directly.
  // Reading it through a 2*pi conversion makes every spring ~40x stiffer and
  // a 10x4 beam of default voxels then deflects centimeters under a 30 N tip
  // load, instead of the several meters the material model is built around.
  double omega = s.frequency;
  SpringCoefficients out;
  out.k = m_eff * omega * omega;
  out.c = 2.0 * s.damping_ratio * std::sqrt(out.k * m_eff);
  return out;
}

int World::add_spring(SpringDamper s) {
  if (s.body_a == s.body_b) throw std::invalid_argument("SpringDamper: bodies must differ");
  if (s.rest_length <= 0.0) throw std::invalid_argument("SpringDamper: rest length must be positive");
  SpringCoefficients kc = spring_coefficients(s);
  s.k = kc.k;
  s.c = kc.c;
  springs_.push_back(s);
  return static_cast<int>(springs_.size() - 1);
}

int World::add_rope(Rope r) {
  if (r.body_a == r.body_b) throw std::invalid_argument("Rope: bodies must differ");
  if (r.max_length <= 0.0) throw std::invalid_argument("Rope: max length must be positive");
  bodies_.at(r.body_a);
  bodies_.at(r.body_b);
  ropes_.push_back(r);
  return static_cast<int>(ropes_.size() - 1);
}

int World::add_weld(BodyId a, BodyId b, const Vec2& world_anchor) {
  if (a == b) throw std::invalid_argument("WeldJoint: bodies must differ");
  const Body& ba = bodies_.at(a);
  const Body& bb = bodies_.at(b);
  WeldJoint w;
  w.body_a = a;
  w.body_b = b;
  w.local_anchor_a = ba.local_point(world_anchor);
  w.local_anchor_b = bb.local_point(world_anchor);
  w.reference_angle = bb.rotation - ba.rotation;
  welds_.push_back(w);
  return static_cast<int>(welds_.size() - 1);
}

void World::set_terrain(Terrain t) {
  if (t.vertices.size() < 2) throw std::invalid_argument("Terrain: needs at least 2 vertices");
  for (size_t i = 1; i < t.vertices.size(); ++i) {
    if (t.vertices[i].x <= t.vertices[i - 1].x) {
      throw std::invalid_argument("Terrain: vertices must be strictly x-increasing");
    }
  }
  terrain_max_y_ = t.vertices[0].y;
  for (const Vec2& v : t.vertices) terrain_max_y_ = std::max(terrain_max_y_, v.y);
  terrain_ = std::move(t);
}

std::pair<Vec2, Vec2> World::spring_force(const SpringDamper& s) const {
  const Body& a = bodies_.at(s.body_a);
  const Body& b = bodies_.at(s.body_b);
  Vec2 pa = a.world_point(s.local_anchor_a);
  Vec2 pb = b.world_point(s.local_anchor_b);
  Vec2 d = pb - pa;
  double len = d.length();
  if (len < kMinSpringLength) return {{0.0, 0.0}, {0.0, 0.0}};
  Vec2 n = d / len;
  double stretch = len - s.rest_length;
  double rel_v = (b.velocity_at(pb) - a.velocity_at(pa)).dot(n);
  double magnitude = -s.k * stretch - s.c * rel_v;  // along n, acting on b
  Vec2 fb = n * magnitude;
  return {-fb, fb};
}

void World::apply_force(BodyId id, const Vec2& force) {
  bodies_.at(id);
  pending_force_[id] += force;
}

void World::set_rest_length(int spring_id, double length) {
  if (length <= 0.0) throw std::invalid_argument("set_rest_length: length must be positive");
  springs_.at(spring_id).rest_length = length;
}

void World::rebuild_pairs() {
  collision_pairs_.clear();
  int n = static_cast<int>(bodies_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Body& a = bodies_[i];
      const Body& b = bodies_[j];
      if (a.kinematic && b.kinematic) continue;
      if (a.collision_group >= 0 && a.collision_group == b.collision_group) continue;
      collision_pairs_.push_back({i, j});
    }
  }
  pairs_dirty_ = false;
}

void World::collide_body_terrain(BodyId id, std::vector<Contact>& out) {
  const Body& b = bodies_[id];
  const Terrain& t = *terrain_;
  double radius = b.half_side * 1.4142135623730951;
  if (b.position.y - radius > terrain_max_y_) return;

  double mu = std::sqrt(b.friction * t.friction);
  double rest = std::max(b.restitution, t.restitution);

  // square vertices below the heightfield
  const double hs = b.half_side;
  const Vec2 corners[4] = {{-hs, -hs}, {hs, -hs}, {hs, hs}, {-hs, hs}};
  for (const Vec2& lc : corners) {
    Vec2 v = b.world_point(lc);
    int seg = t.segment_at(v.x);
    const Vec2& p1 = t.vertices[seg];
    const Vec2& p2 = t.vertices[seg + 1];
    Vec2 n = (p2 - p1).perp().normalized();  // points up for x-increasing segments
    double signed_dist = (v - p1).dot(n);
    if (signed_dist < 0.0) {
      Contact c;
      c.a = -1;
      c.b = id;
      c.normal = n;
      c.point = v;
      c.penetration = -signed_dist;
      c.local_a = v;
      c.local_b = lc;
      c.friction = mu;
      c.restitution = rest;
      out.push_back(c);
    }
  }

  // terrain vertices poking into the square
  int n_verts = static_cast<int>(t.vertices.size());
  double x_lo = b.position.x - radius;
  double x_hi = b.position.x + radius;
  int first = static_cast<int>(std::lower_bound(t.vertices.begin(), t.vertices.end(), x_lo,
                                                [](const Vec2& v, double x) { return v.x < x; }) -
                               t.vertices.begin());
  for (int i = first; i < n_verts && t.vertices[i].x <= x_hi; ++i) {
    // end vertices have no interior angle to poke with
    if (i == 0 || i == n_verts - 1) continue;
    Vec2 lp = b.local_point(t.vertices[i]);
    if (std::abs(lp.x) >= hs || std::abs(lp.y) >= hs) continue;
    double d_right = hs - lp.x, d_left = hs + lp.x;
    double d_top = hs - lp.y, d_bottom = hs + lp.y;
    double depth = d_right;
    Vec2 push_local{1.0, 0.0};  // square moves +x so the vertex exits through its +x face
    if (d_left < depth) {
      depth = d_left;
      push_local = {-1.0, 0.0};
    }
    if (d_top < depth) {
      depth = d_top;
      push_local = {0.0, 1.0};
    }
    if (d_bottom < depth) {
      depth = d_bottom;
      push_local = {0.0, -1.0};
    }
    // exiting through face F means the square translates along -F's outward normal
    push_local = -push_local;
    Contact c;
    c.a = -1;
    c.b = id;
    c.normal = push_local.rotated(b.rotation);
    c.point = t.vertices[i];
    c.penetration = depth;
    c.local_a = t.vertices[i];
    c.local_b = lp;
    c.friction = mu;
    c.restitution = rest;
    out.push_back(c);
  }
}

void World::collide_body_body(BodyId ia, BodyId ib, std::vector<Contact>& out) {
  const Body& A = bodies_[ia];
  const Body& B = bodies_[ib];
  Vec2 d = B.position - A.position;
  double r_sum = (A.half_side + B.half_side) * 1.4142135623730951;
  if (d.length_sq() > r_sum * r_sum) return;

  Vec2 axes[4] = {Vec2{1, 0}.rotated(A.rotation), Vec2{0, 1}.rotated(A.rotation),
                  Vec2{1, 0}.rotated(B.rotation), Vec2{0, 1}.rotated(B.rotation)};
  double best_sep = -1e30;
  int best_axis = -1;
  for (int i = 0; i < 4; ++i) {
    const Vec2& u = axes[i];
    double ra = A.half_side * (std::abs(u.dot(axes[0])) + std::abs(u.dot(axes[1])));
    double rb = B.half_side * (std::abs(u.dot(axes[2])) + std::abs(u.dot(axes[3])));
    double sep = std::abs(u.dot(d)) - (ra + rb);
    if (sep > 0.0) return;
    if (sep > best_sep) {
      best_sep = sep;
      best_axis = i;
    }
  }

  bool ref_is_a = best_axis < 2;
  const Body& ref = ref_is_a ? A : B;
  const Body& inc = ref_is_a ? B : A;
  Vec2 ref_to_inc = inc.position - ref.position;
  Vec2 n = axes[best_axis];
  if (n.dot(ref_to_inc) < 0.0) n = -n;

  // incident face: the one facing most against n
  Vec2 inc_x = Vec2{1, 0}.rotated(inc.rotation);
  Vec2 inc_y = Vec2{0, 1}.rotated(inc.rotation);
  Vec2 inc_normals[4] = {inc_x, -inc_x, inc_y, -inc_y};
  int inc_face = 0;
  double min_dot = 1e30;
  for (int i = 0; i < 4; ++i) {
    double dd = inc_normals[i].dot(n);
    if (dd < min_dot) {
      min_dot = dd;
      inc_face = i;
    }
  }
  Vec2 f = inc_normals[inc_face];
  Vec2 side = f.perp();
  Vec2 face_center = inc.position + f * inc.half_side;
  Vec2 p1 = face_center + side * inc.half_side;
  Vec2 p2 = face_center - side * inc.half_side;

  // clip incident segment to the reference face's side planes
  Vec2 sd = n.perp();
  auto clip = [&](Vec2& q1, Vec2& q2, const Vec2& dir, double limit) -> bool {
    double d1 = dir.dot(q1 - ref.position) - limit;
    double d2 = dir.dot(q2 - ref.position) - limit;
    if (d1 > 0.0 && d2 > 0.0) return false;
    if (d1 > 0.0) q1 = q1 + (q2 - q1) * (d1 / (d1 - d2));
    if (d2 > 0.0) q2 = q2 + (q2 - q1) * (d2 / (d2 - d1));
    return true;
  };
  if (!clip(p1, p2, sd, ref.half_side)) return;
  if (!clip(p1, p2, -sd, ref.half_side)) return;

  double mu = std::sqrt(A.friction * B.friction);
  double rest = std::max(A.restitution, B.restitution);
  Vec2 ref_face_center = ref.position + n * ref.half_side;
  for (const Vec2& p : {p1, p2}) {
    double sep = (p - ref_face_center).dot(n);
    if (sep >= 0.0) continue;
    Contact c;
    c.a = ref_is_a ? ia : ib;
    c.b = ref_is_a ? ib : ia;
    c.normal = n;
    c.point = p;
    c.penetration = -sep;
    c.local_a = bodies_[c.a].local_point(p);
    c.local_b = bodies_[c.b].local_point(p);
    c.friction = mu;
    c.restitution = rest;
    out.push_back(c);
  }
}

void World::find_contacts(std::vector<Contact>& out) {
  out.clear();
  if (terrain_) {
    for (BodyId i = 0; i < static_cast<BodyId>(bodies_.size()); ++i) {
      if (!bodies_[i].kinematic) collide_body_terrain(i, out);
    }
  }
  for (const auto& [a, b] : collision_pairs_) {
    collide_body_body(a, b, out);
  }
}

void World::substep(double h, bool first_substep) {
  const Vec2 gravity = settings_.gravity;

  // forces: user-applied (constant over the step) plus spring-dampers
  for (size_t i = 0; i < bodies_.size(); ++i) {
    accum_force_[i] = step_force_[i];
    accum_torque_[i] = 0.0;
  }
  for (SpringDamper& s : springs_) {
    const Body& a = bodies_[s.body_a];
    const Body& b = bodies_[s.body_b];
    Vec2 pa = a.world_point(s.local_anchor_a);
    Vec2 pb = b.world_point(s.local_anchor_b);
    Vec2 d = pb - pa;
    double len = d.length();
    if (len < kMinSpringLength) {
      warnings_.degenerate_springs += 1;
      continue;
    }
    Vec2 n = d / len;
    double stretch = len - s.rest_length;
    double rel_v = (b.velocity_at(pb) - a.velocity_at(pa)).dot(n);
    Vec2 fb = n * (-s.k * stretch - s.c * rel_v);
    accum_force_[s.body_b] += fb;
    accum_torque_[s.body_b] += (pb - b.position).cross(fb);
    accum_force_[s.body_a] -= fb;
    accum_torque_[s.body_a] -= (pa - a.position).cross(fb);
  }

  for (size_t i = 0; i < bodies_.size(); ++i) {
    Body& b = bodies_[i];
    if (b.kinematic) continue;
    b.linear_velocity += (accum_force_[i] * b.inv_mass + gravity) * h;
    b.angular_velocity += accum_torque_[i] * b.inv_inertia * h;
    if (first_substep) {
      // damping contract: one step scales velocity by exactly 1/(1 + dt*d)
      b.linear_velocity *= 1.0 / (1.0 + settings_.dt * b.linear_damping);
      b.angular_velocity *= 1.0 / (1.0 + settings_.dt * b.angular_damping);
    }
  }

  static thread_local std::vector<Contact> contacts;
  find_contacts(contacts);
  for (const Contact& c : contacts) external_contact_[c.b] = 1;
  for (const Contact& c : contacts) {
    if (c.a >= 0) external_contact_[c.a] = 1;
  }

  // prepare contacts
  for (Contact& c : contacts) {
    const Body& bb = bodies_[c.b];
    double im_a = 0.0, ii_a = 0.0;
    Vec2 va{0, 0};
    double wa = 0.0;
    if (c.a >= 0) {
      const Body& ba = bodies_[c.a];
      im_a = ba.inv_mass;
      ii_a = ba.inv_inertia;
      va = ba.linear_velocity;
      wa = ba.angular_velocity;
      c.ra = c.point - ba.position;
    } else {
      c.ra = {0.0, 0.0};
    }
    c.rb = c.point - bb.position;
    Vec2 t = c.normal.perp();
    double rna = c.ra.cross(c.normal), rnb = c.rb.cross(c.normal);
    double rta = c.ra.cross(t), rtb = c.rb.cross(t);
    double kn = im_a + bb.inv_mass + ii_a * rna * rna + bb.inv_inertia * rnb * rnb;
    double kt = im_a + bb.inv_mass + ii_a * rta * rta + bb.inv_inertia * rtb * rtb;
    c.normal_mass = kn > 0.0 ? 1.0 / kn : 0.0;
    c.tangent_mass = kt > 0.0 ? 1.0 / kt : 0.0;
    Vec2 rel = (bb.linear_velocity + angular_cross(bb.angular_velocity, c.rb)) -
               (va + angular_cross(wa, c.ra));
    double vn0 = rel.dot(c.normal);
    c.bias = vn0 < -kRestitutionThreshold ? -c.restitution * vn0 : 0.0;
    c.jn = 0.0;
    c.jt = 0.0;
  }

  // prepare welds
  struct WeldScratch {
    Vec2 ra, rb;
    Mat33 k;
  };
  static thread_local std::vector<WeldScratch> weld_scratch;
  weld_scratch.resize(welds_.size());
  for (size_t i = 0; i < welds_.size(); ++i) {
    const WeldJoint& w = welds_[i];
    const Body& a = bodies_[w.body_a];
    const Body& b = bodies_[w.body_b];
    WeldScratch& ws = weld_scratch[i];
    ws.ra = w.local_anchor_a.rotated(a.rotation);
    ws.rb = w.local_anchor_b.rotated(b.rotation);
    double im = a.inv_mass + b.inv_mass;
    double iia = a.inv_inertia, iib = b.inv_inertia;
    ws.k.a11 = im + iia * ws.ra.y * ws.ra.y + iib * ws.rb.y * ws.rb.y;
    ws.k.a12 = -iia * ws.ra.x * ws.ra.y - iib * ws.rb.x * ws.rb.y;
    ws.k.a13 = -iia * ws.ra.y - iib * ws.rb.y;
    ws.k.a22 = im + iia * ws.ra.x * ws.ra.x + iib * ws.rb.x * ws.rb.x;
    ws.k.a23 = iia * ws.ra.x + iib * ws.rb.x;
    ws.k.a33 = iia + iib;
  }

  // prepare ropes
  struct RopeScratch {
    bool active = false;
    Vec2 n, ra, rb;
    double mass = 0.0;
    double bias = 0.0;
    double j_acc = 0.0;
  };
  static thread_local std::vector<RopeScratch> rope_scratch;
  rope_scratch.resize(ropes_.size());
  for (size_t i = 0; i < ropes_.size(); ++i) {
    Rope& r = ropes_[i];
    const Body& a = bodies_[r.body_a];
    const Body& b = bodies_[r.body_b];
    RopeScratch& rs = rope_scratch[i];
    Vec2 pa = a.world_point(r.local_anchor_a);
    Vec2 pb = b.world_point(r.local_anchor_b);
    Vec2 d = pb - pa;
    double dist = d.length();
    rs.active = dist > r.max_length;
    rs.j_acc = 0.0;
    if (!rs.active) {
      r.last_impulse = 0.0;
      continue;
    }
    rs.n = d / dist;
    rs.ra = pa - a.position;
    rs.rb = pb - b.position;
    double rna = rs.ra.cross(rs.n), rnb = rs.rb.cross(rs.n);
    double kn = a.inv_mass + b.inv_mass + a.inv_inertia * rna * rna + b.inv_inertia * rnb * rnb;
    rs.mass = kn > 0.0 ? 1.0 / kn : 0.0;
    rs.bias = kBaumgarte * (dist - r.max_length) / h;
  }

  // velocity iterations
  for (int iter = 0; iter < settings_.velocity_iterations; ++iter) {
    for (size_t i = 0; i < welds_.size(); ++i) {
      const WeldJoint& w = welds_[i];
      const WeldScratch& ws = weld_scratch[i];
      Body& a = bodies_[w.body_a];
      Body& b = bodies_[w.body_b];
      Vec2 cdot_lin = (b.linear_velocity + angular_cross(b.angular_velocity, ws.rb)) -
                      (a.linear_velocity + angular_cross(a.angular_velocity, ws.ra));
      double cdot_ang = b.angular_velocity - a.angular_velocity;
      Vec2 lam_lin;
      double lam_ang;
      if (!ws.k.solve(-cdot_lin, -cdot_ang, lam_lin, lam_ang)) continue;
      a.linear_velocity -= lam_lin * a.inv_mass;
      a.angular_velocity -= a.inv_inertia * (ws.ra.cross(lam_lin) + lam_ang);
      b.linear_velocity += lam_lin * b.inv_mass;
      b.angular_velocity += b.inv_inertia * (ws.rb.cross(lam_lin) + lam_ang);
    }
    for (size_t i = 0; i < ropes_.size(); ++i) {
      RopeScratch& rs = rope_scratch[i];
      if (!rs.active) continue;
      const Rope& r = ropes_[i];
      Body& a = bodies_[r.body_a];
      Body& b = bodies_[r.body_b];
      Vec2 rel = (b.linear_velocity + angular_cross(b.angular_velocity, rs.rb)) -
                 (a.linear_velocity + angular_cross(a.angular_velocity, rs.ra));
      double cdot = rel.dot(rs.n);
      double dj = -rs.mass * (cdot + rs.bias);
      double new_acc = std::min(0.0, rs.j_acc + dj);
      dj = new_acc - rs.j_acc;
      rs.j_acc = new_acc;
      Vec2 p = rs.n * dj;
      a.linear_velocity -= p * a.inv_mass;
      a.angular_velocity -= a.inv_inertia * rs.ra.cross(p);
      b.linear_velocity += p * b.inv_mass;
      b.angular_velocity += b.inv_inertia * rs.rb.cross(p);
    }
    for (Contact& c : contacts) {
      Body& b = bodies_[c.b];
      Body* a = c.a >= 0 ? &bodies_[c.a] : nullptr;
      Vec2 va = a ? a->linear_velocity : Vec2{0, 0};
      double wa = a ? a->angular_velocity : 0.0;

      Vec2 rel = (b.linear_velocity + angular_cross(b.angular_velocity, c.rb)) -
                 (va + angular_cross(wa, c.ra));
      double vn = rel.dot(c.normal);
      double dj = -c.normal_mass * (vn - c.bias);
      double new_jn = std::max(0.0, c.jn + dj);
      dj = new_jn - c.jn;
      c.jn = new_jn;
      Vec2 p = c.normal * dj;
      if (a) {
        a->linear_velocity -= p * a->inv_mass;
        a->angular_velocity -= a->inv_inertia * c.ra.cross(p);
      }
      b.linear_velocity += p * b.inv_mass;
      b.angular_velocity += b.inv_inertia * c.rb.cross(p);

      va = a ? a->linear_velocity : Vec2{0, 0};
      wa = a ? a->angular_velocity : 0.0;
      rel = (b.linear_velocity + angular_cross(b.angular_velocity, c.rb)) -
            (va + angular_cross(wa, c.ra));
      Vec2 t = c.normal.perp();
      double vt = rel.dot(t);
      double djt = -c.tangent_mass * vt;
      double max_f = c.friction * c.jn;
      double new_jt = std::clamp(c.jt + djt, -max_f, max_f);
      djt = new_jt - c.jt;
      c.jt = new_jt;
      Vec2 pt = t * djt;
      if (a) {
        a->linear_velocity -= pt * a->inv_mass;
        a->angular_velocity -= a->inv_inertia * c.ra.cross(pt);
      }
      b.linear_velocity += pt * b.inv_mass;
      b.angular_velocity += b.inv_inertia * c.rb.cross(pt);
    }
  }

  for (size_t i = 0; i < ropes_.size(); ++i) {
    Rope& r = ropes_[i];
    double j = std::abs(rope_scratch[i].j_acc);
    r.last_impulse = j;
    r.total_abs_impulse += j;
  }

  // integrate positions; kinematic bodies move by their preset velocity
  for (Body& b : bodies_) {
    b.position += b.linear_velocity * h;
    b.rotation += b.angular_velocity * h;
  }

  // positional correction
  for (int iter = 0; iter < settings_.position_iterations; ++iter) {
    for (const WeldJoint& w : welds_) {
      Body& a = bodies_[w.body_a];
      Body& b = bodies_[w.body_b];
      Vec2 ra = w.local_anchor_a.rotated(a.rotation);
      Vec2 rb = w.local_anchor_b.rotated(b.rotation);
      Vec2 c_lin = (b.position + rb) - (a.position + ra);
      double c_ang = b.rotation - a.rotation - w.reference_angle;
      double im = a.inv_mass + b.inv_mass;
      double iia = a.inv_inertia, iib = b.inv_inertia;
      Mat33 k;
      k.a11 = im + iia * ra.y * ra.y + iib * rb.y * rb.y;
      k.a12 = -iia * ra.x * ra.y - iib * rb.x * rb.y;
      k.a13 = -iia * ra.y - iib * rb.y;
      k.a22 = im + iia * ra.x * ra.x + iib * rb.x * rb.x;
      k.a23 = iia * ra.x + iib * rb.x;
      k.a33 = iia + iib;
      Vec2 lam_lin;
      double lam_ang;
      if (!k.solve(-c_lin * kBaumgarte, -c_ang * kBaumgarte, lam_lin, lam_ang)) continue;
      a.position -= lam_lin * a.inv_mass;
      a.rotation -= iia * (ra.cross(lam_lin) + lam_ang);
      b.position += lam_lin * b.inv_mass;
      b.rotation += iib * (rb.cross(lam_lin) + lam_ang);
    }
    for (const Contact& c : contacts) {
      Body& b = bodies_[c.b];
      Body* a = c.a >= 0 ? &bodies_[c.a] : nullptr;
      Vec2 pa_w = a ? a->world_point(c.local_a) : c.local_a;
      Vec2 pb_w = b.world_point(c.local_b);
      double sep = (pb_w - pa_w).dot(c.normal) - c.penetration;
      double corr = std::clamp(kBaumgarte * (sep + kLinearSlop), -kMaxCorrection, 0.0);
      if (corr >= 0.0) continue;
      Vec2 ra = a ? pa_w - a->position : Vec2{0, 0};
      Vec2 rb = pb_w - b.position;
      double rna = ra.cross(c.normal), rnb = rb.cross(c.normal);
      double im_a = a ? a->inv_mass : 0.0;
      double ii_a = a ? a->inv_inertia : 0.0;
      double kn = im_a + b.inv_mass + ii_a * rna * rna + b.inv_inertia * rnb * rnb;
      if (kn <= 0.0) continue;
      double lam = -corr / kn;
      Vec2 p = c.normal * lam;
      if (a) {
        a->position -= p * im_a;
        a->rotation -= ii_a * ra.cross(p);
      }
      b.position += p * b.inv_mass;
      b.rotation += b.inv_inertia * rb.cross(p);
    }
  }

  contact_impulses_.clear();
  for (const Contact& c : contacts) {
    contact_impulses_.push_back({c.jn, c.jt, c.friction});
  }
}

void World::check_finite() const {
  for (size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    if (!b.position.is_finite() || !std::isfinite(b.rotation) || !b.linear_velocity.is_finite() ||
        !std::isfinite(b.angular_velocity)) {
      throw SimulationDiverged(static_cast<int>(i));
    }
  }
}

void World::step() {
  if (settings_.dt <= 0.0) throw std::invalid_argument("Settings: dt must be positive");
  if (settings_.substeps < 1) throw std::invalid_argument("Settings: substeps must be >= 1");
  if (pairs_dirty_) rebuild_pairs();
  step_force_ = pending_force_;
  for (Vec2& f : pending_force_) f = {0.0, 0.0};
  std::fill(external_contact_.begin(), external_contact_.end(), 0);
  double h = settings_.dt / static_cast<double>(settings_.substeps);
  for (int s = 0; s < settings_.substeps; ++s) substep(h, s == 0);
  step_count_ += 1;
  check_finite();
}

}  // namespace vsim

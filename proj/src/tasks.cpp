#include "vsim/tasks.hpp"

#include <chrono>
#include <cmath>

#include "vsim/rng.hpp"

namespace vsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double terrain_max_height(const Terrain& t, double x0, double x1) {
  double m = std::max(t.height_at(x0), t.height_at(x1));
  for (const Vec2& v : t.vertices) {
    if (v.x > x0 && v.x < x1) m = std::max(m, v.y);
  }
  return m;
}

void snapshot_corners(const World& world, const Voxel& v, VoxelSnapshot& out) {
  int k = 0;
  for (BodyId id : v.masses) {
    const Body& b = world.body(id);
    const double hs = b.half_side;
    const Vec2 local[4] = {{-hs, -hs}, {hs, -hs}, {hs, hs}, {-hs, hs}};
    for (const Vec2& lc : local) out.corners[k++] = b.world_point(lc);
  }
}

}  // namespace

Terrain make_terrain(const TerrainConfig& cfg) {
  if (cfg.length <= 0.0) throw std::invalid_argument("TerrainConfig: length must be > 0");
  Terrain t;
  t.friction = cfg.friction;
  t.restitution = cfg.restitution;
  if (cfg.kind == TerrainConfig::Kind::Flat) {
    t.vertices = {{-cfg.length / 2.0, 0.0}, {cfg.length / 2.0, 0.0}};
    return t;
  }
  if (cfg.segment_length <= 0.0) {
    throw std::invalid_argument("TerrainConfig: segment_length must be > 0");
  }
  if (cfg.amplitude < 0.0) throw std::invalid_argument("TerrainConfig: amplitude must be >= 0");
  int segments = std::max(1, static_cast<int>(std::floor(cfg.length / cfg.segment_length)));
  SeededRng rng(cfg.seed);
  for (int i = 0; i <= segments; ++i) {
    double x = -cfg.length / 2.0 + i * cfg.segment_length;
    double y = rng.uniform(-cfg.amplitude, cfg.amplitude);
    t.vertices.push_back({x, y});
  }
  t.vertices.front().y += 3.0 * cfg.amplitude;
  t.vertices.back().y += 3.0 * cfg.amplitude;
  return t;
}

Outcome run_locomotion(const VSRDescription& desc, const ControllerSpec& controller,
                       const LocomotionConfig& config, const SnapshotSink& sink,
                       double* stepping_seconds) {
  World world(config.settings);
  world.set_terrain(make_terrain(config.terrain));

  int min_x = desc.width(), min_y = desc.height(), max_x = -1;
  double side = 0.0;
  for (int y = 0; y < desc.height(); ++y) {
    for (int x = 0; x < desc.width(); ++x) {
      if (!desc.occupied(x, y)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      if (side == 0.0) side = desc.at(x, y)->side_length;
    }
  }
  if (max_x < 0) throw std::invalid_argument("run_locomotion: empty description");

  // left edge at x = 0, lowest mass drop_height above the terrain below
  double origin_x = side / 2.0 - min_x * side;
  double foot_x0 = 0.0;
  double foot_x1 = (max_x - min_x + 1) * side;
  double ground = terrain_max_height(*world.terrain(), foot_x0, foot_x1);
  double origin_y = ground + config.drop_height + side / 2.0 - min_y * side;

  VSR vsr = assemble_vsr(world, desc, {origin_x, origin_y});
  Controller ctrl(controller, desc);

  const double dt = config.settings.dt;
  const long n_steps = std::lround(config.duration / dt);
  const int period = config.control_interval + 1;
  if (period < 1) throw std::invalid_argument("LocomotionConfig: control_interval must be >= 0");

  double x0 = vsr_center(world, vsr).x;
  double sum_y = 0.0, sum_ctrl = 0.0;
  long n_control = 0;
  bool diverged = false;

  auto t_begin = std::chrono::steady_clock::now();
  for (long s = 0;; ++s) {
    if (s % period == 0) {
      double t = s * dt;
      std::vector<double> values = ctrl.apply(world, vsr, t);
      n_control += 1;
      Vec2 c = vsr_center(world, vsr);
      sum_y += c.y;
      double sq = 0.0;
      for (double v : values) sq += v * v;
      sum_ctrl += sq;
      if (sink) {
        Snapshot snap;
        snap.t = t;
        snap.center = c;
        snap.voxels.reserve(vsr.cells.size());
        for (size_t i = 0; i < vsr.cells.size(); ++i) {
          auto [x, y] = vsr.cells[i];
          Voxel& vox = *vsr.voxels.at(x, y);
          VoxelSnapshot vs;
          vs.x = x;
          vs.y = y;
          snapshot_corners(world, vox, vs);
          vs.area_ratio = voxel_area_ratio(world, vox);
          vs.control = values[i];
          vs.touching = voxel_touching(world, vox);
          snap.voxels.push_back(vs);
        }
        sink(snap);
      }
    }
    if (s == n_steps) break;
    vsr_apply_actuation_forces(world, vsr);
    try {
      world.step();
    } catch (const SimulationDiverged&) {
      diverged = true;
      break;
    }
  }
  auto t_end = std::chrono::steady_clock::now();
  if (stepping_seconds) {
    *stepping_seconds = std::chrono::duration<double>(t_end - t_begin).count();
  }

  Outcome out;
  out.diverged = diverged;
  out.control_steps = n_control;
  double x_end = vsr_center(world, vsr).x;
  for (MeasureKind m : config.measures) {
    double v = 0.0;
    if (diverged) {
      // worst case: no travel, grounded posture, saturated actuation
      v = m == MeasureKind::AverageSquaredControlSum ? vsr.voxel_count() : 0.0;
    } else {
      switch (m) {
        case MeasureKind::TravelVelocity:
          v = (x_end - x0) / config.duration;
          break;
        case MeasureKind::AverageYCenter:
          v = sum_y / static_cast<double>(n_control);
          break;
        case MeasureKind::AverageSquaredControlSum:
          v = sum_ctrl / static_cast<double>(n_control);
          break;
      }
    }
    out.values.push_back(v);
  }
  return out;
}

namespace {

std::vector<std::pair<double, double>> run_cantilever(const CantileverConfig& config,
                                                      bool collect_series) {
  if (config.w < 1 || config.h < 1) {
    throw std::invalid_argument("CantileverConfig: beam dimensions must be positive");
  }
  Settings settings = config.settings;
  settings.gravity = {0.0, 0.0};
  World world(settings);

  VSRDescription desc(config.w, config.h);
  for (int y = 0; y < config.h; ++y) {
    for (int x = 0; x < config.w; ++x) desc.at(x, y) = config.material;
  }
  VSR vsr = assemble_vsr(world, desc, {0.0, 0.0});

  const double side = config.material.side_length;
  Body wall;
  wall.kinematic = true;
  wall.position = {-side, (config.h - 1) * side / 2.0};
  wall.half_side = 0.5;
  wall.collision_group = vsr.collision_group;
  BodyId wall_id = world.add_body(wall);
  for (int y = 0; y < config.h; ++y) {
    const Voxel& v = *vsr.voxels.at(0, y);
    for (int mi : {0, 3}) {  // the two left masses
      world.add_weld(wall_id, v.masses[mi], world.body(v.masses[mi]).position);
    }
  }

  std::vector<BodyId> loaded;
  for (int y = 0; y < config.h; ++y) {
    const Voxel& v = *vsr.voxels.at(config.w - 1, y);
    loaded.push_back(v.masses[1]);  // the two right masses
    loaded.push_back(v.masses[2]);
  }
  const double per_mass = config.force / (2.0 * config.h);

  auto tip_y = [&]() {
    double sum = 0.0;
    for (int y = 0; y < config.h; ++y) {
      sum += voxel_center(world, *vsr.voxels.at(config.w - 1, y)).y;
    }
    return sum / config.h;
  };
  const double rest_y = tip_y();

  const double dt = settings.dt;
  const long n_steps = std::lround(config.total_time / dt);
  const int period = config.control_interval + 1;
  std::vector<std::pair<double, double>> series;
  for (long s = 0;; ++s) {
    if (collect_series && s % period == 0) {
      series.push_back({s * dt, tip_y() - rest_y});
    }
    if (s == n_steps) break;
    double t = s * dt;
    bool load_on = config.impulse_duration <= 0.0 || t < config.impulse_duration;
    if (load_on) {
      for (BodyId id : loaded) world.apply_force(id, {0.0, -per_mass});
    }
    world.step();
  }
  if (!collect_series) series.push_back({config.total_time, tip_y() - rest_y});
  return series;
}

}  // namespace

double run_cantilever_static(const CantileverConfig& config) {
  return run_cantilever(config, false).back().second;
}

std::vector<std::pair<double, double>> run_cantilever_dynamic(const CantileverConfig& config) {
  return run_cantilever(config, true);
}

PerfReport measure_svsps(const PerfConfig& config) {
  if (config.w < 1) throw std::invalid_argument("PerfConfig: w must be >= 1");
  VSRDescription desc(config.w, 3);
  MaterialSpec mat;
  TimeFunctionGrid functions(config.w, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < config.w; ++x) {
      desc.at(x, y) = mat;
      functions.at(x, y) = TimeFunctionSpec{1.0, -1.0, kPi * x / config.w, 0.0, 0.0, 0.0};
    }
  }
  LocomotionConfig loco;
  loco.duration = config.duration;
  loco.terrain = config.terrain;
  loco.settings = config.settings;
  loco.measures = {};
  double tau = 0.0;
  run_locomotion(desc, ControllerSpec(functions), loco, nullptr, &tau);

  PerfReport report;
  report.n_voxels = config.w * 3;
  report.n_steps = std::lround(config.duration / config.settings.dt);
  report.tau_seconds = tau;
  report.svsps = static_cast<double>(report.n_steps) * report.n_voxels / tau;
  return report;
}

}  // namespace vsim

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vsim/controller.hpp"

namespace vsim {

struct TerrainConfig {
  enum class Kind { Flat, Uneven } kind = Kind::Flat;
  double length = 1000.0;
  // uneven only: vertex heights drawn uniformly from [-amplitude, +amplitude]
  // at fixed pitch, with both end vertices raised by 3 * amplitude as walls
  double amplitude = 1.0;
  double segment_length = 10.0;
  uint64_t seed = 0;
  double friction = 100.0;
  double restitution = 0.1;
};

Terrain make_terrain(const TerrainConfig& cfg);

enum class MeasureKind : uint8_t {
  TravelVelocity,           // (x_center(T) - x_center(0)) / T
  AverageYCenter,           // mean of y_center over control steps
  AverageSquaredControlSum, // mean over control steps of sum_i f_i^2
};

struct LocomotionConfig {
  double duration = 60.0;
  // steps between controller invocations; the controller runs every
  // control_interval + 1 steps, starting at t = 0
  int control_interval = 1;
  double drop_height = 0.01;
  TerrainConfig terrain;
  std::vector<MeasureKind> measures{MeasureKind::TravelVelocity, MeasureKind::AverageYCenter,
                                    MeasureKind::AverageSquaredControlSum};
  Settings settings;
};

struct Outcome {
  std::vector<double> values;  // aligned with LocomotionConfig::measures
  bool diverged = false;
  long control_steps = 0;
};

// Per-control-step state for tracing and rendering.
struct VoxelSnapshot {
  int x = 0, y = 0;
  std::array<Vec2, 16> corners{};  // 4 masses x 4 corners, counterclockwise
  double area_ratio = 1.0;
  double control = 0.0;
  bool touching = false;
};

struct Snapshot {
  double t = 0.0;
  Vec2 center;
  std::vector<VoxelSnapshot> voxels;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

// Drops the robot 1 cm (drop_height) above the terrain with its left edge at
// x = 0 and simulates for the configured duration. The controller runs at
// t = 0 and every control period after, so a run of T seconds invokes it
// floor(T / ((c+1) dt)) + 1 times. Divergence is caught: the outcome flags it
// and reports worst-case measure values. stepping_seconds, when given,
// receives the wall time of the stepping loop alone.
Outcome run_locomotion(const VSRDescription& desc, const ControllerSpec& controller,
                       const LocomotionConfig& config, const SnapshotSink& sink = nullptr,
                       double* stepping_seconds = nullptr);

struct CantileverConfig {
  int w = 10;
  int h = 4;
  MaterialSpec material;
  double force = 30.0;            // total load, N, split over the 2h loaded masses
  double impulse_duration = -1.0; // <= 0: load applied for the whole run
  double total_time = 60.0;
  int control_interval = 1;       // sampling period for the series
  Settings settings;              // gravity is forced off
};

// Beam of w x h identical voxels welded to a fixed wall on the left, pulled
// down at the right edge. Returns the vertical displacement of the mean
// center of the rightmost voxel column, final minus rest.
double run_cantilever_static(const CantileverConfig& config);

// Same rig with a finite-duration load; returns (t, displacement) sampled
// every control period.
std::vector<std::pair<double, double>> run_cantilever_dynamic(const CantileverConfig& config);

struct PerfConfig {
  int w = 9;  // worm is w x 3 voxels
  double duration = 60.0;
  TerrainConfig terrain{TerrainConfig::Kind::Uneven, 500.0, 1.0, 10.0, 1};
  Settings settings;
};

struct PerfReport {
  int n_voxels = 0;
  long n_steps = 0;
  double tau_seconds = 0.0;  // stepping-loop wall time
  double svsps = 0.0;        // n_steps * n_voxels / tau
};

// Simulated-voxel-steps-per-second of a w x 3 worm driven by
// sin(-2*pi*t + pi*x/w) walking on uneven terrain.
PerfReport measure_svsps(const PerfConfig& config);

}  // namespace vsim

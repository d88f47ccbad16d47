#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vsim/controller.hpp"
#include "vsim/ea.hpp"
#include "vsim/tasks.hpp"
#include "vsim/vsr.hpp"

namespace vsim {

// fixed walker shapes for the sensing controller
enum class RobotShape {
  Worm,    // 4x1 strip
  Biped,   // 4x2 with only the corner cells on the bottom row
  Tripod,  // 5x2 with bottom cells at x = 0, 2, 4
};

enum class RepresentationKind {
  GaussianBody,     // body geometry and materials from summed Gaussians
  PhaseOffsets,     // fixed rectangle, one oscillator phase per voxel
  EvoDevoSchedule,  // fixed rectangle, oscillator plus drifting offset per voxel
  SensingMLP,       // fixed shape, sensor-driven perceptron weights
};

struct RepresentationConfig {
  RepresentationKind kind = RepresentationKind::SensingMLP;
  int width = 10;   // GaussianBody grid, or the PhaseOffsets / EvoDevoSchedule rectangle
  int height = 10;
  double ramp_time = 60.0;  // EvoDevoSchedule offset drift duration
  RobotShape shape = RobotShape::Biped;  // SensingMLP body
  std::vector<int> hidden;               // SensingMLP hidden layer sizes
};

// conventional starting points per kind (GaussianBody 10x10, rectangles 11x4)
RepresentationConfig default_representation(RepresentationKind kind);

struct DecodedRobot {
  VSRDescription description;
  ControllerSpec controller;
};

int representation_dimension(const RepresentationConfig& config);
std::pair<double, double> representation_init_range(const RepresentationConfig& config);

// materials selectable by the GaussianBody decoder, in genotype order:
// stiff passive, soft passive with sparse scaffolding, active, counter-phased active
const std::array<MaterialSpec, 4>& gaussian_body_materials();

// per-cell winner before the connectivity filter: index into
// gaussian_body_materials, or -1 where every field stays below threshold
Grid2D<int> gaussian_body_labels(const Genotype& genotype, int width, int height);

// full rectangle of the given size from one material
VSRDescription rectangle_description(int width, int height, const MaterialSpec& material);
VSRDescription shape_description(RobotShape shape, const MaterialSpec& material);

// rejects a genotype of the wrong dimension; returns nothing when the decoded
// body contains no voxel
std::optional<DecodedRobot> decode_robot(const RepresentationConfig& config,
                                         const Genotype& genotype);

// negated travel velocity divided by the larger body extent in voxels;
// +infinity when decoding fails or the simulation diverges
double fitness_relative_velocity(const RepresentationConfig& config, const Genotype& genotype,
                                 const LocomotionConfig& task);

}  // namespace vsim

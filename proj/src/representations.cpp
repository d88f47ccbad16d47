#include "vsim/representations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vsim {

namespace {

constexpr int kGaussiansPerMaterial = 5;
constexpr double kFieldThreshold = 1.0;
constexpr double kMinSigma = 1e-6;

std::array<MaterialSpec, 4> make_gaussian_materials() {
  std::array<MaterialSpec, 4> mats;
  mats[0].spring_frequency = 25.0;
  mats[1].spring_frequency = 5.0;
  mats[1].scaffolding = static_cast<Scaffolding>(ScaffoldingGroup::SideExternal) |
                        static_cast<Scaffolding>(ScaffoldingGroup::CentralCross);
  // mats[2] and mats[3] keep the defaults; they differ only in oscillation sign
  return mats;
}

TimeFunctionSpec oscillator(double frequency) {
  TimeFunctionSpec spec;
  spec.amplitude = 1.0;
  spec.frequency = frequency;
  return spec;
}

TimeFunctionSpec silent() {
  TimeFunctionSpec spec;
  spec.amplitude = 0.0;
  return spec;
}

void check_rectangle(const RepresentationConfig& config) {
  if (config.width < 1 || config.height < 1)
    throw std::invalid_argument("representation grid must have positive dimensions");
}

int shape_voxels(RobotShape shape) {
  switch (shape) {
    case RobotShape::Worm: return 4;
    case RobotShape::Biped: return 6;
    case RobotShape::Tripod: return 8;
  }
  throw std::invalid_argument("unknown robot shape");
}

std::vector<SensorSpec> sensing_suite() {
  std::vector<SensorSpec> sensors;
  for (SensorKind kind :
       {SensorKind::AreaRatio, SensorKind::RotatedXVelocity, SensorKind::RotatedYVelocity}) {
    sensors.push_back({kind, Aggregate::MeanOfLast, 5});
    sensors.push_back({kind, Aggregate::NthDifference, 5});
  }
  return sensors;
}

}  // namespace

RepresentationConfig default_representation(RepresentationKind kind) {
  RepresentationConfig config;
  config.kind = kind;
  switch (kind) {
    case RepresentationKind::GaussianBody:
      config.width = 10;
      config.height = 10;
      break;
    case RepresentationKind::PhaseOffsets:
    case RepresentationKind::EvoDevoSchedule:
      config.width = 11;
      config.height = 4;
      break;
    case RepresentationKind::SensingMLP:
      break;
  }
  return config;
}

const std::array<MaterialSpec, 4>& gaussian_body_materials() {
  static const std::array<MaterialSpec, 4> mats = make_gaussian_materials();
  return mats;
}

Grid2D<int> gaussian_body_labels(const Genotype& genotype, int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("representation grid must have positive dimensions");
  if (genotype.size() != 4 * kGaussiansPerMaterial * 4)
    throw std::invalid_argument("gaussian body genotype must have 80 coordinates");
  Grid2D<int> labels(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // cells sit at integer coordinates starting from (1, 1)
      double px = x + 1.0;
      double py = y + 1.0;
      int winner = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < 4; ++j) {
        double g = 0.0;
        for (int i = 0; i < kGaussiansPerMaterial; ++i) {
          size_t base = ((static_cast<size_t>(j) * kGaussiansPerMaterial + i) * 4);
          double cx = 1.0 + genotype[base] * (width - 1);
          double cy = 1.0 + genotype[base + 1] * (height - 1);
          double sigma = std::max(std::abs(genotype[base + 2]), kMinSigma);
          double q = genotype[base + 3];
          double d2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
          g += q / (sigma * std::sqrt(2.0 * M_PI)) * std::exp(-d2 / (sigma * sigma));
        }
        if (g > best) {
          best = g;
          winner = j;
        }
      }
      labels.at(x, y) = best >= kFieldThreshold ? winner : -1;
    }
  }
  return labels;
}

VSRDescription rectangle_description(int width, int height, const MaterialSpec& material) {
  VSRDescription desc(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) desc.at(x, y) = material;
  return desc;
}

VSRDescription shape_description(RobotShape shape, const MaterialSpec& material) {
  switch (shape) {
    case RobotShape::Worm:
      return rectangle_description(4, 1, material);
    case RobotShape::Biped: {
      VSRDescription desc(4, 2);
      for (int x = 0; x < 4; ++x) desc.at(x, 1) = material;
      desc.at(0, 0) = material;
      desc.at(3, 0) = material;
      return desc;
    }
    case RobotShape::Tripod: {
      VSRDescription desc(5, 2);
      for (int x = 0; x < 5; ++x) desc.at(x, 1) = material;
      desc.at(0, 0) = material;
      desc.at(2, 0) = material;
      desc.at(4, 0) = material;
      return desc;
    }
  }
  throw std::invalid_argument("unknown robot shape");
}

int representation_dimension(const RepresentationConfig& config) {
  switch (config.kind) {
    case RepresentationKind::GaussianBody:
      return 4 * kGaussiansPerMaterial * 4;
    case RepresentationKind::PhaseOffsets:
      check_rectangle(config);
      return config.width * config.height;
    case RepresentationKind::EvoDevoSchedule:
      check_rectangle(config);
      return 3 * config.width * config.height;
    case RepresentationKind::SensingMLP: {
      int n = shape_voxels(config.shape);
      return mlp_weight_count(6 * n + 1, config.hidden, n);
    }
  }
  throw std::invalid_argument("unknown representation kind");
}

std::pair<double, double> representation_init_range(const RepresentationConfig& config) {
  switch (config.kind) {
    case RepresentationKind::GaussianBody:
      return {0.0, 1.0};
    case RepresentationKind::PhaseOffsets:
    case RepresentationKind::EvoDevoSchedule:
      return {-M_PI, M_PI};
    case RepresentationKind::SensingMLP:
      return {-1.0, 1.0};
  }
  throw std::invalid_argument("unknown representation kind");
}

std::optional<DecodedRobot> decode_robot(const RepresentationConfig& config,
                                         const Genotype& genotype) {
  if (static_cast<int>(genotype.size()) != representation_dimension(config))
    throw std::invalid_argument("genotype dimension does not match the representation");

  switch (config.kind) {
    case RepresentationKind::GaussianBody: {
      Grid2D<int> labels = gaussian_body_labels(genotype, config.width, config.height);
      Grid2D<bool> occupied(config.width, config.height);
      for (int y = 0; y < config.height; ++y)
        for (int x = 0; x < config.width; ++x)
          if (*labels.at(x, y) >= 0) occupied.at(x, y) = true;
      Grid2D<bool> kept = largest_connected_region(occupied);
      if (kept.count_occupied() == 0) return std::nullopt;

      DecodedRobot robot{VSRDescription(config.width, config.height),
                         TimeFunctionGrid(config.width, config.height)};
      auto& grid = std::get<TimeFunctionGrid>(robot.controller);
      const auto& mats = gaussian_body_materials();
      for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
          if (!kept.occupied(x, y)) continue;
          int label = *labels.at(x, y);
          robot.description.at(x, y) = mats[label];
          switch (label) {
            case 2: grid.at(x, y) = oscillator(1.0); break;
            case 3: grid.at(x, y) = oscillator(-1.0); break;
            default: grid.at(x, y) = silent(); break;
          }
        }
      }
      return robot;
    }

    case RepresentationKind::PhaseOffsets: {
      MaterialSpec material;
      DecodedRobot robot{rectangle_description(config.width, config.height, material),
                         TimeFunctionGrid(config.width, config.height)};
      auto& grid = std::get<TimeFunctionGrid>(robot.controller);
      size_t j = 0;
      for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
          TimeFunctionSpec spec = oscillator(1.0);
          spec.phase = genotype[j++];
          grid.at(x, y) = spec;
        }
      }
      return robot;
    }

    case RepresentationKind::EvoDevoSchedule: {
      MaterialSpec material;
      DecodedRobot robot{rectangle_description(config.width, config.height, material),
                         TimeFunctionGrid(config.width, config.height)};
      auto& grid = std::get<TimeFunctionGrid>(robot.controller);
      size_t j = 0;
      for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
          TimeFunctionSpec spec = oscillator(1.0);
          spec.phase = genotype[j];
          spec.offset_a = genotype[j + 1];
          spec.offset_b = genotype[j + 2];
          spec.ramp_time = config.ramp_time;
          grid.at(x, y) = spec;
          j += 3;
        }
      }
      return robot;
    }

    case RepresentationKind::SensingMLP: {
      MaterialSpec material;
      MLPControllerSpec mlp;
      mlp.sensors = sensing_suite();
      mlp.use_driving = true;
      mlp.driving = oscillator(1.0);
      mlp.hidden = config.hidden;
      mlp.weights = genotype;
      return DecodedRobot{shape_description(config.shape, material), std::move(mlp)};
    }
  }
  throw std::invalid_argument("unknown representation kind");
}

double fitness_relative_velocity(const RepresentationConfig& config, const Genotype& genotype,
                                 const LocomotionConfig& task) {
  std::optional<DecodedRobot> robot = decode_robot(config, genotype);
  if (!robot) return std::numeric_limits<double>::infinity();

  LocomotionConfig cfg = task;
  cfg.measures = {MeasureKind::TravelVelocity};
  Outcome outcome = run_locomotion(robot->description, robot->controller, cfg);
  if (outcome.diverged) return std::numeric_limits<double>::infinity();

  auto [bw, bh] = description_bounds(robot->description);
  double extent = std::max(bw, bh);
  return -outcome.values.at(0) / extent;
}

}  // namespace vsim

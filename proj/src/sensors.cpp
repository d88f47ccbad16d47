#include "vsim/sensors.hpp"

#include <cmath>

namespace vsim {

double read_sensor(const World& world, Voxel& voxel, SensorKind kind) {
  switch (kind) {
    case SensorKind::AreaRatio:
      return voxel_area_ratio(world, voxel);
    case SensorKind::VelocityMagnitude:
      return voxel_velocity(world, voxel).length();
    case SensorKind::Angle:
      return voxel_angle(world, voxel);
    case SensorKind::XVelocity:
      return voxel_velocity(world, voxel).x;
    case SensorKind::YVelocity:
      return voxel_velocity(world, voxel).y;
    case SensorKind::RotatedXVelocity: {
      double a = voxel_angle(world, voxel);
      Vec2 v = voxel_velocity(world, voxel);
      return v.dot({std::cos(a), std::sin(a)});
    }
    case SensorKind::RotatedYVelocity: {
      double a = voxel_angle(world, voxel);
      Vec2 v = voxel_velocity(world, voxel);
      return v.dot({std::sin(a), -std::cos(a)});
    }
    case SensorKind::Touching:
      return voxel_touching(world, voxel) ? 1.0 : 0.0;
  }
  return 0.0;
}

double aggregate_value(const SensorHistory& history, const SensorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("SensorSpec: n must be >= 1");
  switch (spec.aggregate) {
    case Aggregate::Current:
      return history.at_lag(0);
    case Aggregate::MeanOfLast: {
      double sum = 0.0;
      for (int k = 0; k < spec.n; ++k) sum += history.at_lag(static_cast<size_t>(k));
      return sum / static_cast<double>(spec.n);
    }
    case Aggregate::NthDifference:
      return history.at_lag(0) - history.at_lag(static_cast<size_t>(spec.n - 1));
  }
  return 0.0;
}

}  // namespace vsim

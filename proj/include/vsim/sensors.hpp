#pragma once

#include <stdexcept>
#include <vector>

#include "vsim/voxel.hpp"

namespace vsim {

enum class SensorKind : uint8_t {
  AreaRatio,
  VelocityMagnitude,
  Angle,
  XVelocity,
  YVelocity,
  RotatedXVelocity,  // mean mass velocity projected on the voxel's x axis
  RotatedYVelocity,
  Touching,
};

enum class Aggregate : uint8_t {
  Current,
  MeanOfLast,      // mean of the last n readings
  NthDifference,   // s(t) - s(t - (n-1) * control_dt)
};

struct SensorSpec {
  SensorKind kind = SensorKind::AreaRatio;
  Aggregate aggregate = Aggregate::Current;
  int n = 1;
};

// Raw (un-aggregated) reading at the current state.
double read_sensor(const World& world, Voxel& voxel, SensorKind kind);

// Fixed-capacity ring of past readings, one entry per control step, newest
// last. Before the buffer fills, lags clamp to the oldest reading available.
class SensorHistory {
 public:
  explicit SensorHistory(int capacity) : values_(static_cast<size_t>(capacity)) {
    if (capacity < 1) throw std::invalid_argument("SensorHistory: capacity must be >= 1");
  }

  void push(double v) {
    values_[head_] = v;
    head_ = (head_ + 1) % values_.size();
    if (size_ < values_.size()) size_ += 1;
  }

  size_t size() const { return size_; }

  // lag 0 is the newest reading; lags past the oldest clamp to it
  double at_lag(size_t lag) const {
    if (size_ == 0) throw std::logic_error("SensorHistory: empty");
    if (lag >= size_) lag = size_ - 1;
    size_t idx = (head_ + values_.size() - 1 - lag) % values_.size();
    return values_[idx];
  }

 private:
  std::vector<double> values_;
  size_t head_ = 0;
  size_t size_ = 0;
};

// Aggregation over the history with window spec.n (n >= 1).
double aggregate_value(const SensorHistory& history, const SensorSpec& spec);

}  // namespace vsim

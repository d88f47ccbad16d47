#pragma once

#include <variant>
#include <vector>

#include "vsim/sensors.hpp"
#include "vsim/vsr.hpp"

namespace vsim {

// Closed-form control signal: amplitude * sin(2*pi*frequency*t + phase)
// plus an offset that ramps linearly from offset_a at t = 0 to offset_b at
// t = ramp_time (constant offset_a when ramp_time == 0).
struct TimeFunctionSpec {
  double amplitude = 0.0;
  double frequency = 0.0;  // Hz; negative values reverse the phase direction
  double phase = 0.0;
  double offset_a = 0.0;
  double offset_b = 0.0;
  double ramp_time = 0.0;

  double value(double t) const;
};

// One time function per occupied cell.
using TimeFunctionGrid = Grid2D<TimeFunctionSpec>;

// Fully connected perceptron over per-voxel sensor aggregates. The same
// sensor list applies to every voxel; inputs are ordered voxel scan order
// first, declared sensor order within a voxel, optional driving signal last.
// One constant bias unit is appended to the input vector, so the weight count
// is (inputs + 1) * s1 + s1 * s2 + ... + s_last * outputs.
struct MLPControllerSpec {
  std::vector<SensorSpec> sensors;
  bool use_driving = true;
  TimeFunctionSpec driving{1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<int> hidden;
  std::vector<double> weights;
};

using ControllerSpec = std::variant<TimeFunctionGrid, MLPControllerSpec>;

int mlp_weight_count(int inputs, const std::vector<int>& hidden, int outputs);

// tanh on every layer, including the output layer
std::vector<double> mlp_forward(const std::vector<double>& weights, int inputs,
                                const std::vector<int>& hidden, int outputs,
                                const std::vector<double>& x);

// Runtime controller bound to one robot layout. Holds the per-voxel sensor
// histories; apply() reads sensors, computes the per-voxel control values in
// scan order, actuates every voxel, and returns the values. Values are
// clamped to [-1, 1]; non-finite values become 0 and are counted.
class Controller {
 public:
  Controller(ControllerSpec spec, const VSRDescription& desc);

  std::vector<double> apply(World& world, VSR& vsr, double t);

  long nan_controls() const { return nan_controls_; }
  // input vector assembled during the last MLP apply(); empty for time functions
  const std::vector<double>& last_inputs() const { return last_inputs_; }

 private:
  std::vector<double> compute(World& world, VSR& vsr, double t);

  ControllerSpec spec_;
  int n_voxels_ = 0;
  // histories[voxel][sensor], voxel in scan order
  std::vector<std::vector<SensorHistory>> histories_;
  std::vector<double> last_inputs_;
  long nan_controls_ = 0;
};

}  // namespace vsim

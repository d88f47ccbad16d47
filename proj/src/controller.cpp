#include "vsim/controller.hpp"

#include <cmath>

namespace vsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double TimeFunctionSpec::value(double t) const {
  double v = amplitude * std::sin(2.0 * kPi * frequency * t + phase);
  if (ramp_time > 0.0) {
    v += offset_a + (t / ramp_time) * (offset_b - offset_a);
  } else {
    v += offset_a;
  }
  return v;
}

int mlp_weight_count(int inputs, const std::vector<int>& hidden, int outputs) {
  if (inputs < 1 || outputs < 1) {
    throw std::invalid_argument("mlp_weight_count: layer sizes must be positive");
  }
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("mlp_weight_count: layer sizes must be positive");
  }
  int prev = inputs + 1;  // bias unit rides along with the inputs
  int total = 0;
  for (int h : hidden) {
    total += prev * h;
    prev = h;
  }
  total += prev * outputs;
  return total;
}

std::vector<double> mlp_forward(const std::vector<double>& weights, int inputs,
                                const std::vector<int>& hidden, int outputs,
                                const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != inputs) {
    throw std::invalid_argument("mlp_forward: input size mismatch");
  }
  if (static_cast<int>(weights.size()) != mlp_weight_count(inputs, hidden, outputs)) {
    throw std::invalid_argument("mlp_forward: weight count mismatch");
  }
  std::vector<double> cur(x);
  cur.push_back(1.0);
  size_t w = 0;
  std::vector<int> layer_sizes(hidden);
  layer_sizes.push_back(outputs);
  std::vector<double> next;
  for (int out_size : layer_sizes) {
    next.assign(static_cast<size_t>(out_size), 0.0);
    for (int j = 0; j < out_size; ++j) {
      double sum = 0.0;
      for (double v : cur) sum += weights[w++] * v;
      next[j] = std::tanh(sum);
    }
    cur = next;
  }
  return cur;
}

Controller::Controller(ControllerSpec spec, const VSRDescription& desc)
    : spec_(std::move(spec)) {
  std::vector<std::pair<int, int>> cells;
  for (int y = 0; y < desc.height(); ++y) {
    for (int x = 0; x < desc.width(); ++x) {
      if (desc.occupied(x, y)) cells.push_back({x, y});
    }
  }
  n_voxels_ = static_cast<int>(cells.size());
  if (n_voxels_ == 0) throw std::invalid_argument("Controller: empty robot");

  if (auto* tf = std::get_if<TimeFunctionGrid>(&spec_)) {
    if (tf->width() != desc.width() || tf->height() != desc.height()) {
      throw std::invalid_argument("Controller: time-function grid shape mismatch");
    }
    for (auto [x, y] : cells) {
      if (!tf->occupied(x, y)) {
        throw std::invalid_argument("Controller: missing time function for occupied cell");
      }
    }
  } else {
    auto& mlp = std::get<MLPControllerSpec>(spec_);
    int inputs = static_cast<int>(mlp.sensors.size()) * n_voxels_ + (mlp.use_driving ? 1 : 0);
    int expected = mlp_weight_count(inputs, mlp.hidden, n_voxels_);
    if (static_cast<int>(mlp.weights.size()) != expected) {
      throw std::invalid_argument("Controller: expected " + std::to_string(expected) +
                                  " weights, got " + std::to_string(mlp.weights.size()));
    }
    int cap = 1;
    for (const SensorSpec& s : mlp.sensors) {
      if (s.n < 1) throw std::invalid_argument("Controller: sensor window must be >= 1");
      cap = std::max(cap, s.n);
    }
    histories_.assign(static_cast<size_t>(n_voxels_),
                      std::vector<SensorHistory>(mlp.sensors.size(), SensorHistory(cap)));
  }
}

std::vector<double> Controller::compute(World& world, VSR& vsr, double t) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n_voxels_));
  if (auto* tf = std::get_if<TimeFunctionGrid>(&spec_)) {
    for (auto [x, y] : vsr.cells) {
      out.push_back(tf->at(x, y)->value(t));
    }
    return out;
  }
  auto& mlp = std::get<MLPControllerSpec>(spec_);
  last_inputs_.clear();
  for (size_t vi = 0; vi < vsr.cells.size(); ++vi) {
    auto [x, y] = vsr.cells[vi];
    Voxel& vox = *vsr.voxels.at(x, y);
    for (size_t si = 0; si < mlp.sensors.size(); ++si) {
      histories_[vi][si].push(read_sensor(world, vox, mlp.sensors[si].kind));
      last_inputs_.push_back(aggregate_value(histories_[vi][si], mlp.sensors[si]));
    }
  }
  if (mlp.use_driving) last_inputs_.push_back(mlp.driving.value(t));
  return mlp_forward(mlp.weights, static_cast<int>(last_inputs_.size()), mlp.hidden,
                     n_voxels_, last_inputs_);
}

std::vector<double> Controller::apply(World& world, VSR& vsr, double t) {
  std::vector<double> values = compute(world, vsr, t);
  for (double& v : values) {
    if (!std::isfinite(v)) {
      nan_controls_ += 1;
      v = 0.0;
    } else if (v < -1.0) {
      v = -1.0;
    } else if (v > 1.0) {
      v = 1.0;
    }
  }
  for (size_t i = 0; i < vsr.cells.size(); ++i) {
    auto [x, y] = vsr.cells[i];
    actuate(world, *vsr.voxels.at(x, y), values[i]);
  }
  return values;
}

}  // namespace vsim

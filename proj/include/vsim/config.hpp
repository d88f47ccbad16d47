#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vsim/ea.hpp"
#include "vsim/representations.hpp"
#include "vsim/tasks.hpp"

namespace vsim {

// Raised on malformed input; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-voxel oscillator family with a phase gradient over the grid:
// amplitude * sin(2*pi*frequency*t + phase0 + phase_dx*x + phase_dy*y)
struct TimeFunctionConfig {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase0 = 0.0;
  double phase_dx = 0.0;
  double phase_dy = 0.0;
  double offset_a = 0.0;
  double offset_b = 0.0;
  double ramp_time = 0.0;
};

struct MLPConfig {
  std::vector<SensorSpec> sensors;
  bool use_driving = true;
  TimeFunctionSpec driving{1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<int> hidden;
  std::vector<double> weights;  // inline; empty when weights_file is set
  std::string weights_file;     // whitespace- or comma-separated doubles
};

using ControllerConfig = std::variant<TimeFunctionConfig, MLPConfig>;

struct SimulationConfig {
  uint64_t seed = 0;
  std::map<char, MaterialSpec> materials;
  std::vector<std::string> body;  // character art, first row on top, '.' empty
  std::optional<ControllerConfig> controller;
  LocomotionConfig task;
  bool has_ea = false;
  EAConfig ea;
  std::optional<RepresentationConfig> representation;
};

SimulationConfig parse_config(const std::string& json_text);
SimulationConfig load_config(const std::string& path);
std::string serialize_config(const SimulationConfig& config);

// Turns the character art into a description; every non-'.' character must
// appear in the material map, rows must be equal length, and the first row is
// the top of the robot.
VSRDescription build_description(const std::map<char, MaterialSpec>& materials,
                                 const std::vector<std::string>& body);

// Instantiates the controller for a concrete body. weights_file paths are
// resolved against base_dir when it is non-empty.
ControllerSpec build_controller(const ControllerConfig& config, const VSRDescription& desc,
                                const std::string& base_dir = "");

// Forces every stored seed (master, terrain, EA) to the given value.
void apply_seed_override(SimulationConfig& config, uint64_t seed);

}  // namespace vsim

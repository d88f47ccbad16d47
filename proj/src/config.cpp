#include "vsim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace vsim {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(join(path, key), "unknown field");
  }
}

const json& as_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

uint64_t as_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<int64_t>() < 0))
    fail(path, "expected a non-negative integer");
  return j.get<uint64_t>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_double(const json& obj, const std::string& path, const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_double(*it, join(path, key));
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, join(path, key));
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_bool(*it, join(path, key));
}

// ---- enum name tables ----

const char* kScaffoldingNames[4] = {"side_external", "side_internal", "side_cross",
                                    "central_cross"};
const ScaffoldingGroup kScaffoldingValues[4] = {
    ScaffoldingGroup::SideExternal, ScaffoldingGroup::SideInternal, ScaffoldingGroup::SideCross,
    ScaffoldingGroup::CentralCross};

const std::pair<const char*, SensorKind> kSensorNames[] = {
    {"area_ratio", SensorKind::AreaRatio},
    {"velocity_magnitude", SensorKind::VelocityMagnitude},
    {"angle", SensorKind::Angle},
    {"x_velocity", SensorKind::XVelocity},
    {"y_velocity", SensorKind::YVelocity},
    {"rotated_x_velocity", SensorKind::RotatedXVelocity},
    {"rotated_y_velocity", SensorKind::RotatedYVelocity},
    {"touching", SensorKind::Touching},
};

const std::pair<const char*, Aggregate> kAggregateNames[] = {
    {"current", Aggregate::Current},
    {"mean", Aggregate::MeanOfLast},
    {"difference", Aggregate::NthDifference},
};

const std::pair<const char*, MeasureKind> kMeasureNames[] = {
    {"travel_velocity", MeasureKind::TravelVelocity},
    {"average_y_center", MeasureKind::AverageYCenter},
    {"average_squared_control_sum", MeasureKind::AverageSquaredControlSum},
};

const std::pair<const char*, RepresentationKind> kRepresentationNames[] = {
    {"gaussian_body", RepresentationKind::GaussianBody},
    {"phase_offsets", RepresentationKind::PhaseOffsets},
    {"evodevo_schedule", RepresentationKind::EvoDevoSchedule},
    {"sensing_mlp", RepresentationKind::SensingMLP},
};

const std::pair<const char*, RobotShape> kShapeNames[] = {
    {"worm", RobotShape::Worm},
    {"biped", RobotShape::Biped},
    {"tripod", RobotShape::Tripod},
};

template <typename E, size_t N>
E parse_enum(const std::pair<const char*, E> (&table)[N], const json& j, const std::string& path) {
  std::string name = as_string(j, path);
  for (const auto& [n, v] : table)
    if (name == n) return v;
  std::string options;
  for (const auto& [n, v] : table) options += options.empty() ? n : std::string("|") + n;
  fail(path, "expected one of " + options);
}

template <typename E, size_t N>
const char* enum_name(const std::pair<const char*, E> (&table)[N], E value) {
  for (const auto& [n, v] : table)
    if (v == value) return n;
  return "?";
}

// ---- section parsers ----

MaterialSpec parse_material(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path,
             {"side_length", "mass_side_ratio", "linear_damping", "angular_damping", "mass",
              "friction", "restitution", "spring_frequency", "spring_damping", "max_force",
              "max_area_change", "scaffolding", "ropes", "actuation"});
  MaterialSpec m;
  m.side_length = get_double(j, path, "side_length", m.side_length);
  m.mass_side_ratio = get_double(j, path, "mass_side_ratio", m.mass_side_ratio);
  m.linear_damping = get_double(j, path, "linear_damping", m.linear_damping);
  m.angular_damping = get_double(j, path, "angular_damping", m.angular_damping);
  m.mass = get_double(j, path, "mass", m.mass);
  m.friction = get_double(j, path, "friction", m.friction);
  m.restitution = get_double(j, path, "restitution", m.restitution);
  m.spring_frequency = get_double(j, path, "spring_frequency", m.spring_frequency);
  m.spring_damping = get_double(j, path, "spring_damping", m.spring_damping);
  m.max_force = get_double(j, path, "max_force", m.max_force);
  m.max_area_change = get_double(j, path, "max_area_change", m.max_area_change);
  if (auto it = j.find("scaffolding"); it != j.end()) {
    std::string spath = join(path, "scaffolding");
    if (!it->is_array()) fail(spath, "expected an array of group names");
    Scaffolding s = 0;
    for (size_t i = 0; i < it->size(); ++i) {
      std::string name = as_string((*it)[i], spath + "[" + std::to_string(i) + "]");
      bool found = false;
      for (int g = 0; g < 4; ++g) {
        if (name == kScaffoldingNames[g]) {
          s |= static_cast<Scaffolding>(kScaffoldingValues[g]);
          found = true;
        }
      }
      if (!found)
        fail(spath + "[" + std::to_string(i) + "]",
             "expected side_external|side_internal|side_cross|central_cross");
    }
    m.scaffolding = s;
  }
  m.ropes_enabled = get_bool(j, path, "ropes", m.ropes_enabled);
  if (auto it = j.find("actuation"); it != j.end()) {
    std::string name = as_string(*it, join(path, "actuation"));
    if (name == "area") m.actuation = ActuationMode::Area;
    else if (name == "force") m.actuation = ActuationMode::Force;
    else fail(join(path, "actuation"), "expected area|force");
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return m;
}

json serialize_material(const MaterialSpec& m) {
  json j;
  j["side_length"] = m.side_length;
  j["mass_side_ratio"] = m.mass_side_ratio;
  j["linear_damping"] = m.linear_damping;
  j["angular_damping"] = m.angular_damping;
  j["mass"] = m.mass;
  j["friction"] = m.friction;
  j["restitution"] = m.restitution;
  j["spring_frequency"] = m.spring_frequency;
  j["spring_damping"] = m.spring_damping;
  j["max_force"] = m.max_force;
  j["max_area_change"] = m.max_area_change;
  json groups = json::array();
  for (int g = 0; g < 4; ++g)
    if (scaffolding_has(m.scaffolding, kScaffoldingValues[g])) groups.push_back(kScaffoldingNames[g]);
  j["scaffolding"] = groups;
  j["ropes"] = m.ropes_enabled;
  j["actuation"] = m.actuation == ActuationMode::Area ? "area" : "force";
  return j;
}

TimeFunctionSpec parse_time_spec(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"amplitude", "frequency", "phase", "offset_a", "offset_b", "ramp_time"});
  TimeFunctionSpec s;
  s.amplitude = get_double(j, path, "amplitude", 1.0);
  s.frequency = get_double(j, path, "frequency", 1.0);
  s.phase = get_double(j, path, "phase", 0.0);
  s.offset_a = get_double(j, path, "offset_a", 0.0);
  s.offset_b = get_double(j, path, "offset_b", 0.0);
  s.ramp_time = get_double(j, path, "ramp_time", 0.0);
  return s;
}

json serialize_time_spec(const TimeFunctionSpec& s) {
  json j;
  j["amplitude"] = s.amplitude;
  j["frequency"] = s.frequency;
  j["phase"] = s.phase;
  j["offset_a"] = s.offset_a;
  j["offset_b"] = s.offset_b;
  j["ramp_time"] = s.ramp_time;
  return j;
}

ControllerConfig parse_controller(const json& j, const std::string& path) {
  as_object(j, path);
  auto type_it = j.find("type");
  if (type_it == j.end()) fail(join(path, "type"), "missing field");
  std::string type = as_string(*type_it, join(path, "type"));

  if (type == "time_function") {
    check_keys(j, path, {"type", "amplitude", "frequency", "phase0", "phase_dx", "phase_dy",
                         "offset_a", "offset_b", "ramp_time"});
    TimeFunctionConfig c;
    c.amplitude = get_double(j, path, "amplitude", c.amplitude);
    c.frequency = get_double(j, path, "frequency", c.frequency);
    c.phase0 = get_double(j, path, "phase0", c.phase0);
    c.phase_dx = get_double(j, path, "phase_dx", c.phase_dx);
    c.phase_dy = get_double(j, path, "phase_dy", c.phase_dy);
    c.offset_a = get_double(j, path, "offset_a", c.offset_a);
    c.offset_b = get_double(j, path, "offset_b", c.offset_b);
    c.ramp_time = get_double(j, path, "ramp_time", c.ramp_time);
    return c;
  }

  if (type == "mlp") {
    check_keys(j, path, {"type", "sensors", "driving", "hidden", "weights", "weights_file"});
    MLPConfig c;
    auto sens_it = j.find("sensors");
    if (sens_it == j.end() || !sens_it->is_array())
      fail(join(path, "sensors"), "expected an array of sensor objects");
    for (size_t i = 0; i < sens_it->size(); ++i) {
      std::string spath = join(path, "sensors") + "[" + std::to_string(i) + "]";
      const json& sj = as_object((*sens_it)[i], spath);
      check_keys(sj, spath, {"kind", "aggregate", "n"});
      SensorSpec spec;
      auto kind_it = sj.find("kind");
      if (kind_it == sj.end()) fail(join(spath, "kind"), "missing field");
      spec.kind = parse_enum(kSensorNames, *kind_it, join(spath, "kind"));
      if (auto ag = sj.find("aggregate"); ag != sj.end())
        spec.aggregate = parse_enum(kAggregateNames, *ag, join(spath, "aggregate"));
      spec.n = get_int(sj, spath, "n", 1);
      if (spec.n < 1) fail(join(spath, "n"), "must be >= 1");
      c.sensors.push_back(spec);
    }
    if (auto dr = j.find("driving"); dr != j.end()) {
      if (dr->is_boolean()) {
        c.use_driving = dr->get<bool>();
      } else {
        c.use_driving = true;
        c.driving = parse_time_spec(*dr, join(path, "driving"));
      }
    }
    if (auto h = j.find("hidden"); h != j.end()) {
      if (!h->is_array()) fail(join(path, "hidden"), "expected an array of layer sizes");
      for (size_t i = 0; i < h->size(); ++i) {
        int size = as_int((*h)[i], join(path, "hidden") + "[" + std::to_string(i) + "]");
        if (size < 1) fail(join(path, "hidden") + "[" + std::to_string(i) + "]", "must be >= 1");
        c.hidden.push_back(size);
      }
    }
    bool have_inline = j.contains("weights");
    bool have_file = j.contains("weights_file");
    if (have_inline && have_file) fail(path, "give either weights or weights_file, not both");
    if (!have_inline && !have_file) fail(path, "mlp controller needs weights or weights_file");
    if (have_inline) {
      const json& w = j["weights"];
      if (!w.is_array()) fail(join(path, "weights"), "expected an array of numbers");
      for (size_t i = 0; i < w.size(); ++i)
        c.weights.push_back(as_double(w[i], join(path, "weights") + "[" + std::to_string(i) + "]"));
    } else {
      c.weights_file = as_string(j["weights_file"], join(path, "weights_file"));
    }
    return c;
  }

  fail(join(path, "type"), "expected time_function|mlp");
}

json serialize_controller(const ControllerConfig& config) {
  json j;
  if (const auto* tf = std::get_if<TimeFunctionConfig>(&config)) {
    j["type"] = "time_function";
    j["amplitude"] = tf->amplitude;
    j["frequency"] = tf->frequency;
    j["phase0"] = tf->phase0;
    j["phase_dx"] = tf->phase_dx;
    j["phase_dy"] = tf->phase_dy;
    j["offset_a"] = tf->offset_a;
    j["offset_b"] = tf->offset_b;
    j["ramp_time"] = tf->ramp_time;
  } else {
    const auto& mlp = std::get<MLPConfig>(config);
    j["type"] = "mlp";
    json sensors = json::array();
    for (const SensorSpec& s : mlp.sensors) {
      json sj;
      sj["kind"] = enum_name(kSensorNames, s.kind);
      sj["aggregate"] = enum_name(kAggregateNames, s.aggregate);
      sj["n"] = s.n;
      sensors.push_back(sj);
    }
    j["sensors"] = sensors;
    if (mlp.use_driving) j["driving"] = serialize_time_spec(mlp.driving);
    else j["driving"] = false;
    j["hidden"] = mlp.hidden;
    if (mlp.weights_file.empty()) j["weights"] = mlp.weights;
    else j["weights_file"] = mlp.weights_file;
  }
  return j;
}

TerrainConfig parse_terrain(const json& j, const std::string& path, uint64_t default_seed) {
  as_object(j, path);
  check_keys(j, path,
             {"type", "length", "amplitude", "segment_length", "seed", "friction", "restitution"});
  TerrainConfig t;
  t.seed = default_seed;
  if (auto it = j.find("type"); it != j.end()) {
    std::string name = as_string(*it, join(path, "type"));
    if (name == "flat") t.kind = TerrainConfig::Kind::Flat;
    else if (name == "uneven") t.kind = TerrainConfig::Kind::Uneven;
    else fail(join(path, "type"), "expected flat|uneven");
  }
  t.length = get_double(j, path, "length", t.length);
  t.amplitude = get_double(j, path, "amplitude", t.amplitude);
  t.segment_length = get_double(j, path, "segment_length", t.segment_length);
  if (auto it = j.find("seed"); it != j.end()) t.seed = as_uint(*it, join(path, "seed"));
  t.friction = get_double(j, path, "friction", t.friction);
  t.restitution = get_double(j, path, "restitution", t.restitution);
  if (!(t.length > 0.0)) fail(join(path, "length"), "must be > 0");
  if (t.amplitude < 0.0) fail(join(path, "amplitude"), "must be >= 0");
  if (!(t.segment_length > 0.0)) fail(join(path, "segment_length"), "must be > 0");
  return t;
}

json serialize_terrain(const TerrainConfig& t) {
  json j;
  j["type"] = t.kind == TerrainConfig::Kind::Flat ? "flat" : "uneven";
  j["length"] = t.length;
  j["amplitude"] = t.amplitude;
  j["segment_length"] = t.segment_length;
  j["seed"] = t.seed;
  j["friction"] = t.friction;
  j["restitution"] = t.restitution;
  return j;
}

void parse_task(const json& j, const std::string& path, uint64_t default_seed,
                LocomotionConfig& task) {
  as_object(j, path);
  check_keys(j, path, {"type", "duration", "control_interval", "drop_height", "terrain", "measures"});
  if (auto it = j.find("type"); it != j.end()) {
    std::string name = as_string(*it, join(path, "type"));
    if (name != "locomotion") fail(join(path, "type"), "expected locomotion");
  }
  task.duration = get_double(j, path, "duration", task.duration);
  task.control_interval = get_int(j, path, "control_interval", task.control_interval);
  task.drop_height = get_double(j, path, "drop_height", task.drop_height);
  if (!(task.duration > 0.0)) fail(join(path, "duration"), "must be > 0");
  if (task.control_interval < 0) fail(join(path, "control_interval"), "must be >= 0");
  if (task.drop_height < 0.0) fail(join(path, "drop_height"), "must be >= 0");
  if (auto it = j.find("terrain"); it != j.end())
    task.terrain = parse_terrain(*it, join(path, "terrain"), default_seed);
  else
    task.terrain.seed = default_seed;
  if (auto it = j.find("measures"); it != j.end()) {
    if (!it->is_array()) fail(join(path, "measures"), "expected an array of measure names");
    task.measures.clear();
    for (size_t i = 0; i < it->size(); ++i)
      task.measures.push_back(
          parse_enum(kMeasureNames, (*it)[i], join(path, "measures") + "[" + std::to_string(i) + "]"));
  }
}

json serialize_task(const LocomotionConfig& task) {
  json j;
  j["type"] = "locomotion";
  j["duration"] = task.duration;
  j["control_interval"] = task.control_interval;
  j["drop_height"] = task.drop_height;
  j["terrain"] = serialize_terrain(task.terrain);
  json measures = json::array();
  for (MeasureKind m : task.measures) measures.push_back(enum_name(kMeasureNames, m));
  j["measures"] = measures;
  return j;
}

void parse_settings(const json& j, const std::string& path, Settings& s) {
  as_object(j, path);
  check_keys(j, path, {"dt", "gravity_x", "gravity_y", "velocity_iterations",
                       "position_iterations", "substeps"});
  s.dt = get_double(j, path, "dt", s.dt);
  s.gravity.x = get_double(j, path, "gravity_x", s.gravity.x);
  s.gravity.y = get_double(j, path, "gravity_y", s.gravity.y);
  s.velocity_iterations = get_int(j, path, "velocity_iterations", s.velocity_iterations);
  s.position_iterations = get_int(j, path, "position_iterations", s.position_iterations);
  s.substeps = get_int(j, path, "substeps", s.substeps);
  if (!(s.dt > 0.0)) fail(join(path, "dt"), "must be > 0");
  if (s.velocity_iterations < 1) fail(join(path, "velocity_iterations"), "must be >= 1");
  if (s.position_iterations < 0) fail(join(path, "position_iterations"), "must be >= 0");
  if (s.substeps < 1) fail(join(path, "substeps"), "must be >= 1");
}

json serialize_settings(const Settings& s) {
  json j;
  j["dt"] = s.dt;
  j["gravity_x"] = s.gravity.x;
  j["gravity_y"] = s.gravity.y;
  j["velocity_iterations"] = s.velocity_iterations;
  j["position_iterations"] = s.position_iterations;
  j["substeps"] = s.substeps;
  return j;
}

void parse_ea(const json& j, const std::string& path, EAConfig& ea) {
  as_object(j, path);
  check_keys(j, path,
             {"population", "tournament", "generations", "p_crossover", "p_mutation",
              "mutation_sigma", "alpha_low", "alpha_high", "diversity_retries", "threads"});
  ea.population = get_int(j, path, "population", ea.population);
  ea.tournament = get_int(j, path, "tournament", ea.tournament);
  ea.generations = get_int(j, path, "generations", ea.generations);
  ea.p_crossover = get_double(j, path, "p_crossover", ea.p_crossover);
  ea.p_mutation = get_double(j, path, "p_mutation", ea.p_mutation);
  ea.mutation_sigma = get_double(j, path, "mutation_sigma", ea.mutation_sigma);
  ea.alpha_low = get_double(j, path, "alpha_low", ea.alpha_low);
  ea.alpha_high = get_double(j, path, "alpha_high", ea.alpha_high);
  ea.diversity_retries = get_int(j, path, "diversity_retries", ea.diversity_retries);
  ea.threads = get_int(j, path, "threads", ea.threads);
}

json serialize_ea(const EAConfig& ea) {
  json j;
  j["population"] = ea.population;
  j["tournament"] = ea.tournament;
  j["generations"] = ea.generations;
  j["p_crossover"] = ea.p_crossover;
  j["p_mutation"] = ea.p_mutation;
  j["mutation_sigma"] = ea.mutation_sigma;
  j["alpha_low"] = ea.alpha_low;
  j["alpha_high"] = ea.alpha_high;
  j["diversity_retries"] = ea.diversity_retries;
  j["threads"] = ea.threads;
  return j;
}

RepresentationConfig parse_representation(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"kind", "width", "height", "ramp_time", "shape", "hidden"});
  auto kind_it = j.find("kind");
  if (kind_it == j.end()) fail(join(path, "kind"), "missing field");
  RepresentationConfig c =
      default_representation(parse_enum(kRepresentationNames, *kind_it, join(path, "kind")));
  c.width = get_int(j, path, "width", c.width);
  c.height = get_int(j, path, "height", c.height);
  c.ramp_time = get_double(j, path, "ramp_time", c.ramp_time);
  if (auto it = j.find("shape"); it != j.end())
    c.shape = parse_enum(kShapeNames, *it, join(path, "shape"));
  if (auto it = j.find("hidden"); it != j.end()) {
    if (!it->is_array()) fail(join(path, "hidden"), "expected an array of layer sizes");
    c.hidden.clear();
    for (size_t i = 0; i < it->size(); ++i) {
      int size = as_int((*it)[i], join(path, "hidden") + "[" + std::to_string(i) + "]");
      if (size < 1) fail(join(path, "hidden") + "[" + std::to_string(i) + "]", "must be >= 1");
      c.hidden.push_back(size);
    }
  }
  if (c.width < 1) fail(join(path, "width"), "must be >= 1");
  if (c.height < 1) fail(join(path, "height"), "must be >= 1");
  if (!(c.ramp_time >= 0.0)) fail(join(path, "ramp_time"), "must be >= 0");
  return c;
}

json serialize_representation(const RepresentationConfig& c) {
  json j;
  j["kind"] = enum_name(kRepresentationNames, c.kind);
  switch (c.kind) {
    case RepresentationKind::GaussianBody:
      j["width"] = c.width;
      j["height"] = c.height;
      break;
    case RepresentationKind::PhaseOffsets:
      j["width"] = c.width;
      j["height"] = c.height;
      break;
    case RepresentationKind::EvoDevoSchedule:
      j["width"] = c.width;
      j["height"] = c.height;
      j["ramp_time"] = c.ramp_time;
      break;
    case RepresentationKind::SensingMLP:
      j["shape"] = enum_name(kShapeNames, c.shape);
      j["hidden"] = c.hidden;
      break;
  }
  return j;
}

}  // namespace

SimulationConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  as_object(j, "<root>");
  check_keys(j, "", {"seed", "materials", "body", "controller", "task", "settings", "ea",
                     "representation"});

  SimulationConfig config;
  if (auto it = j.find("seed"); it != j.end()) config.seed = as_uint(*it, "seed");

  if (auto it = j.find("materials"); it != j.end()) {
    as_object(*it, "materials");
    for (const auto& [key, value] : it->items()) {
      if (key.size() != 1 || key == ".")
        fail("materials", "material keys must be single characters other than '.'");
      config.materials[key[0]] = parse_material(value, "materials." + key);
    }
  }

  if (auto it = j.find("body"); it != j.end()) {
    if (!it->is_array()) fail("body", "expected an array of row strings");
    for (size_t i = 0; i < it->size(); ++i)
      config.body.push_back(as_string((*it)[i], "body[" + std::to_string(i) + "]"));
  }

  if (auto it = j.find("controller"); it != j.end())
    config.controller = parse_controller(*it, "controller");

  if (auto it = j.find("settings"); it != j.end())
    parse_settings(*it, "settings", config.task.settings);

  if (auto it = j.find("task"); it != j.end()) {
    parse_task(*it, "task", config.seed, config.task);
  } else {
    config.task.terrain.seed = config.seed;
  }

  if (auto it = j.find("ea"); it != j.end()) {
    config.has_ea = true;
    parse_ea(*it, "ea", config.ea);
  }
  config.ea.seed = config.seed;

  if (auto it = j.find("representation"); it != j.end())
    config.representation = parse_representation(*it, "representation");

  return config;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config error: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimulationConfig& config) {
  json j;
  j["seed"] = config.seed;
  if (!config.materials.empty()) {
    json mats;
    for (const auto& [key, mat] : config.materials) mats[std::string(1, key)] = serialize_material(mat);
    j["materials"] = mats;
  }
  if (!config.body.empty()) j["body"] = config.body;
  if (config.controller) j["controller"] = serialize_controller(*config.controller);
  j["task"] = serialize_task(config.task);
  j["settings"] = serialize_settings(config.task.settings);
  if (config.has_ea) j["ea"] = serialize_ea(config.ea);
  if (config.representation) j["representation"] = serialize_representation(*config.representation);
  return j.dump(2) + "\n";
}

VSRDescription build_description(const std::map<char, MaterialSpec>& materials,
                                 const std::vector<std::string>& body) {
  if (body.empty()) throw ConfigError("config error at body: no rows");
  size_t width = body.front().size();
  if (width == 0) throw ConfigError("config error at body[0]: empty row");
  for (size_t r = 1; r < body.size(); ++r)
    if (body[r].size() != width)
      fail("body[" + std::to_string(r) + "]", "rows must all have the same length");

  int h = static_cast<int>(body.size());
  VSRDescription desc(static_cast<int>(width), h);
  for (int r = 0; r < h; ++r) {
    for (size_t cx = 0; cx < width; ++cx) {
      char c = body[r][cx];
      if (c == '.') continue;
      auto it = materials.find(c);
      if (it == materials.end())
        fail("body[" + std::to_string(r) + "]",
             std::string("character '") + c + "' has no material definition");
      desc.at(static_cast<int>(cx), h - 1 - r) = it->second;
    }
  }
  return desc;
}

ControllerSpec build_controller(const ControllerConfig& config, const VSRDescription& desc,
                                const std::string& base_dir) {
  if (const auto* tf = std::get_if<TimeFunctionConfig>(&config)) {
    TimeFunctionGrid grid(desc.width(), desc.height());
    for (int y = 0; y < desc.height(); ++y) {
      for (int x = 0; x < desc.width(); ++x) {
        if (!desc.occupied(x, y)) continue;
        TimeFunctionSpec spec;
        spec.amplitude = tf->amplitude;
        spec.frequency = tf->frequency;
        spec.phase = tf->phase0 + tf->phase_dx * x + tf->phase_dy * y;
        spec.offset_a = tf->offset_a;
        spec.offset_b = tf->offset_b;
        spec.ramp_time = tf->ramp_time;
        grid.at(x, y) = spec;
      }
    }
    return grid;
  }

  const auto& mlp_config = std::get<MLPConfig>(config);
  MLPControllerSpec spec;
  spec.sensors = mlp_config.sensors;
  spec.use_driving = mlp_config.use_driving;
  spec.driving = mlp_config.driving;
  spec.hidden = mlp_config.hidden;
  if (mlp_config.weights_file.empty()) {
    spec.weights = mlp_config.weights;
  } else {
    std::filesystem::path p(mlp_config.weights_file);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("config error at controller.weights_file: cannot open " + p.string());
    double v;
    while (in >> v) {
      spec.weights.push_back(v);
      in >> std::ws;
      if (in.peek() == ',') in.get();
    }
    if (!in.eof())
      throw ConfigError("config error at controller.weights_file: malformed number in " + p.string());
  }
  return spec;
}

void apply_seed_override(SimulationConfig& config, uint64_t seed) {
  config.seed = seed;
  config.task.terrain.seed = seed;
  config.ea.seed = seed;
}

}  // namespace vsim

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "vsim/config.hpp"
#include "vsim/render.hpp"
#include "vsim/trace.hpp"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitDiverged = 3;

using vsim::SimulationConfig;

int env_threads() {
  const char* env = std::getenv("VOXELSIM_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw vsim::ConfigError("VOXELSIM_THREADS must be a positive integer");
  return static_cast<int>(n);
}

// precedence: --threads flag, then VOXELSIM_THREADS, then the config value;
// 0 picks the hardware concurrency
int resolve_threads(int flag_value, int config_value) {
  int n = flag_value > 0 ? flag_value : env_threads();
  if (n == 0) n = config_value;
  if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

vsim::Scaffolding parse_groups(const std::string& csv) {
  vsim::Scaffolding s = 0;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (item == "side_external") s |= static_cast<vsim::Scaffolding>(vsim::ScaffoldingGroup::SideExternal);
    else if (item == "side_internal") s |= static_cast<vsim::Scaffolding>(vsim::ScaffoldingGroup::SideInternal);
    else if (item == "side_cross") s |= static_cast<vsim::Scaffolding>(vsim::ScaffoldingGroup::SideCross);
    else if (item == "central_cross") s |= static_cast<vsim::Scaffolding>(vsim::ScaffoldingGroup::CentralCross);
    else throw vsim::ConfigError("unknown scaffolding group '" + item + "'");
  }
  if (s == 0) throw vsim::ConfigError("scaffolding group list is empty");
  return s;
}

const char* measure_label(vsim::MeasureKind m) {
  switch (m) {
    case vsim::MeasureKind::TravelVelocity: return "travel_velocity";
    case vsim::MeasureKind::AverageYCenter: return "average_y_center";
    case vsim::MeasureKind::AverageSquaredControlSum: return "average_squared_control_sum";
  }
  return "?";
}

struct SimulateArgs {
  std::string config_path;
  std::string trace_path;
  std::string frames_dir;
  std::optional<uint64_t> seed;
};

int run_simulate(const SimulateArgs& args) {
  SimulationConfig config = vsim::load_config(args.config_path);
  if (args.seed) vsim::apply_seed_override(config, *args.seed);
  if (!config.controller) throw vsim::ConfigError("config error at controller: missing section");

  vsim::VSRDescription desc = vsim::build_description(config.materials, config.body);
  std::string base_dir = std::filesystem::path(args.config_path).parent_path().string();
  vsim::ControllerSpec controller = vsim::build_controller(*config.controller, desc, base_dir);

  std::unique_ptr<vsim::TraceWriter> writer;
  if (!args.trace_path.empty()) writer = std::make_unique<vsim::TraceWriter>(args.trace_path);
  std::vector<vsim::Snapshot> frames;
  vsim::SnapshotSink sink;
  if (writer || !args.frames_dir.empty()) {
    sink = [&](const vsim::Snapshot& snap) {
      if (writer) writer->append(snap);
      if (!args.frames_dir.empty()) frames.push_back(snap);
    };
  }

  vsim::Outcome outcome = vsim::run_locomotion(desc, controller, config.task, sink);
  if (writer) writer->close();
  if (!args.frames_dir.empty()) {
    int n = vsim::render_frames(frames, args.frames_dir, vsim::FrameSpec{});
    std::printf("frames_written = %d\n", n);
  }

  std::printf("control_steps = %ld\n", outcome.control_steps);
  for (size_t i = 0; i < config.task.measures.size(); ++i)
    std::printf("%s = %.9g\n", measure_label(config.task.measures[i]), outcome.values[i]);
  if (outcome.diverged) {
    std::fprintf(stderr, "simulation diverged; measures report worst-case values\n");
    return kExitDiverged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic 2-D voxel soft robot simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run one locomotion simulation");
  simulate->add_option("config", sim.config_path, "JSON configuration file")->required();
  simulate->add_option("--trace", sim.trace_path, "write a per-control-step CSV trace");
  simulate->add_option("--frames", sim.frames_dir, "write SVG frames into this directory");
  simulate->add_option("--seed", sim.seed, "override every seed in the configuration");

  CLI::App* characterize = app.add_subcommand("characterize", "mechanical measurement rigs");
  characterize->require_subcommand(1);

  struct {
    int width = 10, height = 4;
    double force = 30.0;
    double time = 60.0;
    std::vector<double> frequencies{4.0, 8.0, 15.0, 30.0};
    std::string groups;
  } stat;
  CLI::App* cstatic = characterize->add_subcommand("static", "constant tip load on a beam");
  cstatic->add_option("--width", stat.width, "beam width, voxels");
  cstatic->add_option("--height", stat.height, "beam height, voxels");
  cstatic->add_option("--force", stat.force, "total tip load, N");
  cstatic->add_option("--time", stat.time, "settling time, s");
  cstatic->add_option("--frequency", stat.frequencies, "spring frequencies to sweep, Hz");
  cstatic->add_option("--groups", stat.groups, "comma list of scaffolding groups");

  struct {
    int width = 10, height = 4;
    double force = 30.0;
    double frequency = 8.0;
    double impulse = 0.5;
    double time = 20.0;
    std::string out;
    std::string groups;
  } dyn;
  CLI::App* cdynamic = characterize->add_subcommand("dynamic", "impulse tip load on a beam");
  cdynamic->add_option("--width", dyn.width, "beam width, voxels");
  cdynamic->add_option("--height", dyn.height, "beam height, voxels");
  cdynamic->add_option("--force", dyn.force, "total tip load, N");
  cdynamic->add_option("--frequency", dyn.frequency, "spring frequency, Hz");
  cdynamic->add_option("--impulse", dyn.impulse, "load duration, s");
  cdynamic->add_option("--time", dyn.time, "observation time, s");
  cdynamic->add_option("--out", dyn.out, "write the t,displacement series to this CSV");
  cdynamic->add_option("--groups", dyn.groups, "comma list of scaffolding groups");

  struct {
    int width = 9;
    double duration = 60.0;
  } perf;
  CLI::App* cperf = characterize->add_subcommand("perf", "stepping throughput of a worm robot");
  cperf->add_option("--width", perf.width, "worm width, voxels (body is width x 3)");
  cperf->add_option("--duration", perf.duration, "simulated time, s");

  struct {
    std::string config_path;
    std::string history_path;
    std::string best_path;
    std::optional<uint64_t> seed;
    int threads = 0;
    std::optional<int> generations;
  } evo;
  CLI::App* evolve = app.add_subcommand("evolve", "optimize a robot for locomotion");
  evolve->add_option("config", evo.config_path, "JSON configuration file")->required();
  evolve->add_option("--history", evo.history_path, "write per-generation statistics CSV");
  evolve->add_option("--best", evo.best_path, "write the best genotype, one value per line");
  evolve->add_option("--seed", evo.seed, "override every seed in the configuration");
  evolve->add_option("--threads", evo.threads, "fitness evaluation workers (0 = hardware)");
  evolve->add_option("--generations", evo.generations, "override the generation count");

  struct {
    std::string trace_path;
    std::string out_dir;
    vsim::FrameSpec spec;
    bool moving_viewport = false;
  } ren;
  CLI::App* render = app.add_subcommand("render", "turn a trace CSV into SVG frames");
  render->add_option("trace", ren.trace_path, "trace CSV produced by simulate")->required();
  render->add_option("outdir", ren.out_dir, "output directory for frames")->required();
  render->add_option("--every", ren.spec.every, "keep every n-th snapshot");
  render->add_option("--ppm", ren.spec.pixels_per_meter, "pixels per meter");
  render->add_option("--max-area-change", ren.spec.max_area_change, "color scale half-range");
  render->add_flag("--moving-viewport", ren.moving_viewport, "recenter each frame on the robot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);

    if (cstatic->parsed()) {
      vsim::CantileverConfig config;
      config.w = stat.width;
      config.h = stat.height;
      config.force = stat.force;
      config.total_time = stat.time;
      if (!stat.groups.empty()) config.material.scaffolding = parse_groups(stat.groups);
      std::printf("frequency_hz,displacement_m\n");
      for (double f : stat.frequencies) {
        config.material.spring_frequency = f;
        std::printf("%.9g,%.9g\n", f, vsim::run_cantilever_static(config));
        std::fflush(stdout);
      }
      return 0;
    }

    if (cdynamic->parsed()) {
      vsim::CantileverConfig config;
      config.w = dyn.width;
      config.h = dyn.height;
      config.force = dyn.force;
      config.material.spring_frequency = dyn.frequency;
      config.impulse_duration = dyn.impulse;
      config.total_time = dyn.time;
      if (!dyn.groups.empty()) config.material.scaffolding = parse_groups(dyn.groups);
      auto series = vsim::run_cantilever_dynamic(config);
      std::FILE* out = stdout;
      if (!dyn.out.empty()) {
        out = std::fopen(dyn.out.c_str(), "wb");
        if (!out) throw vsim::ConfigError("cannot open output file " + dyn.out);
      }
      std::fprintf(out, "t,displacement_m\n");
      for (const auto& [t, d] : series) std::fprintf(out, "%.9g,%.9g\n", t, d);
      if (out != stdout) std::fclose(out);
      return 0;
    }

    if (cperf->parsed()) {
      vsim::PerfConfig config;
      config.w = perf.width;
      config.duration = perf.duration;
      vsim::PerfReport report = vsim::measure_svsps(config);
      std::printf("voxels = %d\n", report.n_voxels);
      std::printf("steps = %ld\n", report.n_steps);
      std::printf("stepping_seconds = %.9g\n", report.tau_seconds);
      std::printf("voxel_steps_per_second = %.9g\n", report.svsps);
      return 0;
    }

    if (evolve->parsed()) {
      SimulationConfig config = vsim::load_config(evo.config_path);
      if (evo.seed) vsim::apply_seed_override(config, *evo.seed);
      if (!config.representation)
        throw vsim::ConfigError("config error at representation: missing section");
      vsim::EAConfig ea = config.ea;
      if (evo.generations) ea.generations = *evo.generations;
      ea.threads = resolve_threads(evo.threads, ea.threads);

      const vsim::RepresentationConfig& rep = *config.representation;
      const vsim::LocomotionConfig& task = config.task;
      auto fitness = [&](const vsim::Genotype& g) {
        return vsim::fitness_relative_velocity(rep, g, task);
      };
      int dim = vsim::representation_dimension(rep);
      auto [lo, hi] = vsim::representation_init_range(rep);
      vsim::EvolveResult result = vsim::evolve(ea, dim, lo, hi, fitness);

      for (const vsim::GenerationRecord& rec : result.history)
        std::printf("generation %d: best = %.9g, median = %.9g, sd = %.9g\n", rec.iteration,
                    rec.best, rec.median, rec.sd);
      std::printf("best_fitness = %.9g\n", result.best.fitness);

      if (!evo.history_path.empty()) {
        std::ofstream out(evo.history_path);
        if (!out) throw vsim::ConfigError("cannot open output file " + evo.history_path);
        out << "iteration,best,median,sd,best_hash\n";
        char line[160];
        for (const vsim::GenerationRecord& rec : result.history) {
          std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%016llx\n", rec.iteration, rec.best,
                        rec.median, rec.sd, static_cast<unsigned long long>(rec.best_hash));
          out << line;
        }
      }
      if (!evo.best_path.empty()) {
        std::ofstream out(evo.best_path);
        if (!out) throw vsim::ConfigError("cannot open output file " + evo.best_path);
        char line[48];
        for (double v : result.best.genotype) {
          std::snprintf(line, sizeof(line), "%.17g\n", v);
          out << line;
        }
      }
      return 0;
    }

    if (render->parsed()) {
      ren.spec.fixed_viewport = !ren.moving_viewport;
      std::vector<vsim::Snapshot> snapshots = vsim::read_trace(ren.trace_path);
      int n = vsim::render_frames(snapshots, ren.out_dir, ren.spec);
      std::printf("frames_written = %d\n", n);
      return 0;
    }
  } catch (const vsim::SimulationDiverged& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
  return kExitBadInput;
}

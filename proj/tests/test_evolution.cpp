#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <vector>

#include "vsim/representations.hpp"

using namespace vsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// byte-level FNV-1a, written out from the published constants
uint64_t fnv1a(const std::vector<double>& g) {
  uint64_t h = 14695981039346656037ull;
  for (double v : g) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof bytes);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

double sphere(const Genotype& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("gaussian mutation adds independent noise of the requested scale") {
  SeededRng rng(1);
  Genotype zero(20000, 0.0);
  Genotype mutated = gaussian_mutation(zero, 0.15, rng);
  REQUIRE(mutated.size() == zero.size());
  double sum = 0, sum2 = 0;
  for (double v : mutated) {
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / mutated.size();
  double sd = std::sqrt(sum2 / mutated.size() - mean * mean);
  CHECK(std::fabs(mean) < 0.005);
  CHECK(sd == doctest::Approx(0.15).epsilon(0.03));
  // stacking two mutations compounds the variance
  SeededRng rng2(2);
  Genotype twice = gaussian_mutation(mutated, 0.15, rng2);
  double diff_sum2 = 0;
  for (size_t i = 0; i < twice.size(); ++i) {
    diff_sum2 += (twice[i] - mutated[i]) * (twice[i] - mutated[i]);
  }
  CHECK(std::sqrt(diff_sum2 / twice.size()) == doctest::Approx(0.15).epsilon(0.03));
}

TEST_CASE("crossover blends per coordinate inside the extended segment") {
  SeededRng rng(3);
  Genotype x1(5000, 0.0), x2(5000, 1.0);
  Genotype child = extended_segment_crossover(x1, x2, -1.0, 2.0, rng);
  REQUIRE(child.size() == x1.size());
  bool outside_plain_hull = false;
  for (double v : child) {
    CHECK(v >= -1.0);
    CHECK(v <= 2.0);
    outside_plain_hull = outside_plain_hull || v < 0.0 || v > 1.0;
  }
  // the alpha law leaves [0,1] two thirds of the time; 5000 draws make
  // missing it astronomically unlikely
  CHECK(outside_plain_hull);

  // alphas are drawn per coordinate, not once per child
  std::set<long long> distinct;
  for (double v : child) distinct.insert(std::llround(v * 1e12));
  CHECK(distinct.size() > 100);

  // equal parents reproduce themselves
  Genotype same = extended_segment_crossover(x2, x2, -1.0, 2.0, rng);
  CHECK(same == x2);
}

TEST_CASE("crossover hull property on arbitrary parents") {
  SeededRng rng(9);
  Genotype x1, x2;
  for (int i = 0; i < 300; ++i) {
    x1.push_back(rng.uniform(-5, 5));
    x2.push_back(rng.uniform(-5, 5));
  }
  Genotype child = extended_segment_crossover(x1, x2, -1.0, 2.0, rng);
  for (size_t i = 0; i < child.size(); ++i) {
    double lo = std::min(x1[i], x2[i]), hi = std::max(x1[i], x2[i]);
    double span = hi - lo;
    CHECK(child[i] >= lo - span - 1e-12);
    CHECK(child[i] <= hi + span + 1e-12);
  }
}

TEST_CASE("tournament picks the sampled minimum with index tie-break") {
  std::vector<Individual> pop;
  for (double f : {5.0, 1.0, 3.0, 1.0}) pop.push_back({{}, f});
  SeededRng rng(4);
  // 64 draws with replacement sample everyone almost surely; the two tied
  // minima resolve to the lower index
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(tournament_select(pop, 64, rng) == 1);
  }
  // selection pressure grows with tournament size
  std::vector<Individual> graded;
  for (int i = 0; i < 10; ++i) graded.push_back({{}, static_cast<double>(i)});
  SeededRng r1(5), r8(5);
  double mean1 = 0, mean8 = 0;
  for (int i = 0; i < 3000; ++i) {
    mean1 += graded[tournament_select(graded, 1, r1)].fitness;
    mean8 += graded[tournament_select(graded, 8, r8)].fitness;
  }
  CHECK(mean8 / 3000 < mean1 / 3000 - 1.0);
}

TEST_CASE("genotype hash matches a direct byte-level computation") {
  std::vector<Genotype> gs = {
      {}, {0.0}, {1.0, -2.5, 3.75}, {1e-300, 1e300, -0.0}};
  std::set<uint64_t> seen;
  for (const Genotype& g : gs) {
    CHECK(genotype_hash(g) == fnv1a(g));
    seen.insert(genotype_hash(g));
  }
  CHECK(seen.size() == gs.size());
  // 0.0 and -0.0 differ in bytes, so they must differ in hash
  CHECK(genotype_hash({0.0}) != genotype_hash({-0.0}));
}

TEST_CASE("evolution on the sphere converges monotonically") {
  EAConfig cfg;
  cfg.population = 16;
  cfg.tournament = 4;
  cfg.generations = 25;
  cfg.seed = 11;
  EvolveResult r = evolve(cfg, 5, -1.0, 1.0, sphere);
  REQUIRE(r.history.size() == 26);
  for (size_t i = 0; i < r.history.size(); ++i) {
    CHECK(r.history[i].iteration == static_cast<int>(i));
    if (i > 0) CHECK(r.history[i].best <= r.history[i - 1].best);
    CHECK(r.history[i].best <= r.history[i].median);
  }
  CHECK(r.history.back().best < 0.5 * r.history.front().best);
  CHECK(r.best.fitness == r.history.back().best);
  CHECK(r.history.back().best_hash == genotype_hash(r.best.genotype));
  CHECK(sphere(r.best.genotype) == r.best.fitness);
}

TEST_CASE("zero generations report the initial population only") {
  EAConfig cfg;
  cfg.population = 8;
  cfg.generations = 0;
  cfg.seed = 2;
  EvolveResult r = evolve(cfg, 3, -1.0, 1.0, sphere);
  REQUIRE(r.history.size() == 1);
  CHECK(r.history[0].iteration == 0);
  CHECK(r.best.fitness == r.history[0].best);
}

TEST_CASE("same seed replays, thread count does not matter") {
  EAConfig cfg;
  cfg.population = 12;
  cfg.tournament = 3;
  cfg.generations = 10;
  cfg.seed = 77;
  EvolveResult a = evolve(cfg, 4, -2.0, 2.0, sphere);
  EvolveResult b = evolve(cfg, 4, -2.0, 2.0, sphere);
  cfg.threads = 4;
  EvolveResult c = evolve(cfg, 4, -2.0, 2.0, sphere);
  REQUIRE(a.history.size() == b.history.size());
  REQUIRE(a.history.size() == c.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].best == b.history[i].best);
    CHECK(a.history[i].best == c.history[i].best);
    CHECK(a.history[i].median == c.history[i].median);
    CHECK(a.history[i].best_hash == c.history[i].best_hash);
  }
  CHECK(a.best.genotype == c.best.genotype);
}

TEST_CASE("throwing or non-finite fitness becomes a worst-case score") {
  EAConfig cfg;
  cfg.population = 10;
  cfg.generations = 8;
  cfg.seed = 5;
  auto spiky = [](const Genotype& g) {
    if (g[0] > 0.75) throw std::runtime_error("boom");
    if (g[0] < -0.75) return std::nan("");
    return sphere(g);
  };
  EvolveResult r = evolve(cfg, 3, -0.5, 0.5, spiky);
  for (const GenerationRecord& rec : r.history) {
    CHECK(std::isfinite(rec.best));
    if (&rec != &r.history.front()) CHECK(rec.best <= r.history.front().best);
  }
  CHECK(std::isfinite(r.best.fitness));
  CHECK(std::fabs(r.best.genotype[0]) <= 0.75);
}

TEST_CASE("breeding survives a degenerate operator setup") {
  // point init range plus crossover-only breeding: every child is a bitwise
  // duplicate, so the diversity retries always exhaust and the run still ends
  EAConfig cfg;
  cfg.population = 6;
  cfg.generations = 3;
  cfg.p_crossover = 1.0;
  cfg.p_mutation = 0.0;
  cfg.seed = 1;
  EvolveResult r = evolve(cfg, 2, 0.5, 0.5, sphere);
  REQUIRE(r.history.size() == 4);
  for (const GenerationRecord& rec : r.history) {
    CHECK(rec.best == r.history[0].best);
  }
}

TEST_CASE("invalid evolution configurations are rejected") {
  EAConfig cfg;
  auto fit = sphere;
  cfg.p_crossover = 0.5;
  cfg.p_mutation = 0.2;
  CHECK_THROWS_AS(evolve(cfg, 3, -1, 1, fit), std::invalid_argument);
  cfg = {};
  cfg.population = 0;
  CHECK_THROWS_AS(evolve(cfg, 3, -1, 1, fit), std::invalid_argument);
  cfg = {};
  cfg.tournament = 0;
  CHECK_THROWS_AS(evolve(cfg, 3, -1, 1, fit), std::invalid_argument);
  cfg = {};
  CHECK_THROWS_AS(evolve(cfg, 0, -1, 1, fit), std::invalid_argument);
}

TEST_CASE("representation dimensions and init ranges") {
  RepresentationConfig g;
  g.kind = RepresentationKind::GaussianBody;
  g.width = 10;
  g.height = 10;
  CHECK(representation_dimension(g) == 80);
  CHECK(representation_init_range(g) == std::pair{0.0, 1.0});

  RepresentationConfig p;
  p.kind = RepresentationKind::PhaseOffsets;
  p.width = 11;
  p.height = 4;
  CHECK(representation_dimension(p) == 44);
  CHECK(representation_init_range(p) == std::pair{-kPi, kPi});

  RepresentationConfig e;
  e.kind = RepresentationKind::EvoDevoSchedule;
  e.width = 11;
  e.height = 4;
  CHECK(representation_dimension(e) == 132);
  CHECK(representation_init_range(e) == std::pair{-kPi, kPi});

  RepresentationConfig m;
  m.kind = RepresentationKind::SensingMLP;
  m.shape = RobotShape::Worm;
  CHECK(representation_dimension(m) == 104);
  m.shape = RobotShape::Biped;
  CHECK(representation_dimension(m) == 228);
  m.shape = RobotShape::Tripod;
  CHECK(representation_dimension(m) == 400);
  CHECK(representation_init_range(m) == std::pair{-1.0, 1.0});

  CHECK(default_representation(RepresentationKind::GaussianBody).width == 10);
  CHECK(default_representation(RepresentationKind::PhaseOffsets).width == 11);
  CHECK(default_representation(RepresentationKind::PhaseOffsets).height == 4);
}

TEST_CASE("walker shapes have the advertised layouts") {
  MaterialSpec m;
  VSRDescription worm = shape_description(RobotShape::Worm, m);
  CHECK(worm.width() == 4);
  CHECK(worm.height() == 1);
  CHECK(worm.count_occupied() == 4);

  VSRDescription biped = shape_description(RobotShape::Biped, m);
  CHECK(biped.width() == 4);
  CHECK(biped.height() == 2);
  CHECK(biped.count_occupied() == 6);
  // trunk on top, legs under the corners
  for (int x = 0; x < 4; ++x) CHECK(biped.occupied(x, 1));
  CHECK(biped.occupied(0, 0));
  CHECK_FALSE(biped.occupied(1, 0));
  CHECK_FALSE(biped.occupied(2, 0));
  CHECK(biped.occupied(3, 0));

  VSRDescription tripod = shape_description(RobotShape::Tripod, m);
  CHECK(tripod.width() == 5);
  CHECK(tripod.height() == 2);
  CHECK(tripod.count_occupied() == 8);
  for (int x = 0; x < 5; ++x) CHECK(tripod.occupied(x, 1));
  CHECK(tripod.occupied(0, 0));
  CHECK(tripod.occupied(2, 0));
  CHECK(tripod.occupied(4, 0));
  CHECK_FALSE(tripod.occupied(1, 0));
  CHECK_FALSE(tripod.occupied(3, 0));
}

TEST_CASE("decoder material palette") {
  const auto& mats = gaussian_body_materials();
  CHECK(mats[0].spring_frequency == doctest::Approx(25.0));
  CHECK(mats[0].scaffolding == kScaffoldingAll);
  CHECK(mats[1].spring_frequency == doctest::Approx(5.0));
  CHECK(mats[1].scaffolding ==
        (static_cast<Scaffolding>(ScaffoldingGroup::SideExternal) |
         static_cast<Scaffolding>(ScaffoldingGroup::CentralCross)));
  CHECK(mats[2].spring_frequency == doctest::Approx(8.0));
  CHECK(mats[3].spring_frequency == doctest::Approx(8.0));
}

TEST_CASE("single-gaussian genotypes label exactly one cell") {
  // one blob of material 2 centered on grid point (3,3) of a 5x5 grid, just
  // above the threshold; every other field is zero
  Genotype g(80, 0.0);
  int base = (2 * 5 + 0) * 4;  // material 2, tuple 0
  g[base + 0] = 0.5;           // maps to x = 1 + 0.5 * 4 = 3
  g[base + 1] = 0.5;
  g[base + 2] = 1.0;                                 // sigma
  g[base + 3] = std::sqrt(2 * kPi) * 1.000001;  // peak just above 1
  Grid2D<int> labels = gaussian_body_labels(g, 5, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      REQUIRE(labels.occupied(x, y));
      CHECK(*labels.at(x, y) == ((x == 2 && y == 2) ? 2 : -1));
    }
  }
}

TEST_CASE("label threshold and tie rules") {
  auto blob = [](Genotype& g, int material, double q_scale) {
    int base = (material * 5 + 0) * 4;
    g[base + 0] = 0.5;
    g[base + 1] = 0.5;
    g[base + 2] = 1.0;
    g[base + 3] = std::sqrt(2 * kPi) * q_scale;
  };
  Genotype below(80, 0.0);
  blob(below, 1, 0.999);
  CHECK(*gaussian_body_labels(below, 5, 5).at(2, 2) == -1);

  // equal mixtures for materials 1 and 3: the tie goes to the lower index
  Genotype tie(80, 0.0);
  blob(tie, 1, 1.5);
  blob(tie, 3, 1.5);
  CHECK(*gaussian_body_labels(tie, 5, 5).at(2, 2) == 1);

  // a clearly larger field wins regardless of order
  Genotype win(80, 0.0);
  blob(win, 3, 2.0);
  blob(win, 0, 1.5);
  CHECK(*gaussian_body_labels(win, 5, 5).at(2, 2) == 3);
}

TEST_CASE("scaling every charge up preserves occupied labels") {
  SeededRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Genotype g;
    for (int i = 0; i < 80; ++i) g.push_back(rng.uniform(0.0, 1.0));
    Genotype scaled(g);
    for (int m = 0; m < 4; ++m) {
      for (int i = 0; i < 5; ++i) scaled[(m * 5 + i) * 4 + 3] *= 3.0;
    }
    Grid2D<int> a = gaussian_body_labels(g, 5, 5);
    Grid2D<int> b = gaussian_body_labels(scaled, 5, 5);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        if (*a.at(x, y) >= 0) CHECK(*b.at(x, y) == *a.at(x, y));
      }
    }
  }
}

TEST_CASE("gaussian decode keeps the largest region or fails cleanly") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::GaussianBody;
  cfg.width = 5;
  cfg.height = 5;

  Genotype empty(80, 0.0);
  CHECK_FALSE(decode_robot(cfg, empty).has_value());

  // two blobs of different materials three cells apart: the wider one
  // (sigma spans neighbors) survives, the point blob does not
  Genotype g(80, 0.0);
  int a = (0 * 5 + 0) * 4;
  g[a + 0] = 0.0;  // x = 1
  g[a + 1] = 0.0;
  g[a + 2] = 1.2;
  g[a + 3] = 3.0 * std::sqrt(2 * kPi);
  int b = (2 * 5 + 0) * 4;
  g[b + 0] = 1.0;  // x = 5
  g[b + 1] = 1.0;
  g[b + 2] = 0.5;
  g[b + 3] = 1.2 * std::sqrt(2 * kPi) * 0.5;
  auto robot = decode_robot(cfg, g);
  REQUIRE(robot.has_value());
  CHECK(robot->description.occupied(0, 0));
  CHECK_FALSE(robot->description.occupied(4, 4));
  // the kept voxels carry material 0's stiffness
  CHECK(robot->description.at(0, 0)->spring_frequency == doctest::Approx(25.0));
}

TEST_CASE("decoders reject off-by-one genotype lengths") {
  for (RepresentationKind k :
       {RepresentationKind::GaussianBody, RepresentationKind::PhaseOffsets,
        RepresentationKind::EvoDevoSchedule, RepresentationKind::SensingMLP}) {
    RepresentationConfig cfg = default_representation(k);
    int p = representation_dimension(cfg);
    CHECK_THROWS_AS(decode_robot(cfg, Genotype(p - 1, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(decode_robot(cfg, Genotype(p + 1, 0.1)), std::invalid_argument);
    if (k != RepresentationKind::GaussianBody) {
      CHECK(decode_robot(cfg, Genotype(p, 0.1)).has_value());
    }
  }
}

TEST_CASE("phase decode wires one oscillator per cell in scan order") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::PhaseOffsets;
  cfg.width = 3;
  cfg.height = 2;
  Genotype g;
  for (int i = 0; i < 6; ++i) g.push_back(i * 0.1);
  auto robot = decode_robot(cfg, g);
  REQUIRE(robot.has_value());
  CHECK(robot->description.count_occupied() == 6);
  const auto& grid = std::get<TimeFunctionGrid>(robot->controller);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) {
      const TimeFunctionSpec& tf = *grid.at(x, y);
      CHECK(tf.amplitude == doctest::Approx(1.0));
      CHECK(tf.frequency == doctest::Approx(1.0));
      CHECK(tf.phase == doctest::Approx((y * 3 + x) * 0.1));
      CHECK(tf.offset_a == 0.0);
      CHECK(tf.offset_b == 0.0);
    }
  }
}

TEST_CASE("evodevo decode parses phase and offset triples") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::EvoDevoSchedule;
  cfg.width = 2;
  cfg.height = 1;
  cfg.ramp_time = 60.0;
  // triples (phi, a, b) per voxel
  Genotype g = {0.3, -0.2, 0.4, 1.1, 0.0, -0.5};
  auto robot = decode_robot(cfg, g);
  REQUIRE(robot.has_value());
  const auto& grid = std::get<TimeFunctionGrid>(robot->controller);
  const TimeFunctionSpec& v0 = *grid.at(0, 0);
  CHECK(v0.phase == doctest::Approx(0.3));
  CHECK(v0.offset_a == doctest::Approx(-0.2));
  CHECK(v0.offset_b == doctest::Approx(0.4));
  CHECK(v0.ramp_time == doctest::Approx(60.0));
  CHECK(v0.value(0.0) == doctest::Approx(std::sin(0.3) - 0.2));
  const TimeFunctionSpec& v1 = *grid.at(1, 0);
  CHECK(v1.phase == doctest::Approx(1.1));
  CHECK(v1.value(60.0) ==
        doctest::Approx(std::sin(2 * kPi * 60 + 1.1) - 0.5).epsilon(1e-6));
}

TEST_CASE("sensing decode builds the pinned perceptron wiring") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::SensingMLP;
  cfg.shape = RobotShape::Worm;
  Genotype g(104, 0.01);
  auto robot = decode_robot(cfg, g);
  REQUIRE(robot.has_value());
  const auto& mlp = std::get<MLPControllerSpec>(robot->controller);
  REQUIRE(mlp.sensors.size() == 6);
  for (const SensorSpec& s : mlp.sensors) CHECK(s.n == 5);
  CHECK(mlp.use_driving);
  CHECK(mlp.driving.amplitude == doctest::Approx(1.0));
  CHECK(mlp.driving.frequency == doctest::Approx(1.0));
  CHECK(mlp.hidden.empty());
  CHECK(mlp.weights == g);
  // three sensed quantities, each with a mean and a difference window
  int mean_count = 0, diff_count = 0;
  std::set<SensorKind> kinds;
  for (const SensorSpec& s : mlp.sensors) {
    kinds.insert(s.kind);
    mean_count += s.aggregate == Aggregate::MeanOfLast;
    diff_count += s.aggregate == Aggregate::NthDifference;
  }
  CHECK(mean_count == 3);
  CHECK(diff_count == 3);
  CHECK(kinds == std::set<SensorKind>{SensorKind::AreaRatio, SensorKind::RotatedXVelocity,
                                      SensorKind::RotatedYVelocity});
}

TEST_CASE("relative velocity fitness is finite, strict on size, inf on empty bodies") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::PhaseOffsets;
  cfg.width = 3;
  cfg.height = 1;
  LocomotionConfig task;
  task.duration = 4.0;

  Genotype still(3, 0.0);
  CHECK(std::isfinite(fitness_relative_velocity(cfg, still, task)));

  CHECK_THROWS_AS(fitness_relative_velocity(cfg, Genotype(7, 0.0), task),
                  std::invalid_argument);

  RepresentationConfig gb;
  gb.kind = RepresentationKind::GaussianBody;
  gb.width = 5;
  gb.height = 5;
  CHECK(fitness_relative_velocity(gb, Genotype(80, 0.0), task) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("fitness agrees with the underlying locomotion measure") {
  RepresentationConfig cfg;
  cfg.kind = RepresentationKind::PhaseOffsets;
  cfg.width = 3;
  cfg.height = 1;
  Genotype g = {0.0, kPi / 4, kPi / 2};
  LocomotionConfig task;
  task.duration = 5.0;
  auto robot = decode_robot(cfg, g);
  REQUIRE(robot.has_value());
  LocomotionConfig probe = task;
  probe.measures = {MeasureKind::TravelVelocity};
  Outcome out = run_locomotion(robot->description, robot->controller, probe);
  double expect = -out.values[0] / 3.0;  // widest extent: 3 voxels
  CHECK(fitness_relative_velocity(cfg, g, task) == doctest::Approx(expect).epsilon(1e-12));
}

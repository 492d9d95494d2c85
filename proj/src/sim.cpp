#include "hatchling/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hatchling/kinematics.hpp"

namespace hatchling::sim {

void Arena::validate() const {
  if (!(width_cm > 0.0) || !(height_cm > 0.0)) {
    throw ConfigError("arena dimensions must be positive");
  }
  if (segments.empty()) {
    throw ConfigError("arena needs at least one terrain segment");
  }
  if (segments.front().from_x_cm != 0.0) {
    throw ConfigError("arena segments must start at x = 0");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].to_x_cm > segments[i].from_x_cm)) {
      throw ConfigError("arena segments must have positive extent");
    }
    if (i > 0 && segments[i].from_x_cm != segments[i - 1].to_x_cm) {
      throw ConfigError("arena segments must tile without gaps");
    }
  }
  if (segments.back().to_x_cm != width_cm) {
    throw ConfigError("arena segments must tile the full width");
  }
}

terrain::TerrainType Arena::terrain_at(double x_cm) const {
  for (const ArenaSegment& seg : segments) {
    if (x_cm < seg.to_x_cm) return seg.terrain;
  }
  return segments.back().terrain;  // open end or the far wall itself
}

Arena Arena::single(terrain::TerrainType terrain, double width_cm,
                    double height_cm) {
  Arena a;
  a.width_cm = width_cm;
  a.height_cm = height_cm;
  a.segments = {{0.0, width_cm, terrain}};
  a.validate();
  return a;
}

Arena Arena::transit_course(double height_cm) {
  Arena a;
  a.width_cm = 105.0;
  a.height_cm = height_cm;
  a.open_ended = true;
  a.segments = {{0.0, 35.0, terrain::TerrainType::FlatFoam},
                {35.0, 70.0, terrain::TerrainType::Rocks},
                {70.0, 105.0, terrain::TerrainType::DrySand}};
  a.validate();
  return a;
}

StopRule StopRule::max_cycles(long n) {
  if (n < 0) throw RangeError("max_cycles must be nonnegative");
  return {Kind::MaxCycles, static_cast<double>(n)};
}

StopRule StopRule::distance(double cm) {
  if (!(cm > 0.0)) throw RangeError("distance stop must be positive");
  return {Kind::Distance, cm};
}

StopRule StopRule::full_turn(double deg) {
  if (!(deg > 0.0)) throw RangeError("full_turn stop must be positive");
  return {Kind::FullTurn, deg};
}

terrain::TransitPolicy TrialConfig::transit_policy() const {
  if (adaptive) return terrain::TransitPolicy::Adaptive;
  switch (initial_gait.kind) {
    case gait::GaitKind::Diagonal:
      return terrain::TransitPolicy::FixedDiagonal;
    case gait::GaitKind::AllTogether:
      return terrain::TransitPolicy::FixedAllTogether;
    default:
      throw ConfigError(
          "multi-terrain courses need a forward gait or the adaptive policy");
  }
}

void TrialConfig::validate() const {
  arena.validate();
  path.validate();
  if (!seed) throw ConfigError("trial seed is mandatory");
  if (initial_gait.is_correction()) {
    throw ConfigError("correction gaits cannot be scheduled directly");
  }
  if (adaptive) {
    if (policy == nullptr) {
      throw ConfigError("adaptive trials need a gait policy");
    }
    if (initial_gait.is_turning()) {
      throw ConfigError("adaptive trials start from a forward gait");
    }
  }
  if (!arena.single_terrain()) {
    (void)transit_policy();  // throws on a turning gait
  }
  if (correction_enabled && initial_gait.is_turning()) {
    throw ConfigError(
        "corrections blend with forward gaits; disable them for turning "
        "trials");
  }
  switch (stop.kind) {
    case StopRule::Kind::MaxCycles:
      if (stop.value < 0.0) throw ConfigError("max_cycles must be >= 0");
      break;
    case StopRule::Kind::Distance:
      if (!(stop.value > 0.0)) throw ConfigError("distance stop must be > 0");
      break;
    case StopRule::Kind::FullTurn:
      if (!(stop.value > 0.0)) throw ConfigError("full_turn stop must be > 0");
      break;
  }
  if (!(mass_kg > 0.0)) throw ConfigError("mass must be positive");
  if (!(g_m_s2 > 0.0)) throw ConfigError("g must be positive");
  if (!(cycle_period_s > 0.0)) throw ConfigError("cycle period must be positive");
  if (!(correction_threshold_cm > 0.0)) {
    throw ConfigError("correction threshold must be positive");
  }
  if (!(correction_forward_fraction >= 0.0 &&
        correction_forward_fraction <= 1.0)) {
    throw ConfigError("correction forward fraction must lie in [0, 1]");
  }
  if (imu_noise_std_cm < 0.0) {
    throw ConfigError("imu noise stddev must be nonnegative");
  }
  if (!(color_misread_prob >= 0.0 && color_misread_prob < 1.0)) {
    throw ConfigError("color misread probability must lie in [0, 1)");
  }
  if (start.x_cm < 0.0 || start.x_cm > arena.width_cm || start.y_cm < 0.0 ||
      start.y_cm > arena.height_cm) {
    throw ConfigError("start pose must lie inside the arena");
  }
}

namespace {

// The forward-motion entry for the current state: the transit column on a
// multi-terrain course, the per-terrain cell otherwise.
const terrain::PerformanceEntry& forward_entry(
    const TrialConfig& config, const terrain::CalibrationTable& table,
    terrain::TerrainType ground, const gait::GaitPattern& active) {
  if (!config.arena.single_terrain()) {
    return table.transit(config.morphology.stiffness, config.transit_policy());
  }
  return table.lookup(ground, config.morphology, terrain::family_of(active));
}

double projected_distance(const TrialConfig& config,
                          const sensors::RobotPose& pose) {
  const double len = std::hypot(config.path.dir_x, config.path.dir_y);
  const double dx = pose.x_cm - config.start.x_cm;
  const double dy = pose.y_cm - config.start.y_cm;
  return (dx * config.path.dir_x + dy * config.path.dir_y) / len;
}

}  // namespace

CycleRecord step_cycle(TrialState& state, const TrialConfig& config,
                       const terrain::CalibrationTable& table,
                       SampleRng& rng) {
  const sensors::RobotPose before = state.pose;
  CycleRecord rec;
  rec.cycle = state.cycle + 1;

  // (1) color under the robot, (2) adaptive gait reselection.
  const terrain::TerrainType ground = config.arena.terrain_at(state.pose.x_cm);
  rec.color = sensors::detect_color(ground, config.color_misread_prob, rng);
  rec.terrain_class = sensors::classify_terrain(rec.color);
  if (config.adaptive) {
    state.gait = sensors::select_gait(rec.terrain_class, config.morphology,
                                      *config.policy, state.gait);
  }
  rec.gait = state.gait;

  // (3) IMU, (4) deadband decision.
  const sensors::ImuReading imu =
      sensors::read_imu(state.pose, config.path, config.imu_noise_std_cm, rng);
  rec.deviation_cm = imu.lateral_deviation_cm;
  rec.decision =
      config.correction_enabled
          ? sensors::trajectory_correction_step(imu,
                                                config.correction_threshold_cm)
          : sensors::GaitDecision::Straight;

  // (5) motion, (6) energy.
  const terrain::PerformanceEntry* billed = nullptr;
  if (rec.decision != sensors::GaitDecision::Straight) {
    // Correction maneuver: a bout of all-flipper turning folded into one
    // cycle. The robot crabs toward the path along the sampled steering
    // angle and comes out holding its heading.
    const terrain::PerformanceEntry& turn_cell = table.lookup(
        ground, config.morphology, terrain::GaitFamily::TurnAllFlippers);
    const gait::TurnDirection dir =
        rec.decision == sensors::GaitDecision::CorrectLeft
            ? gait::TurnDirection::Left
            : gait::TurnDirection::Right;
    rec.rotation_deg = terrain::sample_rotation(turn_cell, rng, dir);
    const terrain::PerformanceEntry& cell =
        forward_entry(config, table, ground, state.gait);
    rec.displacement_cm =
        terrain::sample_displacement(cell, rng, table.body_length_cm);
    const double moved =
        config.correction_forward_fraction * rec.displacement_cm;
    const double along =
        kinematics::deg2rad(state.pose.heading_deg + rec.rotation_deg);
    state.pose.x_cm += moved * std::cos(along);
    state.pose.y_cm += moved * std::sin(along);
    billed = &cell;
  } else if (state.gait.is_turning()) {
    const terrain::PerformanceEntry& cell = table.lookup(
        ground, config.morphology, terrain::family_of(state.gait));
    rec.rotation_deg =
        terrain::sample_rotation(cell, rng, state.gait.steer_direction());
    state.pose.heading_deg =
        sensors::normalize_heading(state.pose.heading_deg + rec.rotation_deg);
    state.rotation_deg += rec.rotation_deg;
    billed = &cell;
  } else {
    const terrain::PerformanceEntry& cell =
        forward_entry(config, table, ground, state.gait);
    rec.displacement_cm =
        terrain::sample_displacement(cell, rng, table.body_length_cm);
    const double along = kinematics::deg2rad(state.pose.heading_deg);
    state.pose.x_cm += rec.displacement_cm * std::cos(along);
    state.pose.y_cm += rec.displacement_cm * std::sin(along);
    billed = &cell;
  }
  if (billed->cot) {
    state.energy_j += terrain::derive_cycle_energy(
        *billed, config.mass_kg, config.g_m_s2, table.body_length_cm);
  }

  // (7) clamp to the borders; the far x wall is absent on open courses.
  if (state.pose.x_cm < 0.0) {
    state.pose.x_cm = 0.0;
    rec.boundary = true;
  }
  if (!config.arena.open_ended && state.pose.x_cm > config.arena.width_cm) {
    state.pose.x_cm = config.arena.width_cm;
    rec.boundary = true;
  }
  if (state.pose.y_cm < 0.0) {
    state.pose.y_cm = 0.0;
    rec.boundary = true;
  }
  if (state.pose.y_cm > config.arena.height_cm) {
    state.pose.y_cm = config.arena.height_cm;
    rec.boundary = true;
  }
  state.boundary_hit = state.boundary_hit || rec.boundary;

  const bool moved = state.pose.x_cm != before.x_cm ||
                     state.pose.y_cm != before.y_cm ||
                     state.pose.heading_deg != before.heading_deg;
  state.stalled_cycles = moved ? 0 : state.stalled_cycles + 1;

  ++state.cycle;
  rec.pose = state.pose;
  rec.energy_j = state.energy_j;
  return rec;
}

namespace {

bool stop_met(const TrialState& state, const TrialConfig& config) {
  switch (config.stop.kind) {
    case StopRule::Kind::MaxCycles:
      return state.cycle >= static_cast<long>(config.stop.value);
    case StopRule::Kind::Distance:
      return projected_distance(config, state.pose) >=
             config.stop.value - 1e-9;
    case StopRule::Kind::FullTurn:
      return std::abs(state.rotation_deg) >= config.stop.value - 1e-9;
  }
  return true;
}

}  // namespace

TrialResult run_trial(const TrialConfig& config,
                      const terrain::CalibrationTable& table) {
  config.validate();
  SampleRng rng(*config.seed);

  TrialState state;
  state.pose = config.start.normalized();
  state.gait = config.initial_gait;

  TrialResult result;
  result.trajectory.push_back(state.pose);

  while (!stop_met(state, config)) {
    result.per_cycle_log.push_back(step_cycle(state, config, table, rng));
    result.trajectory.push_back(state.pose);
    if (state.stalled_cycles >= kStallCycleLimit) {
      throw StallError("no progress for " + std::to_string(kStallCycleLimit) +
                       " consecutive cycles");
    }
  }

  result.cycles = state.cycle;
  result.distance_cm = projected_distance(config, state.pose);
  result.rotation_deg = state.rotation_deg;
  result.energy_j = state.energy_j;
  result.boundary_hit = state.boundary_hit;
  return result;
}

ObstacleResult run_obstacle_trial(terrain::TerrainType terrain,
                                  terrain::FlipperMorphology morphology,
                                  terrain::GaitFamily gait_family,
                                  std::uint64_t seed,
                                  const terrain::CalibrationTable& table) {
  if (terrain != terrain::TerrainType::FoamStairs &&
      terrain != terrain::TerrainType::SandyIncline) {
    throw ConfigError("obstacle trials run on foam_stairs or sandy_incline");
  }
  const terrain::PerformanceEntry& cell =
      table.lookup(terrain, morphology, gait_family);
  SampleRng rng(seed);
  ObstacleResult result;
  result.success = terrain::sample_obstacle_outcome(cell, rng);
  if (result.success) {
    if (cell.descent_prob) {
      result.descended = terrain::sample_descent_outcome(cell, rng);
    }
    if (cell.cycles_mean) {
      result.cycles = terrain::sample_stairs_cycles(cell, rng);
    }
  }
  return result;
}

void write_trial_log(const TrialResult& result, std::ostream& out) {
  char buf[512];
  for (const CycleRecord& r : result.per_cycle_log) {
    std::snprintf(
        buf, sizeof buf,
        "cycle=%ld gait=%s color=%s class=%s decision=%s deviation_cm=%.6f "
        "displacement_cm=%.6f rotation_deg=%.6f x_cm=%.6f y_cm=%.6f "
        "heading_deg=%.6f energy_j=%.6f boundary=%d\n",
        r.cycle, r.gait.name().c_str(), sensors::to_string(r.color),
        sensors::to_string(r.terrain_class), sensors::to_string(r.decision),
        r.deviation_cm, r.displacement_cm, r.rotation_deg, r.pose.x_cm,
        r.pose.y_cm, r.pose.heading_deg, r.energy_j, r.boundary ? 1 : 0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "summary cycles=%ld distance_cm=%.6f rotation_deg=%.6f "
                "energy_j=%.6f success=%d boundary_hit=%d\n",
                result.cycles, result.distance_cm, result.rotation_deg,
                result.energy_j, result.success ? 1 : 0,
                result.boundary_hit ? 1 : 0);
  out << buf;
  if (!out) throw IoError("trial log write failed");
}

}  // namespace hatchling::sim

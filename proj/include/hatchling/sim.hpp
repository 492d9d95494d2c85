#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hatchling/errors.hpp"
#include "hatchling/gait.hpp"
#include "hatchling/rng.hpp"
#include "hatchling/sensors.hpp"
#include "hatchling/terrain.hpp"

namespace hatchling::sim {

struct ArenaSegment {
  double from_x_cm = 0.0;
  double to_x_cm = 0.0;
  terrain::TerrainType terrain = terrain::TerrainType::DrySand;
};

/// Planar bordered test area. Segments tile [0, width] along x. An
/// open-ended arena is a course with a finish line instead of a far wall:
/// the pose may overrun width_cm and the last segment's terrain extends.
struct Arena {
  double width_cm = 160.0;
  double height_cm = 100.0;
  bool open_ended = false;
  std::vector<ArenaSegment> segments;

  void validate() const;
  terrain::TerrainType terrain_at(double x_cm) const;
  bool single_terrain() const { return segments.size() == 1; }

  static Arena single(terrain::TerrainType terrain, double width_cm = 160.0,
                      double height_cm = 100.0);
  /// The three-segment gait-transition course: 105 cm of flat foam, rocks,
  /// and dry sand in equal thirds, open at the far end.
  static Arena transit_course(double height_cm = 100.0);
};

struct StopRule {
  enum class Kind { MaxCycles, Distance, FullTurn };
  Kind kind = Kind::MaxCycles;
  double value = 10.0;  // cycles, cm, or degrees

  static StopRule max_cycles(long n);
  static StopRule distance(double cm);
  static StopRule full_turn(double deg);
};

struct TrialConfig {
  Arena arena = Arena::single(terrain::TerrainType::DrySand);
  terrain::FlipperMorphology morphology;
  gait::GaitPattern initial_gait = gait::GaitPattern::diagonal();
  bool adaptive = false;  // true: reselect the gait from terrain each cycle
  const sensors::GaitPolicy* policy = nullptr;  // required when adaptive
  bool correction_enabled = true;
  StopRule stop;
  std::optional<std::uint64_t> seed;  // mandatory
  double mass_kg = 0.5;
  double g_m_s2 = 9.81;
  double cycle_period_s = 2.0;

  // Closed-loop plumbing; the defaults match the bordered-arena protocol.
  sensors::RobotPose start{10.0, 50.0, 0.0};
  sensors::TargetPath path{10.0, 50.0, 1.0, 0.0};
  double imu_noise_std_cm = 0.0;
  double color_misread_prob = 0.0;
  double correction_threshold_cm = 15.0;
  // Fraction of a forward cycle's displacement a correction cycle retains.
  double correction_forward_fraction = 0.5;

  void validate() const;
  /// Which transit-table column a multi-terrain run consumes.
  terrain::TransitPolicy transit_policy() const;
};

struct CycleRecord {
  long cycle = 0;
  gait::GaitPattern gait;
  sensors::ColorReading color = sensors::ColorReading::Other;
  sensors::TerrainClass terrain_class = sensors::TerrainClass::Unknown;
  double deviation_cm = 0.0;
  sensors::GaitDecision decision = sensors::GaitDecision::Straight;
  double displacement_cm = 0.0;  // sampled magnitude, before any fraction
  double rotation_deg = 0.0;     // sampled signed rotation this cycle
  sensors::RobotPose pose;       // after the cycle
  double energy_j = 0.0;         // cumulative
  bool boundary = false;
};

struct TrialState {
  sensors::RobotPose pose;
  gait::GaitPattern gait;
  double rotation_deg = 0.0;
  double energy_j = 0.0;
  long cycle = 0;
  long stalled_cycles = 0;
  bool boundary_hit = false;
};

struct TrialResult {
  std::vector<sensors::RobotPose> trajectory;  // length cycles + 1
  long cycles = 0;
  double distance_cm = 0.0;   // displacement projected on the target path
  double rotation_deg = 0.0;  // cumulative signed heading change
  double energy_j = 0.0;
  bool success = true;
  bool boundary_hit = false;
  std::vector<CycleRecord> per_cycle_log;
};

/// One closed-loop gait cycle: sense color, (adaptive) reselect gait, read
/// the IMU, decide, move, bill energy, clamp. Mutates `state`, returns the
/// log record.
CycleRecord step_cycle(TrialState& state, const TrialConfig& config,
                       const terrain::CalibrationTable& table, SampleRng& rng);

TrialResult run_trial(const TrialConfig& config,
                      const terrain::CalibrationTable& table);

/// Consecutive cycles without any displacement or rotation before the run
/// aborts with StallError.
inline constexpr long kStallCycleLimit = 100;

/// Stairs and incline trials: no pose integration, just the calibrated
/// outcome draws. `descended` and `cycles` stay empty when the cell has no
/// such calibration or the climb failed.
struct ObstacleResult {
  bool success = false;
  std::optional<bool> descended;
  std::optional<long> cycles;
};

ObstacleResult run_obstacle_trial(terrain::TerrainType terrain,
                                  terrain::FlipperMorphology morphology,
                                  terrain::GaitFamily gait_family,
                                  std::uint64_t seed,
                                  const terrain::CalibrationTable& table);

/// Line-oriented trial log: one `cycle` record per cycle plus one `summary`
/// record, stable key=value fields, six decimals.
void write_trial_log(const TrialResult& result, std::ostream& out);

}  // namespace hatchling::sim

#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hatchling/errors.hpp"
#include "hatchling/gait.hpp"
#include "hatchling/rng.hpp"
#include "hatchling/terrain.hpp"

namespace hatchling::sensors {

/// Heading folded into (-180, 180].
double normalize_heading(double heading_deg);

struct RobotPose {
  double x_cm = 0.0;
  double y_cm = 0.0;
  double heading_deg = 0.0;  // world heading, (-180, 180]

  RobotPose normalized() const {
    return {x_cm, y_cm, normalize_heading(heading_deg)};
  }
};

/// Straight reference path: anchor point plus direction vector. The vector
/// need not be unit length but must not be zero.
struct TargetPath {
  double origin_x_cm = 0.0;
  double origin_y_cm = 0.0;
  double dir_x = 1.0;
  double dir_y = 0.0;

  void validate() const;  // ConfigError on a zero direction
  double heading_deg() const;
};

/// Sign convention: positive lateral deviation = left of the path when
/// facing along its direction.
struct ImuReading {
  double heading_deg = 0.0;
  double lateral_deviation_cm = 0.0;
};

/// Perpendicular offset of the pose from the path, plus Normal(0, noise)
/// measurement noise. Two generator words per call, even at zero noise.
ImuReading read_imu(const RobotPose& pose, const TargetPath& path,
                    double noise_std_cm, SampleRng& rng);

enum class ColorReading { Grey, Red, LightBrown, Other };

const char* to_string(ColorReading c);

/// What the downward color sensor reports over `terrain`. With probability
/// misread_prob the reading flips to one of the three wrong values,
/// uniformly. misread_prob must lie in [0, 1).
ColorReading detect_color(terrain::TerrainType terrain, double misread_prob,
                          SampleRng& rng);

enum class TerrainClass { HardGround, Rocks, Sand, Unknown };

const char* to_string(TerrainClass t);
TerrainClass parse_terrain_class(const std::string& s);

/// The color-to-terrain branch table, transcribed exactly:
/// grey -> HardGround, red -> Rocks, light_brown -> Sand, other -> Unknown.
TerrainClass classify_terrain(ColorReading color);

/// Which experiment terrain a classified surface stands for when indexing
/// the calibration table.
terrain::TerrainType table_terrain(TerrainClass t);

enum class GaitDecision { Straight, CorrectLeft, CorrectRight };

const char* to_string(GaitDecision d);

/// The deadband controller. Strictly greater-than on the magnitude:
/// |deviation| > threshold steers back toward the path, leftward deviation
/// triggering the right correction gait and vice versa.
GaitDecision trajectory_correction_step(const ImuReading& reading,
                                        double threshold_cm = 15.0);

/// Gait selection policy: forward gait per (terrain class, morphology);
/// Keep retains whatever gait is running (the only choice for Unknown).
class GaitPolicy {
 public:
  struct Choice {
    bool keep = false;
    terrain::GaitFamily family = terrain::GaitFamily::Diagonal;
  };

  const std::string& name() const { return name_; }
  Choice choice(TerrainClass terrain_class,
                terrain::FlipperMorphology morphology) const;
  void set(TerrainClass terrain_class, terrain::FlipperMorphology morphology,
           Choice choice);

  /// Every (class, morphology) pair must be covered and gaits must be
  /// forward families; throws ConfigError otherwise.
  void validate() const;

  explicit GaitPolicy(std::string name) : name_(std::move(name)) {}

 private:
  std::map<std::pair<TerrainClass, terrain::FlipperMorphology>, Choice> map_;
  std::string name_;
};

/// Named policies loaded from one config file.
class GaitPolicySet {
 public:
  const GaitPolicy& policy(const std::string& name) const;
  bool has(const std::string& name) const;
  std::vector<std::string> names() const;

  static GaitPolicySet load(std::istream& in, const std::string& origin);
  static GaitPolicySet load_file(const std::string& path);
  static std::string default_path();
  static const GaitPolicySet& shipped();

 private:
  std::map<std::string, GaitPolicy> policies_;
};

/// Algorithm step: map the classified terrain through the policy. Unknown
/// (or an explicit Keep) leaves the current pattern running.
gait::GaitPattern select_gait(TerrainClass terrain_class,
                              terrain::FlipperMorphology morphology,
                              const GaitPolicy& policy,
                              const gait::GaitPattern& current);

inline constexpr double kSupplyVolts = 3.7;

struct MotorCurrents {
  std::array<double, 6> amps{};
  double supply_v = kSupplyVolts;

  double power_in_w() const;  // sum of I_n * V over the six motors
};

/// Spreads one cycle's energy over the six motors as equal average
/// currents, so that power_in_w() * cycle_period_s returns the energy.
MotorCurrents simulate_motor_currents(double energy_j, double cycle_period_s,
                                      double supply_v = kSupplyVolts);

}  // namespace hatchling::sensors

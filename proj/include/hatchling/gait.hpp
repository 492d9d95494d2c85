#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hatchling/errors.hpp"
#include "hatchling/kinematics.hpp"

namespace hatchling::gait {

using kinematics::GaitJointRanges;

enum class FlipperId { FrontLeft, FrontRight, RearLeft, RearRight };

inline constexpr std::array<FlipperId, 4> kAllFlippers = {
    FlipperId::FrontLeft, FlipperId::FrontRight, FlipperId::RearLeft,
    FlipperId::RearRight};

inline constexpr bool is_front(FlipperId f) {
  return f == FlipperId::FrontLeft || f == FlipperId::FrontRight;
}
inline constexpr bool is_left(FlipperId f) {
  return f == FlipperId::FrontLeft || f == FlipperId::RearLeft;
}

const char* to_string(FlipperId f);

enum class TurnDirection { Left, Right };

inline constexpr TurnDirection opposite(TurnDirection d) {
  return d == TurnDirection::Left ? TurnDirection::Right
                                  : TurnDirection::Left;
}

const char* to_string(TurnDirection d);

/// The six waveform families. Forward gaits carry no direction; turning and
/// correction gaits do (correction encodes it in the kind itself).
enum class GaitKind {
  AllTogether,
  Diagonal,
  TurnFrontOnly,
  TurnAllFlippers,
  CorrectionLeft,
  CorrectionRight,
};

struct GaitPattern {
  GaitKind kind = GaitKind::AllTogether;
  TurnDirection direction = TurnDirection::Left;  // turn kinds only

  static GaitPattern all_together() { return {GaitKind::AllTogether}; }
  static GaitPattern diagonal() { return {GaitKind::Diagonal}; }
  static GaitPattern turn_front_only(TurnDirection d) {
    return {GaitKind::TurnFrontOnly, d};
  }
  static GaitPattern turn_all_flippers(TurnDirection d) {
    return {GaitKind::TurnAllFlippers, d};
  }
  static GaitPattern correction_left() {
    return {GaitKind::CorrectionLeft, TurnDirection::Left};
  }
  static GaitPattern correction_right() {
    return {GaitKind::CorrectionRight, TurnDirection::Right};
  }

  bool is_turning() const {
    return kind == GaitKind::TurnFrontOnly ||
           kind == GaitKind::TurnAllFlippers;
  }
  bool is_correction() const {
    return kind == GaitKind::CorrectionLeft ||
           kind == GaitKind::CorrectionRight;
  }

  /// Direction the pattern steers toward, turning and correction kinds only.
  TurnDirection steer_direction() const;

  std::string name() const;

  friend bool operator==(const GaitPattern&, const GaitPattern&) = default;
};

/// Parse names as printed by GaitPattern::name(): all_together, diagonal,
/// turn_front_only_left, turn_all_flippers_right, correction_left, ...
GaitPattern parse_gait_pattern(const std::string& name);

struct GaitConstants {
  double tilt_deg = 20.0;        // body tilt amplitude, diagonal gait
  double lift_height_cm = 4.0;   // body clearance at max downstroke
  double tip_raise_cm = 9.2;     // tip height at full upward extension
  double cycle_period_s = 2.0;   // wall-clock length of one cycle

  void validate() const;  // throws ConfigError unless all positive
};

/// One setpoint on a flipper's cyclic track. Front flippers use alpha/beta,
/// rear flippers gamma; the unused channels stay at 0 and are ignored.
/// The contact flag holds from this keyframe until the next one.
struct Keyframe {
  double phase = 0.0;  // [0, 1)
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  double gamma_deg = 0.0;
  bool contact = false;
};

struct FlipperTrack {
  FlipperId flipper = FlipperId::FrontLeft;
  std::vector<Keyframe> keys;  // phase-sorted, keys.front().phase == 0
};

using KeyframeTable = std::array<FlipperTrack, 4>;

/// Commanded pose of the whole robot at one phase. body_grounded marks the
/// belly-support part of the cycle (no flipper in stance); the robot rests
/// on its plastron there rather than going ballistic.
struct FlipperCommand {
  struct Front {
    double alpha_deg = 0.0;
    double beta_deg = 0.0;
    bool contact = false;
  };
  struct Rear {
    double gamma_deg = 0.0;
    bool contact = false;
  };

  Front front_left, front_right;
  Rear rear_left, rear_right;
  bool body_grounded = false;

  bool contact(FlipperId f) const;
  bool any_flipper_contact() const;
};

/// Cyclic keyframe tables for all four flippers under `pattern`.
KeyframeTable gait_keyframes(const GaitPattern& pattern,
                             const GaitJointRanges& ranges = {});

/// Piecewise-linear interpolation of the keyframe tables at `phase`.
/// Throws RangeError unless phase is in [0, 1).
FlipperCommand sample_gait(const GaitPattern& pattern, double phase,
                           const GaitJointRanges& ranges = {},
                           const GaitConstants& constants = {});

/// Per-flipper stance booleans sampled at `resolution` uniform phases.
/// Throws RangeError if resolution < 2.
std::array<std::vector<bool>, 4> contact_diagram(const GaitPattern& pattern,
                                                 int resolution);

/// Six-motor setpoint series. Motor order: 1 front-left alpha, 2 front-left
/// beta, 3 front-right alpha, 4 front-right beta, 5 rear-left gamma,
/// 6 rear-right gamma.
struct ServoTrajectory {
  std::vector<double> time_s;
  std::array<std::vector<double>, 6> motor_deg;

  std::size_t samples() const { return time_s.size(); }
};

/// `cycles` full cycles sampled `samples_per_cycle` times each. Throws
/// RangeError if cycles < 1 or samples_per_cycle < 2.
ServoTrajectory servo_trajectory(const GaitPattern& pattern, int cycles,
                                 int samples_per_cycle,
                                 const GaitJointRanges& ranges = {},
                                 const GaitConstants& constants = {});

/// CSV with header time_s,motor_1,...,motor_6 and %.6f values.
void write_servo_csv(const ServoTrajectory& traj, std::ostream& out);
void write_servo_csv(const ServoTrajectory& traj, const std::string& path);

}  // namespace hatchling::gait

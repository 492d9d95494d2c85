#include "hatchling/gait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace hatchling::gait {

namespace {

// Waveform roles of a single flipper within a pattern. Power is the stock
// thrust stroke; Reverse mirrors the fore/aft sweep about its midpoint so
// the flipper pulls while its opposite pushes; Hold plants the flipper.
enum class Role { Power, Reverse, Hold };

std::vector<Keyframe> front_track(Role role, double beta_scale,
                                  const GaitJointRanges& r) {
  const double beta_mid = 0.5 * (r.beta.lo + r.beta.hi);
  double b_start = beta_mid + (r.beta.hi - beta_mid) * beta_scale;
  double b_end = beta_mid + (r.beta.lo - beta_mid) * beta_scale;
  if (role == Role::Reverse) std::swap(b_start, b_end);

  // Stance on [0, 0.5): fore/aft sweep with the flipper pressed down.
  // Aerial on [0.5, 1): lift to full height at 0.75, then reach forward.
  std::vector<Keyframe> keys(3);
  keys[0] = {0.00, r.alpha.lo, b_start, 0.0, true};
  keys[1] = {0.50, r.alpha.lo, b_end, 0.0, false};
  keys[2] = {0.75, r.alpha.hi, beta_mid, 0.0, false};
  return keys;
}

std::vector<Keyframe> rear_track(Role role, const GaitJointRanges& r) {
  std::vector<Keyframe> keys(2);
  switch (role) {
    case Role::Power:
      keys[0] = {0.00, 0.0, 0.0, r.gamma.hi, true};
      keys[1] = {0.50, 0.0, 0.0, r.gamma.lo, false};
      break;
    case Role::Reverse:
      keys[0] = {0.00, 0.0, 0.0, r.gamma.lo, true};
      keys[1] = {0.50, 0.0, 0.0, r.gamma.hi, false};
      break;
    case Role::Hold: {
      const double gamma_mid = 0.5 * (r.gamma.lo + r.gamma.hi);
      keys[0] = {0.00, 0.0, 0.0, gamma_mid, true};
      keys[1] = {0.50, 0.0, 0.0, gamma_mid, true};
      break;
    }
  }
  return keys;
}

std::vector<Keyframe> shift_half_cycle(std::vector<Keyframe> keys) {
  for (Keyframe& k : keys) {
    k.phase = k.phase < 0.5 ? k.phase + 0.5 : k.phase - 0.5;
  }
  std::sort(keys.begin(), keys.end(),
            [](const Keyframe& a, const Keyframe& b) {
              return a.phase < b.phase;
            });
  return keys;
}

// Role of each flipper under a steering pattern: the inner (turn-side)
// flippers reverse their sweep, the outer ones keep the power stroke.
Role steer_role(FlipperId f, TurnDirection dir) {
  const bool inner = is_left(f) == (dir == TurnDirection::Left);
  return inner ? Role::Reverse : Role::Power;
}

struct Sampled {
  double alpha_deg;
  double beta_deg;
  double gamma_deg;
  bool contact;
};

Sampled sample_track(const std::vector<Keyframe>& keys, double phase) {
  std::size_t i = keys.size() - 1;
  while (keys[i].phase > phase) --i;
  const Keyframe& a = keys[i];
  const Keyframe& b = keys[(i + 1) % keys.size()];
  const double span = (i + 1 < keys.size() ? b.phase : 1.0) - a.phase;
  const double t = (phase - a.phase) / span;
  return {std::lerp(a.alpha_deg, b.alpha_deg, t),
          std::lerp(a.beta_deg, b.beta_deg, t),
          std::lerp(a.gamma_deg, b.gamma_deg, t), a.contact};
}

}  // namespace

const char* to_string(FlipperId f) {
  switch (f) {
    case FlipperId::FrontLeft:
      return "front_left";
    case FlipperId::FrontRight:
      return "front_right";
    case FlipperId::RearLeft:
      return "rear_left";
    case FlipperId::RearRight:
      return "rear_right";
  }
  return "?";
}

const char* to_string(TurnDirection d) {
  return d == TurnDirection::Left ? "left" : "right";
}

TurnDirection GaitPattern::steer_direction() const {
  switch (kind) {
    case GaitKind::TurnFrontOnly:
    case GaitKind::TurnAllFlippers:
      return direction;
    case GaitKind::CorrectionLeft:
      return TurnDirection::Left;
    case GaitKind::CorrectionRight:
      return TurnDirection::Right;
    default:
      throw RangeError("forward gait has no steer direction");
  }
}

std::string GaitPattern::name() const {
  switch (kind) {
    case GaitKind::AllTogether:
      return "all_together";
    case GaitKind::Diagonal:
      return "diagonal";
    case GaitKind::TurnFrontOnly:
      return std::string("turn_front_only_") + to_string(direction);
    case GaitKind::TurnAllFlippers:
      return std::string("turn_all_flippers_") + to_string(direction);
    case GaitKind::CorrectionLeft:
      return "correction_left";
    case GaitKind::CorrectionRight:
      return "correction_right";
  }
  return "?";
}

GaitPattern parse_gait_pattern(const std::string& name) {
  if (name == "all_together") return GaitPattern::all_together();
  if (name == "diagonal") return GaitPattern::diagonal();
  if (name == "turn_front_only_left")
    return GaitPattern::turn_front_only(TurnDirection::Left);
  if (name == "turn_front_only_right")
    return GaitPattern::turn_front_only(TurnDirection::Right);
  if (name == "turn_all_flippers_left")
    return GaitPattern::turn_all_flippers(TurnDirection::Left);
  if (name == "turn_all_flippers_right")
    return GaitPattern::turn_all_flippers(TurnDirection::Right);
  if (name == "correction_left") return GaitPattern::correction_left();
  if (name == "correction_right") return GaitPattern::correction_right();
  throw ParseError("unknown gait pattern: " + name);
}

void GaitConstants::validate() const {
  if (!(tilt_deg > 0.0) || !(lift_height_cm > 0.0) ||
      !(tip_raise_cm > 0.0) || !(cycle_period_s > 0.0)) {
    throw ConfigError("gait constants must all be positive");
  }
}

bool FlipperCommand::contact(FlipperId f) const {
  switch (f) {
    case FlipperId::FrontLeft:
      return front_left.contact;
    case FlipperId::FrontRight:
      return front_right.contact;
    case FlipperId::RearLeft:
      return rear_left.contact;
    case FlipperId::RearRight:
      return rear_right.contact;
  }
  return false;
}

bool FlipperCommand::any_flipper_contact() const {
  return front_left.contact || front_right.contact || rear_left.contact ||
         rear_right.contact;
}

KeyframeTable gait_keyframes(const GaitPattern& pattern,
                             const GaitJointRanges& ranges) {
  ranges.validate();

  KeyframeTable table;
  for (std::size_t i = 0; i < kAllFlippers.size(); ++i) {
    table[i].flipper = kAllFlippers[i];
  }
  auto& fl = table[0].keys;
  auto& fr = table[1].keys;
  auto& rl = table[2].keys;
  auto& rr = table[3].keys;

  switch (pattern.kind) {
    case GaitKind::AllTogether:
      fl = front_track(Role::Power, 1.0, ranges);
      fr = front_track(Role::Power, 1.0, ranges);
      rl = rear_track(Role::Power, ranges);
      rr = rear_track(Role::Power, ranges);
      break;
    case GaitKind::Diagonal:
      // Front-left / rear-right lead; the other diagonal pair runs half a
      // cycle behind.
      fl = front_track(Role::Power, 1.0, ranges);
      rr = rear_track(Role::Power, ranges);
      fr = shift_half_cycle(front_track(Role::Power, 1.0, ranges));
      rl = shift_half_cycle(rear_track(Role::Power, ranges));
      break;
    case GaitKind::TurnFrontOnly:
      fl = front_track(steer_role(FlipperId::FrontLeft, pattern.direction),
                       1.0, ranges);
      fr = front_track(steer_role(FlipperId::FrontRight, pattern.direction),
                       1.0, ranges);
      rl = rear_track(Role::Hold, ranges);
      rr = rear_track(Role::Hold, ranges);
      break;
    case GaitKind::TurnAllFlippers:
      fl = front_track(steer_role(FlipperId::FrontLeft, pattern.direction),
                       1.0, ranges);
      fr = front_track(steer_role(FlipperId::FrontRight, pattern.direction),
                       1.0, ranges);
      rl = rear_track(steer_role(FlipperId::RearLeft, pattern.direction),
                      ranges);
      rr = rear_track(steer_role(FlipperId::RearRight, pattern.direction),
                      ranges);
      break;
    case GaitKind::CorrectionLeft:
    case GaitKind::CorrectionRight: {
      // One steering cycle at half fore/aft amplitude: enough authority to
      // shave a lateral offset without spinning the heading hard over.
      const TurnDirection dir = pattern.steer_direction();
      fl = front_track(steer_role(FlipperId::FrontLeft, dir), 0.5, ranges);
      fr = front_track(steer_role(FlipperId::FrontRight, dir), 0.5, ranges);
      rl = rear_track(steer_role(FlipperId::RearLeft, dir), ranges);
      rr = rear_track(steer_role(FlipperId::RearRight, dir), ranges);
      break;
    }
  }
  return table;
}

FlipperCommand sample_gait(const GaitPattern& pattern, double phase,
                           const GaitJointRanges& ranges,
                           const GaitConstants& constants) {
  if (!(phase >= 0.0 && phase < 1.0)) {
    throw RangeError("gait phase must lie in [0, 1)");
  }
  constants.validate();

  const KeyframeTable table = gait_keyframes(pattern, ranges);
  const Sampled fl = sample_track(table[0].keys, phase);
  const Sampled fr = sample_track(table[1].keys, phase);
  const Sampled rl = sample_track(table[2].keys, phase);
  const Sampled rr = sample_track(table[3].keys, phase);

  FlipperCommand cmd;
  cmd.front_left = {fl.alpha_deg, fl.beta_deg, fl.contact};
  cmd.front_right = {fr.alpha_deg, fr.beta_deg, fr.contact};
  cmd.rear_left = {rl.gamma_deg, rl.contact};
  cmd.rear_right = {rr.gamma_deg, rr.contact};
  cmd.body_grounded = !cmd.any_flipper_contact();
  return cmd;
}

std::array<std::vector<bool>, 4> contact_diagram(const GaitPattern& pattern,
                                                 int resolution) {
  if (resolution < 2) {
    throw RangeError("contact diagram needs at least two samples");
  }
  std::array<std::vector<bool>, 4> rows;
  for (auto& row : rows) row.resize(static_cast<std::size_t>(resolution));
  for (int s = 0; s < resolution; ++s) {
    const double phase = static_cast<double>(s) / resolution;
    const FlipperCommand cmd = sample_gait(pattern, phase);
    for (std::size_t f = 0; f < kAllFlippers.size(); ++f) {
      rows[f][static_cast<std::size_t>(s)] = cmd.contact(kAllFlippers[f]);
    }
  }
  return rows;
}

ServoTrajectory servo_trajectory(const GaitPattern& pattern, int cycles,
                                 int samples_per_cycle,
                                 const GaitJointRanges& ranges,
                                 const GaitConstants& constants) {
  if (cycles < 1) throw RangeError("servo trajectory needs >= 1 cycle");
  if (samples_per_cycle < 2) {
    throw RangeError("servo trajectory needs >= 2 samples per cycle");
  }
  constants.validate();

  const std::size_t n =
      static_cast<std::size_t>(cycles) *
      static_cast<std::size_t>(samples_per_cycle);
  ServoTrajectory traj;
  traj.time_s.resize(n);
  for (auto& series : traj.motor_deg) series.resize(n);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = k % static_cast<std::size_t>(samples_per_cycle);
    const double phase =
        static_cast<double>(s) / static_cast<double>(samples_per_cycle);
    const FlipperCommand cmd = sample_gait(pattern, phase, ranges, constants);
    traj.time_s[k] = constants.cycle_period_s * static_cast<double>(k) /
                     static_cast<double>(samples_per_cycle);
    traj.motor_deg[0][k] = cmd.front_left.alpha_deg;
    traj.motor_deg[1][k] = cmd.front_left.beta_deg;
    traj.motor_deg[2][k] = cmd.front_right.alpha_deg;
    traj.motor_deg[3][k] = cmd.front_right.beta_deg;
    traj.motor_deg[4][k] = cmd.rear_left.gamma_deg;
    traj.motor_deg[5][k] = cmd.rear_right.gamma_deg;
  }
  return traj;
}

void write_servo_csv(const ServoTrajectory& traj, std::ostream& out) {
  out << "time_s,motor_1,motor_2,motor_3,motor_4,motor_5,motor_6\n";
  char buf[32];
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f", traj.time_s[k]);
    out << buf;
    for (const auto& series : traj.motor_deg) {
      std::snprintf(buf, sizeof buf, "%.6f", series[k]);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed while writing servo trajectory CSV");
}

void write_servo_csv(const ServoTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_servo_csv(traj, out);
}

}  // namespace hatchling::gait

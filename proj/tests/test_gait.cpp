#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hatchling/gait.hpp"

using namespace hatchling;
using namespace hatchling::gait;

namespace {

const GaitJointRanges kRanges{};

bool in_ranges(const FlipperCommand& cmd, const GaitJointRanges& r) {
  return r.alpha.contains(cmd.front_left.alpha_deg) &&
         r.alpha.contains(cmd.front_right.alpha_deg) &&
         r.beta.contains(cmd.front_left.beta_deg) &&
         r.beta.contains(cmd.front_right.beta_deg) &&
         r.gamma.contains(cmd.rear_left.gamma_deg) &&
         r.gamma.contains(cmd.rear_right.gamma_deg);
}

FlipperCommand mirror_left_right(const FlipperCommand& cmd) {
  FlipperCommand m = cmd;
  std::swap(m.front_left, m.front_right);
  std::swap(m.rear_left, m.rear_right);
  return m;
}

bool commands_close(const FlipperCommand& a, const FlipperCommand& b,
                    double tol) {
  return std::abs(a.front_left.alpha_deg - b.front_left.alpha_deg) <= tol &&
         std::abs(a.front_left.beta_deg - b.front_left.beta_deg) <= tol &&
         std::abs(a.front_right.alpha_deg - b.front_right.alpha_deg) <= tol &&
         std::abs(a.front_right.beta_deg - b.front_right.beta_deg) <= tol &&
         std::abs(a.rear_left.gamma_deg - b.rear_left.gamma_deg) <= tol &&
         std::abs(a.rear_right.gamma_deg - b.rear_right.gamma_deg) <= tol &&
         a.front_left.contact == b.front_left.contact &&
         a.front_right.contact == b.front_right.contact &&
         a.rear_left.contact == b.rear_left.contact &&
         a.rear_right.contact == b.rear_right.contact;
}

std::string fixed6(const std::vector<double>& xs) {
  std::string out;
  char buf[32];
  for (double x : xs) {
    std::snprintf(buf, sizeof buf, "%.6f|", x);
    out += buf;
  }
  return out;
}

std::vector<GaitPattern> all_patterns() {
  return {GaitPattern::all_together(),
          GaitPattern::diagonal(),
          GaitPattern::turn_front_only(TurnDirection::Left),
          GaitPattern::turn_front_only(TurnDirection::Right),
          GaitPattern::turn_all_flippers(TurnDirection::Left),
          GaitPattern::turn_all_flippers(TurnDirection::Right),
          GaitPattern::correction_left(),
          GaitPattern::correction_right()};
}

}  // namespace

TEST_CASE("keyframe tables are phase-sorted, start at zero, stay in range") {
  for (const GaitPattern& p : all_patterns()) {
    const KeyframeTable table = gait_keyframes(p, kRanges);
    for (const FlipperTrack& track : table) {
      REQUIRE(!track.keys.empty());
      CHECK(track.keys.front().phase == 0.0);
      for (std::size_t i = 0; i < track.keys.size(); ++i) {
        const Keyframe& k = track.keys[i];
        CHECK(k.phase >= 0.0);
        CHECK(k.phase < 1.0);
        if (i > 0) CHECK(track.keys[i - 1].phase < k.phase);
        if (is_front(track.flipper)) {
          CHECK(kRanges.alpha.contains(k.alpha_deg));
          CHECK(kRanges.beta.contains(k.beta_deg));
        } else {
          CHECK(kRanges.gamma.contains(k.gamma_deg));
        }
      }
    }
  }
}

TEST_CASE("all-together schedules are identical across flippers") {
  const KeyframeTable table =
      gait_keyframes(GaitPattern::all_together(), kRanges);
  const auto& fl = table[0].keys;
  const auto& fr = table[1].keys;
  REQUIRE(fl.size() == fr.size());
  for (std::size_t i = 0; i < fl.size(); ++i) {
    CHECK(fl[i].phase == fr[i].phase);
    CHECK(fl[i].alpha_deg == fr[i].alpha_deg);
    CHECK(fl[i].beta_deg == fr[i].beta_deg);
    CHECK(fl[i].contact == fr[i].contact);
  }
  const auto& rl = table[2].keys;
  const auto& rr = table[3].keys;
  REQUIRE(rl.size() == rr.size());
  for (std::size_t i = 0; i < rl.size(); ++i) {
    CHECK(rl[i].phase == rr[i].phase);
    CHECK(rl[i].gamma_deg == rr[i].gamma_deg);
    CHECK(rl[i].contact == rr[i].contact);
  }
  // Front sweep endpoints span the full published ranges.
  CHECK(fl[0].alpha_deg == -55.0);
  CHECK(fl[2].alpha_deg == 90.0);
  CHECK(fl[0].beta_deg == 75.0);
  CHECK(fl[1].beta_deg == -10.0);
}

TEST_CASE("diagonal pairs run half a cycle apart") {
  const KeyframeTable table = gait_keyframes(GaitPattern::diagonal(), kRanges);
  const auto& fl = table[0].keys;
  const auto& fr = table[1].keys;
  REQUIRE(fl.size() == fr.size());
  // Every front-left keyframe reappears on the front-right track at
  // phase + 0.5 (mod 1).
  for (const Keyframe& k : fl) {
    const double want = k.phase < 0.5 ? k.phase + 0.5 : k.phase - 0.5;
    const auto it =
        std::find_if(fr.begin(), fr.end(),
                     [&](const Keyframe& o) { return o.phase == want; });
    REQUIRE(it != fr.end());
    CHECK(it->alpha_deg == k.alpha_deg);
    CHECK(it->beta_deg == k.beta_deg);
    CHECK(it->contact == k.contact);
  }
}

TEST_CASE("phase zero sample equals the first keyframe exactly") {
  for (const GaitPattern& p : all_patterns()) {
    const KeyframeTable table = gait_keyframes(p, kRanges);
    const FlipperCommand cmd = sample_gait(p, 0.0);
    CHECK(cmd.front_left.alpha_deg == table[0].keys[0].alpha_deg);
    CHECK(cmd.front_left.beta_deg == table[0].keys[0].beta_deg);
    CHECK(cmd.front_left.contact == table[0].keys[0].contact);
    CHECK(cmd.rear_right.gamma_deg == table[3].keys[0].gamma_deg);
    CHECK(cmd.rear_right.contact == table[3].keys[0].contact);
  }
}

TEST_CASE("all-together at phase zero plants every flipper") {
  const FlipperCommand cmd = sample_gait(GaitPattern::all_together(), 0.0);
  for (FlipperId f : kAllFlippers) CHECK(cmd.contact(f));
  CHECK(!cmd.body_grounded);
}

TEST_CASE("diagonal quarter phase: front-left stance, front-right aerial") {
  const FlipperCommand cmd = sample_gait(GaitPattern::diagonal(), 0.25);
  CHECK(cmd.front_left.contact);
  CHECK(!cmd.front_right.contact);
  CHECK(cmd.front_left.alpha_deg == -55.0);
  CHECK(cmd.front_left.beta_deg == doctest::Approx(32.5).epsilon(1e-15));
  CHECK(cmd.front_right.alpha_deg == 90.0);  // top of the recovery lift
}

TEST_CASE("cyclic continuity at the wrap") {
  // Angles wrap smoothly; contact flags may step at the stance boundary.
  for (const GaitPattern& p : all_patterns()) {
    const FlipperCommand a = sample_gait(p, 1.0 - 1e-3);
    const FlipperCommand b = sample_gait(p, 0.0);
    // Steepest segment slope is (90 - -55) / 0.25 = 580 deg per unit phase.
    const double tol = 580.0 * 1e-3 + 1e-9;
    CHECK(std::abs(a.front_left.alpha_deg - b.front_left.alpha_deg) <= tol);
    CHECK(std::abs(a.front_left.beta_deg - b.front_left.beta_deg) <= tol);
    CHECK(std::abs(a.front_right.alpha_deg - b.front_right.alpha_deg) <= tol);
    CHECK(std::abs(a.front_right.beta_deg - b.front_right.beta_deg) <= tol);
    CHECK(std::abs(a.rear_left.gamma_deg - b.rear_left.gamma_deg) <= tol);
    CHECK(std::abs(a.rear_right.gamma_deg - b.rear_right.gamma_deg) <= tol);
  }
}

TEST_CASE("phase outside the cycle is rejected") {
  CHECK_THROWS_AS(sample_gait(GaitPattern::all_together(), 1.0), RangeError);
  CHECK_THROWS_AS(sample_gait(GaitPattern::all_together(), -0.1), RangeError);
  CHECK_THROWS_AS(sample_gait(GaitPattern::diagonal(), 2.5), RangeError);
}

TEST_CASE("range closure across every pattern and phase") {
  for (const GaitPattern& p : all_patterns()) {
    for (int s = 0; s < 997; ++s) {
      const double phase = static_cast<double>(s) / 997.0;
      CHECK(in_ranges(sample_gait(p, phase), kRanges));
    }
  }
}

TEST_CASE("contact diagram: all-together rows identical") {
  const auto rows = contact_diagram(GaitPattern::all_together(), 8);
  CHECK(rows[0] == rows[1]);
  CHECK(rows[0] == rows[2]);
  CHECK(rows[0] == rows[3]);
  CHECK(std::count(rows[0].begin(), rows[0].end(), true) == 4);
}

TEST_CASE("contact diagram: diagonal pairs identical, half-cycle rotated") {
  const auto rows = contact_diagram(GaitPattern::diagonal(), 8);
  CHECK(rows[0] == rows[3]);  // front-left == rear-right
  CHECK(rows[1] == rows[2]);  // front-right == rear-left
  for (int i = 0; i < 8; ++i) {
    CHECK(rows[1][static_cast<std::size_t>(i)] ==
          rows[0][static_cast<std::size_t>((i + 4) % 8)]);
  }
}

TEST_CASE("contact diagram: front-only turning keeps the rear planted") {
  for (TurnDirection d : {TurnDirection::Left, TurnDirection::Right}) {
    const auto rows = contact_diagram(GaitPattern::turn_front_only(d), 8);
    CHECK(std::count(rows[2].begin(), rows[2].end(), true) == 8);
    CHECK(std::count(rows[3].begin(), rows[3].end(), true) == 8);
  }
}

TEST_CASE("contact diagram rejects degenerate resolution") {
  CHECK_THROWS_AS(contact_diagram(GaitPattern::diagonal(), 1), RangeError);
}

TEST_CASE("contact safety") {
  for (int s = 0; s < 997; ++s) {
    const double phase = static_cast<double>(s) / 997.0;
    // Diagonal always has a stance pair down.
    CHECK(sample_gait(GaitPattern::diagonal(), phase).any_flipper_contact());
    // All-together alternates between flipper support and belly support.
    const FlipperCommand at = sample_gait(GaitPattern::all_together(), phase);
    CHECK((at.any_flipper_contact() || at.body_grounded));
  }
}

TEST_CASE("diagonal symmetry: swap left-right and shift half a cycle") {
  for (int s = 0; s < 128; ++s) {
    const double phase = static_cast<double>(s) / 128.0;
    const double shifted = phase < 0.5 ? phase + 0.5 : phase - 0.5;
    const FlipperCommand a = sample_gait(GaitPattern::diagonal(), phase);
    const FlipperCommand b =
        mirror_left_right(sample_gait(GaitPattern::diagonal(), shifted));
    CHECK(commands_close(a, b, 0.0));
  }
}

TEST_CASE("mirror symmetry of steering gaits") {
  const std::vector<std::pair<GaitPattern, GaitPattern>> pairs = {
      {GaitPattern::turn_front_only(TurnDirection::Left),
       GaitPattern::turn_front_only(TurnDirection::Right)},
      {GaitPattern::turn_all_flippers(TurnDirection::Left),
       GaitPattern::turn_all_flippers(TurnDirection::Right)},
      {GaitPattern::correction_left(), GaitPattern::correction_right()},
  };
  for (const auto& [left, right] : pairs) {
    for (int s = 0; s < 64; ++s) {
      const double phase = static_cast<double>(s) / 64.0;
      const FlipperCommand a = sample_gait(left, phase);
      const FlipperCommand b = mirror_left_right(sample_gait(right, phase));
      CHECK(commands_close(a, b, 0.0));
    }
  }
}

TEST_CASE("turning gaits oppose the front sweeps") {
  // Left turn: right flipper keeps the power stroke, left runs it reversed.
  const KeyframeTable table =
      gait_keyframes(GaitPattern::turn_front_only(TurnDirection::Left));
  const auto& fl = table[0].keys;
  const auto& fr = table[1].keys;
  CHECK(fr[0].beta_deg == 75.0);
  CHECK(fr[1].beta_deg == -10.0);
  CHECK(fl[0].beta_deg == -10.0);
  CHECK(fl[1].beta_deg == 75.0);
  // Both share the lift schedule.
  CHECK(fl[2].alpha_deg == 90.0);
  CHECK(fr[2].alpha_deg == 90.0);
}

TEST_CASE("correction gait halves the fore-aft sweep only") {
  const KeyframeTable table =
      gait_keyframes(GaitPattern::correction_left(), kRanges);
  const auto& fl = table[0].keys;  // inner (turn side): reversed sweep
  const auto& fr = table[1].keys;  // outer: power sweep
  CHECK(fr[0].beta_deg == 53.75);
  CHECK(fr[1].beta_deg == 11.25);
  CHECK(fr[2].beta_deg == 32.5);
  CHECK(fl[0].beta_deg == 11.25);
  CHECK(fl[1].beta_deg == 53.75);
  // Lift and rear sweeps keep full amplitude.
  CHECK(fl[2].alpha_deg == 90.0);
  CHECK(table[2].keys[0].gamma_deg == -30.0);  // rear-left reversed
  CHECK(table[3].keys[0].gamma_deg == 90.0);   // rear-right power
}

TEST_CASE("servo trajectory: all-together left equals right") {
  const ServoTrajectory traj =
      servo_trajectory(GaitPattern::all_together(), 2, 100);
  REQUIRE(traj.samples() == 200);
  CHECK(traj.motor_deg[0] == traj.motor_deg[2]);  // alpha pair
  CHECK(traj.motor_deg[1] == traj.motor_deg[3]);  // beta pair
  CHECK(traj.motor_deg[4] == traj.motor_deg[5]);  // gamma pair
}

TEST_CASE("servo trajectory: diagonal series shift by half a cycle") {
  // Power-of-two sampling keeps every phase an exact binary fraction, so
  // the shifted series match bit for bit.
  const ServoTrajectory traj =
      servo_trajectory(GaitPattern::diagonal(), 2, 64);
  const std::size_t n = traj.samples();
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(traj.motor_deg[2][k] == traj.motor_deg[0][(k + 32) % n]);
    CHECK(traj.motor_deg[3][k] == traj.motor_deg[1][(k + 32) % n]);
    CHECK(traj.motor_deg[4][k] == traj.motor_deg[5][(k + 32) % n]);
  }

  // The figure-style sampling (100 per cycle) agrees to the last printed
  // digit; decimal phases cost a few ulp.
  const ServoTrajectory t100 =
      servo_trajectory(GaitPattern::diagonal(), 2, 100);
  std::vector<double> fl_shift(t100.samples());
  for (std::size_t k = 0; k < t100.samples(); ++k) {
    fl_shift[k] = t100.motor_deg[0][(k + 50) % t100.samples()];
    CHECK(std::abs(t100.motor_deg[2][k] - fl_shift[k]) <= 1e-12);
  }
  CHECK(fixed6(t100.motor_deg[2]) == fixed6(fl_shift));
}

TEST_CASE("servo trajectory: range closure on coarse sampling") {
  const ServoTrajectory traj =
      servo_trajectory(GaitPattern::all_together(), 1, 4);
  REQUIRE(traj.samples() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(kRanges.alpha.contains(traj.motor_deg[0][k]));
    CHECK(kRanges.beta.contains(traj.motor_deg[1][k]));
    CHECK(kRanges.gamma.contains(traj.motor_deg[4][k]));
  }
}

TEST_CASE("servo trajectory rejects degenerate shapes") {
  CHECK_THROWS_AS(servo_trajectory(GaitPattern::diagonal(), 0, 100),
                  RangeError);
  CHECK_THROWS_AS(servo_trajectory(GaitPattern::diagonal(), 1, 1),
                  RangeError);
}

TEST_CASE("servo CSV carries the header and fixed precision") {
  const ServoTrajectory traj =
      servo_trajectory(GaitPattern::all_together(), 1, 2);
  std::ostringstream out;
  write_servo_csv(traj, out);
  const std::string csv = out.str();
  CHECK(csv.rfind("time_s,motor_1,motor_2,motor_3,motor_4,motor_5,motor_6\n",
                  0) == 0);
  CHECK(csv.find("0.000000,-55.000000,75.000000") != std::string::npos);
  CHECK(csv.back() == '\n');
}

TEST_CASE("pattern names round-trip through the parser") {
  for (const GaitPattern& p : all_patterns()) {
    CHECK(parse_gait_pattern(p.name()) == p);
  }
  CHECK_THROWS_AS(parse_gait_pattern("moonwalk"), ParseError);
}

TEST_CASE("gait constants carry the published body figures") {
  const GaitConstants c{};
  CHECK(c.tilt_deg == 20.0);
  CHECK(c.lift_height_cm == 4.0);
  CHECK(c.tip_raise_cm == 9.2);
  CHECK_NOTHROW(c.validate());
  GaitConstants bad = c;
  bad.cycle_period_s = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

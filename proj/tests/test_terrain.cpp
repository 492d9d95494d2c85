#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hatchling/terrain.hpp"

using namespace hatchling;
using namespace hatchling::terrain;

namespace {

PerformanceEntry disp_entry(double mean, double std) {
  PerformanceEntry e;
  e.disp_mean = mean;
  e.disp_std = std;
  return e;
}

}  // namespace

TEST_CASE("arena color tags") {
  CHECK(color_tag(TerrainType::FlatFoam) == ColorTag::Grey);
  CHECK(color_tag(TerrainType::Rocks) == ColorTag::Red);
  CHECK(color_tag(TerrainType::DrySand) == ColorTag::LightBrown);
  CHECK(color_tag(TerrainType::WetSand) == ColorTag::None);
  CHECK(color_tag(TerrainType::FoamStairs) == ColorTag::None);
  CHECK(color_tag(TerrainType::SandyIncline) == ColorTag::None);
}

TEST_CASE("gait families collapse steering directions") {
  using gait::GaitPattern;
  using gait::TurnDirection;
  CHECK(family_of(GaitPattern::all_together()) == GaitFamily::AllTogether);
  CHECK(family_of(GaitPattern::diagonal()) == GaitFamily::Diagonal);
  CHECK(family_of(GaitPattern::turn_front_only(TurnDirection::Left)) ==
        GaitFamily::TurnFrontOnly);
  CHECK(family_of(GaitPattern::turn_front_only(TurnDirection::Right)) ==
        GaitFamily::TurnFrontOnly);
  CHECK(family_of(GaitPattern::turn_all_flippers(TurnDirection::Right)) ==
        GaitFamily::TurnAllFlippers);
  CHECK_THROWS_AS(family_of(GaitPattern::correction_left()),
                  NotCalibratedError);
  CHECK_THROWS_AS(family_of(GaitPattern::correction_right()),
                  NotCalibratedError);
}

TEST_CASE("name round trips") {
  for (TerrainType t :
       {TerrainType::DrySand, TerrainType::Rocks, TerrainType::WetSand,
        TerrainType::FlatFoam, TerrainType::FoamStairs,
        TerrainType::SandyIncline}) {
    CHECK(parse_terrain(to_string(t)) == t);
  }
  for (GaitFamily g :
       {GaitFamily::AllTogether, GaitFamily::Diagonal,
        GaitFamily::TurnAllFlippers, GaitFamily::TurnFrontOnly}) {
    CHECK(parse_gait_family(to_string(g)) == g);
  }
  for (TransitPolicy p :
       {TransitPolicy::Adaptive, TransitPolicy::FixedDiagonal,
        TransitPolicy::FixedAllTogether}) {
    CHECK(parse_transit_policy(to_string(p)) == p);
  }
  CHECK(parse_stiffness("soft") == Stiffness::Soft);
  CHECK(parse_placement("front_only") == Placement::FrontOnly);
  CHECK_THROWS_AS(parse_terrain("lava"), ParseError);
}

TEST_CASE("entry validation rejects out-of-domain values") {
  PerformanceEntry e = disp_entry(0.5, 0.1);
  CHECK_NOTHROW(e.validate());
  e.disp_mean = -0.1;
  CHECK_THROWS_AS(e.validate(), ConfigError);

  PerformanceEntry cot_only;
  cot_only.cot = 9.04;
  CHECK_THROWS_AS(cot_only.validate(), ConfigError);  // no displacement

  PerformanceEntry bad_prob;
  bad_prob.success_prob = 1.5;
  CHECK_THROWS_AS(bad_prob.validate(), ConfigError);

  PerformanceEntry zero_cot = disp_entry(0.5, 0.0);
  zero_cot.cot = 0.0;
  CHECK_THROWS_AS(zero_cot.validate(), ConfigError);
}

TEST_CASE("table parser round trip on a small document") {
  const std::string doc = R"(# comment
body_length_cm 10.0

[dry_sand soft all diagonal]
disp_mean 0.5   # inline comment
disp_std 0.1
cot 9.0
provenance test bench run

[transit rigid adaptive]
disp_mean 0.6
disp_std 0.02
)";
  std::istringstream in(doc);
  const CalibrationTable table = CalibrationTable::load(in, "<doc>");
  CHECK(table.body_length_cm == 10.0);
  const PerformanceEntry& e = table.lookup(
      TerrainType::DrySand, {Stiffness::Soft, Placement::All},
      GaitFamily::Diagonal);
  CHECK(e.disp_mean == 0.5);
  CHECK(e.disp_std == 0.1);
  CHECK(e.cot == 9.0);
  CHECK(e.provenance == "test bench run");
  CHECK(table.has_transit(Stiffness::Rigid, TransitPolicy::Adaptive));
  CHECK(!table.has_transit(Stiffness::Soft, TransitPolicy::Adaptive));
  CHECK(table.rows().size() == 1);
  CHECK(table.transit_rows().size() == 1);
}

TEST_CASE("table parser rejects malformed documents") {
  const auto load = [](const std::string& doc) {
    std::istringstream in(doc);
    return CalibrationTable::load(in, "<doc>");
  };
  CHECK_THROWS_AS(load("disp_mean 0.5\n"), ParseError);  // field w/o record
  CHECK_THROWS_AS(load("[dry_sand soft all diagonal\ndisp_mean 0.5\n"),
                  ParseError);  // unterminated header
  CHECK_THROWS_AS(load("[dry_sand soft all]\ndisp_mean 0.5\n"),
                  ParseError);  // arity
  CHECK_THROWS_AS(load("[dry_sand soft all diagonal]\nwingspan 3\n"),
                  ParseError);  // unknown field
  CHECK_THROWS_AS(load("[dry_sand soft all diagonal]\ndisp_mean abc\n"),
                  ParseError);  // not a number
  CHECK_THROWS_AS(
      load("[dry_sand soft all diagonal]\ndisp_mean 0.5\n"
           "[dry_sand soft all diagonal]\ndisp_mean 0.5\n"),
      ConfigError);  // duplicate cell
}

TEST_CASE("shipped table carries the headline cells") {
  const CalibrationTable& table = CalibrationTable::shipped();
  CHECK(table.body_length_cm == 12.5);

  const PerformanceEntry& dry = table.lookup(
      TerrainType::DrySand, {Stiffness::Rigid, Placement::All},
      gait::GaitPattern::diagonal());
  CHECK(dry.disp_mean == 0.83);
  CHECK(dry.disp_std == 0.03);
  CHECK(dry.cot == 9.04);

  const PerformanceEntry& wet = table.lookup(
      TerrainType::WetSand, {Stiffness::Soft, Placement::All},
      gait::GaitPattern::diagonal());
  CHECK(wet.disp_mean == 0.67);
  CHECK(wet.disp_std == 0.10);
  CHECK(wet.cot == 10.61);

  const PerformanceEntry& stairs = table.lookup(
      TerrainType::FoamStairs, {Stiffness::Soft, Placement::All},
      gait::GaitPattern::all_together());
  CHECK(stairs.success_prob == 0.15);
  CHECK(stairs.descent_prob == 1.0);

  const PerformanceEntry& rocks_cot = table.lookup(
      TerrainType::Rocks, {Stiffness::Soft, Placement::All},
      GaitFamily::Diagonal);
  CHECK(rocks_cot.cot == 9.84);

  const PerformanceEntry& consistent_turn = table.lookup(
      TerrainType::DrySand, {Stiffness::Rigid, Placement::All},
      GaitFamily::TurnAllFlippers);
  CHECK(consistent_turn.turn_mean == 45.00);
  CHECK(consistent_turn.turn_std == 0.00);
}

TEST_CASE("shipped table is exactly the measured grid") {
  const CalibrationTable& table = CalibrationTable::shipped();
  // 22 displacement + 12 turning + 8 stairs + 8 incline cells.
  CHECK(table.rows().size() == 50);
  CHECK(table.transit_rows().size() == 6);

  int turning = 0, displacement = 0, obstacle = 0;
  for (const auto& row : table.rows()) {
    if (row.entry->turn_mean) ++turning;
    if (row.entry->disp_mean) ++displacement;
    if (row.entry->success_prob) ++obstacle;
  }
  CHECK(turning == 12);
  CHECK(displacement == 22);
  CHECK(obstacle == 16);
  // Every entry passed validation at load; provenance is always recorded.
  for (const auto& row : table.rows()) {
    CHECK(!row.entry->provenance.empty());
  }
}

TEST_CASE("unmeasured combinations fail loudly") {
  const CalibrationTable& table = CalibrationTable::shipped();
  // No flat-foam numbers were recorded for the full rigid set.
  CHECK_THROWS_AS(table.lookup(TerrainType::FlatFoam,
                               {Stiffness::Rigid, Placement::All},
                               GaitFamily::Diagonal),
                  NotCalibratedError);
  CHECK_THROWS_AS(table.lookup(TerrainType::Rocks,
                               {Stiffness::Soft, Placement::FrontOnly},
                               GaitFamily::Diagonal),
                  NotCalibratedError);
  CHECK_THROWS_AS(table.transit(Stiffness::Soft,
                                static_cast<TransitPolicy>(99)),
                  NotCalibratedError);
}

TEST_CASE("zero-variance displacement is exact") {
  SampleRng rng(1);
  const PerformanceEntry e = disp_entry(0.97, 0.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_displacement(e, rng, 12.5) == 12.125);
  }
  SampleRng rng2(2);
  CHECK(sample_displacement(disp_entry(0.0, 0.0), rng2, 12.5) == 0.0);
}

TEST_CASE("displacement golden draws") {
  SampleRng rng(2024);
  const PerformanceEntry e = disp_entry(0.83, 0.03);
  CHECK(sample_displacement(e, rng, 12.5) == 10.477924047103492);
  CHECK(sample_displacement(e, rng, 12.5) == 10.06651222608197);
}

TEST_CASE("displacement draws are truncated, never negative") {
  SampleRng rng(31337);
  const PerformanceEntry e = disp_entry(0.01, 10.0);
  int clamped = 0;
  for (int i = 0; i < 2000; ++i) {
    const double cm = sample_displacement(e, rng, 12.5);
    CHECK(cm >= 0.0);
    if (cm == 0.0) ++clamped;
  }
  CHECK(clamped > 0);  // with this spread the floor must trigger
}

TEST_CASE("displacement sampling without calibration is an error") {
  SampleRng rng(1);
  PerformanceEntry e;
  CHECK_THROWS_AS(sample_displacement(e, rng, 12.5), ModelError);
}

TEST_CASE("displacement sample mean tracks the cell") {
  SampleRng rng(777);
  const PerformanceEntry e = disp_entry(0.83, 0.03);
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_displacement(e, rng, 12.5);
  const double mean_bl = sum / n / 12.5;
  CHECK(std::abs(mean_bl - 0.83) <= 3.0 * 0.03 / std::sqrt(double(n)));
}

TEST_CASE("rotation: consistent cell is exact, sign follows direction") {
  PerformanceEntry e;
  e.turn_mean = 45.00;
  e.turn_std = 0.00;
  SampleRng rng(5);
  CHECK(sample_rotation(e, rng, gait::TurnDirection::Left) == 45.0);
  CHECK(sample_rotation(e, rng, gait::TurnDirection::Right) == -45.0);
}

TEST_CASE("rotation golden draw") {
  PerformanceEntry e;
  e.turn_mean = 45.41;
  e.turn_std = 6.81;
  SampleRng rng(99);
  CHECK(sample_rotation(e, rng, gait::TurnDirection::Left) ==
        54.140542249908229);
}

TEST_CASE("rotation sample mean tracks the cell") {
  PerformanceEntry e;
  e.turn_mean = 51.47;
  e.turn_std = 3.74;
  SampleRng rng(314159);
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double deg = sample_rotation(e, rng, gait::TurnDirection::Left);
    CHECK(deg >= 0.0);
    sum += deg;
  }
  CHECK(std::abs(sum / n - 51.47) <= 3.0 * 3.74 / std::sqrt(double(n)));
  PerformanceEntry none;
  CHECK_THROWS_AS(sample_rotation(none, rng, gait::TurnDirection::Left),
                  ModelError);
}

TEST_CASE("obstacle outcomes follow the calibrated rates") {
  PerformanceEntry always;
  always.success_prob = 1.0;
  PerformanceEntry never;
  never.success_prob = 0.0;
  SampleRng rng(8);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_obstacle_outcome(always, rng));
    CHECK(!sample_obstacle_outcome(never, rng));
  }

  PerformanceEntry half;
  half.success_prob = 0.5;
  SampleRng coin(1234);
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += sample_obstacle_outcome(half, coin);
  CHECK(std::abs(double(hits) / n - 0.5) <= 0.015);

  PerformanceEntry none;
  CHECK_THROWS_AS(sample_obstacle_outcome(none, rng), ModelError);
  CHECK_THROWS_AS(sample_descent_outcome(none, rng), ModelError);
}

TEST_CASE("stairs cycle counts are whole, positive, centered") {
  PerformanceEntry e;
  e.cycles_mean = 17.0;
  e.cycles_std = 3.5;
  SampleRng rng(2718);
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int cycles = sample_stairs_cycles(e, rng);
    CHECK(cycles >= 1);
    sum += cycles;
  }
  CHECK(std::abs(sum / n - 17.0) <= 3.0 * 3.5 / std::sqrt(double(n)));
}

TEST_CASE("cycle energy inverts the transport-cost ratio") {
  PerformanceEntry e = disp_entry(0.83, 0.03);
  e.cot = 9.04;
  const double energy = derive_cycle_energy(e, 0.5, 9.81, 12.5);
  CHECK(energy == doctest::Approx(4.6003995).epsilon(1e-12));

  PerformanceEntry wet = disp_entry(0.67, 0.10);
  wet.cot = 10.61;
  CHECK(derive_cycle_energy(wet, 0.5, 9.81, 12.5) ==
        doctest::Approx(4.3585216875).epsilon(1e-12));

  PerformanceEntry still = disp_entry(0.0, 0.0);
  still.cot = 5.0;
  CHECK(derive_cycle_energy(still, 0.5, 9.81, 12.5) == 0.0);
}

TEST_CASE("transport-cost round trip is mass invariant") {
  PerformanceEntry e = disp_entry(0.73, 0.04);
  e.cot = 9.84;
  for (double mass : {0.2, 0.5, 1.0}) {
    const double energy = derive_cycle_energy(e, mass, 9.81, 12.5);
    const double distance_m = 0.73 * 12.5 / 100.0;
    const double recovered = energy / (mass * 9.81 * distance_m);
    CHECK(std::abs(recovered - 9.84) / 9.84 <= 1e-9);
  }
}

TEST_CASE("cycle energy demands calibration and sane physics") {
  SampleRng rng(3);
  PerformanceEntry no_cot = disp_entry(0.5, 0.0);
  CHECK_THROWS_AS(derive_cycle_energy(no_cot, 0.5, 9.81, 12.5), ModelError);
  PerformanceEntry e = disp_entry(0.5, 0.0);
  e.cot = 9.0;
  CHECK_THROWS_AS(derive_cycle_energy(e, 0.0, 9.81, 12.5), RangeError);
  CHECK_THROWS_AS(derive_cycle_energy(e, 0.5, -9.81, 12.5), RangeError);
}

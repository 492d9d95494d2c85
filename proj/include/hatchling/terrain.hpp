#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hatchling/errors.hpp"
#include "hatchling/gait.hpp"
#include "hatchling/rng.hpp"

namespace hatchling::terrain {

enum class Stiffness { Soft, Rigid };
enum class Placement { All, FrontOnly };

struct FlipperMorphology {
  Stiffness stiffness = Stiffness::Soft;
  Placement placement = Placement::All;

  friend auto operator<=>(const FlipperMorphology&,
                          const FlipperMorphology&) = default;
};

enum class TerrainType {
  DrySand,
  Rocks,
  WetSand,
  FlatFoam,
  FoamStairs,
  SandyIncline,
};

/// Surface marker colors on the experiment arenas. Only the three terrains
/// used in the adaptive-transit arena carry one.
enum class ColorTag { Grey, Red, LightBrown, None };

ColorTag color_tag(TerrainType t);

/// Locomotion families the response table is keyed by. Steering families
/// collapse left/right: measured turning rates are direction-symmetric.
enum class GaitFamily { AllTogether, Diagonal, TurnAllFlippers, TurnFrontOnly };

/// Family of a concrete pattern. Correction gaits have no measured cell and
/// throw NotCalibratedError; their effect is modeled downstream.
GaitFamily family_of(const gait::GaitPattern& pattern);

const char* to_string(Stiffness s);
const char* to_string(Placement p);
const char* to_string(TerrainType t);
const char* to_string(ColorTag c);
const char* to_string(GaitFamily g);

Stiffness parse_stiffness(const std::string& s);
Placement parse_placement(const std::string& s);
TerrainType parse_terrain(const std::string& s);
GaitFamily parse_gait_family(const std::string& s);

/// One measured cell. Displacement in body lengths per cycle, rotation in
/// degrees per cycle, probabilities as fractions. Fields absent from the
/// trials stay unset; sampling an unset field is a ModelError.
struct PerformanceEntry {
  std::optional<double> disp_mean;
  std::optional<double> disp_std;
  std::optional<double> cot;
  std::optional<double> turn_mean;
  std::optional<double> turn_std;
  std::optional<double> success_prob;
  std::optional<double> descent_prob;
  std::optional<double> cycles_mean;
  std::optional<double> cycles_std;
  std::string provenance;

  void validate() const;  // throws ConfigError on out-of-domain values
};

/// Gait policies compared on the multi-terrain transit arena.
enum class TransitPolicy { Adaptive, FixedDiagonal, FixedAllTogether };

const char* to_string(TransitPolicy p);
TransitPolicy parse_transit_policy(const std::string& s);

/// The empirical terrain response model: measured performance per
/// (terrain, morphology, gait family) cell plus the whole-arena transit
/// rates. Immutable after load; lookups of unmeasured cells throw.
class CalibrationTable {
 public:
  double body_length_cm = 12.5;

  const PerformanceEntry& lookup(TerrainType terrain,
                                 FlipperMorphology morphology,
                                 GaitFamily gait) const;
  const PerformanceEntry& lookup(TerrainType terrain,
                                 FlipperMorphology morphology,
                                 const gait::GaitPattern& pattern) const;
  bool has(TerrainType terrain, FlipperMorphology morphology,
           GaitFamily gait) const;

  /// Whole-arena displacement rate of a gait policy on the three-segment
  /// transit course.
  const PerformanceEntry& transit(Stiffness stiffness,
                                  TransitPolicy policy) const;
  bool has_transit(Stiffness stiffness, TransitPolicy policy) const;

  void insert(TerrainType terrain, FlipperMorphology morphology,
              GaitFamily gait, PerformanceEntry entry);
  void insert_transit(Stiffness stiffness, TransitPolicy policy,
                      PerformanceEntry entry);

  struct Row {
    TerrainType terrain;
    FlipperMorphology morphology;
    GaitFamily gait;
    const PerformanceEntry* entry;
  };
  struct TransitRow {
    Stiffness stiffness;
    TransitPolicy policy;
    const PerformanceEntry* entry;
  };

  std::vector<Row> rows() const;                // deterministic order
  std::vector<TransitRow> transit_rows() const;

  static CalibrationTable load(std::istream& in, const std::string& origin);
  static CalibrationTable load_file(const std::string& path);

  /// Shipped default: data/calibration.table next to the sources.
  static std::string default_path();
  static const CalibrationTable& shipped();

 private:
  using CellKey = std::tuple<TerrainType, Stiffness, Placement, GaitFamily>;
  using TransitKey = std::pair<Stiffness, TransitPolicy>;

  std::map<CellKey, PerformanceEntry> cells_;
  std::map<TransitKey, PerformanceEntry> transit_;
};

/// Normal(disp_mean, disp_std) draw, floored at zero, in centimeters.
/// Consumes two generator words regardless of variance.
double sample_displacement(const PerformanceEntry& entry, SampleRng& rng,
                           double body_length_cm);

/// Normal(turn_mean, turn_std) draw, floored at zero, in degrees per cycle.
/// Positive turns left (counterclockwise); `direction` sets the sign.
double sample_rotation(const PerformanceEntry& entry, SampleRng& rng,
                       gait::TurnDirection direction);

/// Bernoulli(success_prob).
bool sample_obstacle_outcome(const PerformanceEntry& entry, SampleRng& rng);

/// Bernoulli(descent_prob); only stairs cells that separated the descent
/// stage carry one.
bool sample_descent_outcome(const PerformanceEntry& entry, SampleRng& rng);

/// Normal(cycles_mean, cycles_std) rounded to the nearest whole cycle,
/// floored at one.
int sample_stairs_cycles(const PerformanceEntry& entry, SampleRng& rng);

/// Per-cycle energy that makes the metrics pipeline reproduce entry.cot
/// exactly under the distance form of the transport-cost ratio:
/// cot * mass * g * (disp_mean * body_length_cm / 100).
double derive_cycle_energy(const PerformanceEntry& entry, double mass_kg,
                           double g, double body_length_cm);

}  // namespace hatchling::terrain

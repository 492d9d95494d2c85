#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hatchling/errors.hpp"
#include "hatchling/gait.hpp"
#include "hatchling/sim.hpp"
#include "hatchling/terrain.hpp"

namespace hatchling::suite {

/// What the trials in a suite measure. Displacement and turning run the
/// closed-loop simulator on a single terrain, obstacle replays the stair and
/// incline outcome draws, transit drives the three-segment course.
enum class SuiteKind { Displacement, Turning, Obstacle, Transit };

const char* to_string(SuiteKind k);
SuiteKind parse_suite_kind(const std::string& s);

/// One experiment cell. Non-transit kinds pin terrain, morphology, and gait;
/// transit configs pin stiffness and the gait policy driving the course.
struct ConfigTemplate {
  terrain::TerrainType terrain = terrain::TerrainType::DrySand;
  terrain::FlipperMorphology morphology;
  gait::GaitPattern gait = gait::GaitPattern::diagonal();
  terrain::TransitPolicy policy = terrain::TransitPolicy::Adaptive;

  friend bool operator==(const ConfigTemplate&,
                         const ConfigTemplate&) = default;
};

/// What each config of the suite must reproduce. Cell-sourced rules pull the
/// expected value, spread, and provenance from the calibration table at run
/// time; explicit rules carry their own numbers and provenance note.
struct TargetRule {
  std::string metric;
  bool from_cell = true;
  double mean = 0.0;    // explicit rules only
  double stddev = 0.0;  // explicit rules only
  std::string provenance;
};

/// A replayable experiment protocol: configs, trial counts, stop rule, and
/// acceptance targets. `trials` mirrors the bench protocol (three runs per
/// cell); `acceptance_trials` is the statistical count check-acceptance uses.
struct ExperimentSuite {
  std::string name;
  SuiteKind kind = SuiteKind::Displacement;
  long trials = 3;
  long acceptance_trials = 1000;
  std::optional<sim::StopRule> stop;
  std::vector<ConfigTemplate> configs;
  std::vector<TargetRule> targets;

  static ExperimentSuite load(std::istream& in, const std::string& origin);
  /// Parses and checks every cell the suite references against `table`
  /// (the shipped table when null).
  static ExperimentSuite load_file(
      const std::string& path,
      const terrain::CalibrationTable* table = nullptr);

  /// Throws NotCalibratedError naming the first config whose cell the table
  /// does not cover.
  void validate_cells(const terrain::CalibrationTable& table) const;

  /// data/suites next to the sources, overridable for tests.
  static std::string default_dir();
  /// The *.suite files under `dir`, sorted by filename.
  static std::vector<std::string> list_files(const std::string& dir);
};

/// Seed every stochastic draw of a run derives from when no --seed is given.
inline constexpr std::uint64_t kDefaultMasterSeed = 0x68617463686C696Eull;

struct RunOptions {
  std::uint64_t master_seed = kDefaultMasterSeed;
  int parallelism = 1;
  long trials_override = 0;       // 0: use the suite's own count
  bool acceptance_counts = false; // use acceptance_trials instead of trials
  double mass_kg = 0.5;
  bool correction_enabled = true; // turning suites force this off themselves
};

/// One (config, metric) line of a report. Verdicts: pass, fail,
/// not_calibrated (the table lacks the config's cell), error (the config
/// aborted some other way), no_data (metric conditioned on an outcome no
/// trial produced). Numeric fields stay empty for the last three.
struct ReportRow {
  std::string suite;
  std::string terrain;
  std::string stiffness;
  std::string placement;
  std::string gait_policy;
  std::string metric;
  std::optional<double> mean;
  std::optional<double> stddev;
  long n = 0;
  std::optional<double> target;
  std::optional<double> tolerance;
  std::string verdict;
  std::string note;  // target provenance, or the error message
};

/// Per-suite entry of the seed manifest; a run is reproducible from these
/// alone (trial t of config c draws from derive_trial_seed(seed, c, t)).
struct SuiteSeeds {
  std::string suite;
  std::uint64_t seed = 0;
  long configs = 0;
  long trials = 0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::uint64_t master_seed = kDefaultMasterSeed;
  int parallelism = 1;
  double runtime_s = 0.0;
  std::vector<SuiteSeeds> seeds;

  bool all_passed() const;
  long count(const std::string& verdict) const;

  /// Pinned column set, six decimals, trailing newline; header-only when
  /// empty. Byte-identical across runs and parallelism for a given seed.
  void write_csv(std::ostream& out) const;
  /// Same rows plus the seed manifest and runtime.
  nlohmann::json to_json() const;
  /// format is "csv" or "json".
  void write(std::ostream& out, const std::string& format) const;
  void write_file(const std::string& path, const std::string& format) const;
};

Report run_suite(const ExperimentSuite& suite,
                 const terrain::CalibrationTable& table,
                 const RunOptions& options);
Report run_suites(const std::vector<ExperimentSuite>& suites,
                  const terrain::CalibrationTable& table,
                  const RunOptions& options);

}  // namespace hatchling::suite

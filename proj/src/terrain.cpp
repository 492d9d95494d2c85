#include "hatchling/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hatchling::terrain {

namespace {

double parse_number(const std::string& token, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + token + "'");
  }
  if (used != token.size()) {
    throw ParseError(where + ": trailing junk in number '" + token + "'");
  }
  return v;
}

void check_prob(const std::optional<double>& p, const char* name) {
  if (p && !(*p >= 0.0 && *p <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

void check_nonneg(const std::optional<double>& v, const char* name) {
  if (v && !(*v >= 0.0)) {
    throw ConfigError(std::string(name) + " must be nonnegative");
  }
}

}  // namespace

ColorTag color_tag(TerrainType t) {
  switch (t) {
    case TerrainType::FlatFoam:
      return ColorTag::Grey;
    case TerrainType::Rocks:
      return ColorTag::Red;
    case TerrainType::DrySand:
      return ColorTag::LightBrown;
    default:
      return ColorTag::None;
  }
}

GaitFamily family_of(const gait::GaitPattern& pattern) {
  switch (pattern.kind) {
    case gait::GaitKind::AllTogether:
      return GaitFamily::AllTogether;
    case gait::GaitKind::Diagonal:
      return GaitFamily::Diagonal;
    case gait::GaitKind::TurnFrontOnly:
      return GaitFamily::TurnFrontOnly;
    case gait::GaitKind::TurnAllFlippers:
      return GaitFamily::TurnAllFlippers;
    case gait::GaitKind::CorrectionLeft:
    case gait::GaitKind::CorrectionRight:
      throw NotCalibratedError(
          "correction gaits were not measured as standalone cells");
  }
  throw NotCalibratedError("unknown gait pattern");
}

const char* to_string(Stiffness s) {
  return s == Stiffness::Soft ? "soft" : "rigid";
}

const char* to_string(Placement p) {
  return p == Placement::All ? "all" : "front_only";
}

const char* to_string(TerrainType t) {
  switch (t) {
    case TerrainType::DrySand:
      return "dry_sand";
    case TerrainType::Rocks:
      return "rocks";
    case TerrainType::WetSand:
      return "wet_sand";
    case TerrainType::FlatFoam:
      return "flat_foam";
    case TerrainType::FoamStairs:
      return "foam_stairs";
    case TerrainType::SandyIncline:
      return "sandy_incline";
  }
  return "?";
}

const char* to_string(ColorTag c) {
  switch (c) {
    case ColorTag::Grey:
      return "grey";
    case ColorTag::Red:
      return "red";
    case ColorTag::LightBrown:
      return "light_brown";
    case ColorTag::None:
      return "none";
  }
  return "?";
}

const char* to_string(GaitFamily g) {
  switch (g) {
    case GaitFamily::AllTogether:
      return "all_together";
    case GaitFamily::Diagonal:
      return "diagonal";
    case GaitFamily::TurnAllFlippers:
      return "turn_all_flippers";
    case GaitFamily::TurnFrontOnly:
      return "turn_front_only";
  }
  return "?";
}

const char* to_string(TransitPolicy p) {
  switch (p) {
    case TransitPolicy::Adaptive:
      return "adaptive";
    case TransitPolicy::FixedDiagonal:
      return "diagonal";
    case TransitPolicy::FixedAllTogether:
      return "all_together";
  }
  return "?";
}

Stiffness parse_stiffness(const std::string& s) {
  if (s == "soft") return Stiffness::Soft;
  if (s == "rigid") return Stiffness::Rigid;
  throw ParseError("unknown stiffness: " + s);
}

Placement parse_placement(const std::string& s) {
  if (s == "all") return Placement::All;
  if (s == "front_only") return Placement::FrontOnly;
  throw ParseError("unknown placement: " + s);
}

TerrainType parse_terrain(const std::string& s) {
  if (s == "dry_sand") return TerrainType::DrySand;
  if (s == "rocks") return TerrainType::Rocks;
  if (s == "wet_sand") return TerrainType::WetSand;
  if (s == "flat_foam") return TerrainType::FlatFoam;
  if (s == "foam_stairs") return TerrainType::FoamStairs;
  if (s == "sandy_incline") return TerrainType::SandyIncline;
  throw ParseError("unknown terrain: " + s);
}

GaitFamily parse_gait_family(const std::string& s) {
  if (s == "all_together") return GaitFamily::AllTogether;
  if (s == "diagonal") return GaitFamily::Diagonal;
  if (s == "turn_all_flippers") return GaitFamily::TurnAllFlippers;
  if (s == "turn_front_only") return GaitFamily::TurnFrontOnly;
  throw ParseError("unknown gait family: " + s);
}

TransitPolicy parse_transit_policy(const std::string& s) {
  if (s == "adaptive") return TransitPolicy::Adaptive;
  if (s == "diagonal") return TransitPolicy::FixedDiagonal;
  if (s == "all_together") return TransitPolicy::FixedAllTogether;
  throw ParseError("unknown transit policy: " + s);
}

void PerformanceEntry::validate() const {
  check_nonneg(disp_mean, "disp_mean");
  check_nonneg(disp_std, "disp_std");
  check_nonneg(turn_mean, "turn_mean");
  check_nonneg(turn_std, "turn_std");
  check_nonneg(cycles_std, "cycles_std");
  if (cot && !(*cot > 0.0)) {
    throw ConfigError("cot must be positive when present");
  }
  if (cycles_mean && !(*cycles_mean > 0.0)) {
    throw ConfigError("cycles_mean must be positive when present");
  }
  check_prob(success_prob, "success_prob");
  check_prob(descent_prob, "descent_prob");
  if (disp_std && !disp_mean) {
    throw ConfigError("disp_std without disp_mean");
  }
  if (turn_std && !turn_mean) {
    throw ConfigError("turn_std without turn_mean");
  }
  if (cot && !disp_mean) {
    throw ConfigError("cot without disp_mean has no energy model");
  }
}

const PerformanceEntry& CalibrationTable::lookup(
    TerrainType terrain, FlipperMorphology morphology, GaitFamily gait) const {
  const auto it = cells_.find(
      {terrain, morphology.stiffness, morphology.placement, gait});
  if (it == cells_.end()) {
    throw NotCalibratedError(
        std::string("no measured cell for ") + to_string(terrain) + " / " +
        to_string(morphology.stiffness) + " / " +
        to_string(morphology.placement) + " / " + to_string(gait));
  }
  return it->second;
}

const PerformanceEntry& CalibrationTable::lookup(
    TerrainType terrain, FlipperMorphology morphology,
    const gait::GaitPattern& pattern) const {
  return lookup(terrain, morphology, family_of(pattern));
}

bool CalibrationTable::has(TerrainType terrain, FlipperMorphology morphology,
                           GaitFamily gait) const {
  return cells_.count(
             {terrain, morphology.stiffness, morphology.placement, gait}) > 0;
}

const PerformanceEntry& CalibrationTable::transit(Stiffness stiffness,
                                                  TransitPolicy policy) const {
  const auto it = transit_.find({stiffness, policy});
  if (it == transit_.end()) {
    throw NotCalibratedError(std::string("no transit measurement for ") +
                             to_string(stiffness) + " / " + to_string(policy));
  }
  return it->second;
}

bool CalibrationTable::has_transit(Stiffness stiffness,
                                   TransitPolicy policy) const {
  return transit_.count({stiffness, policy}) > 0;
}

void CalibrationTable::insert(TerrainType terrain,
                              FlipperMorphology morphology, GaitFamily gait,
                              PerformanceEntry entry) {
  entry.validate();
  const CellKey key{terrain, morphology.stiffness, morphology.placement, gait};
  if (!cells_.emplace(key, std::move(entry)).second) {
    throw ConfigError(std::string("duplicate cell: ") + to_string(terrain) +
                      " / " + to_string(morphology.stiffness) + " / " +
                      to_string(morphology.placement) + " / " +
                      to_string(gait));
  }
}

void CalibrationTable::insert_transit(Stiffness stiffness,
                                      TransitPolicy policy,
                                      PerformanceEntry entry) {
  entry.validate();
  if (!transit_.emplace(TransitKey{stiffness, policy}, std::move(entry))
           .second) {
    throw ConfigError(std::string("duplicate transit cell: ") +
                      to_string(stiffness) + " / " + to_string(policy));
  }
}

std::vector<CalibrationTable::Row> CalibrationTable::rows() const {
  std::vector<Row> out;
  out.reserve(cells_.size());
  for (const auto& [key, entry] : cells_) {
    out.push_back({std::get<0>(key),
                   {std::get<1>(key), std::get<2>(key)},
                   std::get<3>(key),
                   &entry});
  }
  return out;
}

std::vector<CalibrationTable::TransitRow> CalibrationTable::transit_rows()
    const {
  std::vector<TransitRow> out;
  out.reserve(transit_.size());
  for (const auto& [key, entry] : transit_) {
    out.push_back({key.first, key.second, &entry});
  }
  return out;
}

CalibrationTable CalibrationTable::load(std::istream& in,
                                        const std::string& origin) {
  CalibrationTable table;
  std::string line;
  int line_no = 0;

  // Current record, nullopt while outside one.
  std::optional<std::vector<std::string>> header;
  PerformanceEntry entry;

  const auto flush = [&] {
    if (!header) return;
    const auto& h = *header;
    if (h[0] == "transit") {
      table.insert_transit(parse_stiffness(h[1]), parse_transit_policy(h[2]),
                           std::move(entry));
    } else {
      table.insert(parse_terrain(h[0]), {parse_stiffness(h[1]),
                                         parse_placement(h[2])},
                   parse_gait_family(h[3]), std::move(entry));
    }
    header.reset();
    entry = {};
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;  // blank

    if (key.front() == '[') {
      flush();
      std::string rest = key.substr(1) + " ";
      std::string tok;
      while (ls >> tok) rest += tok + " ";
      const std::size_t close = rest.find(']');
      if (close == std::string::npos) {
        throw ParseError(where + ": unterminated record header");
      }
      std::istringstream hs(rest.substr(0, close));
      std::vector<std::string> tokens;
      while (hs >> tok) tokens.push_back(tok);
      const bool is_transit = !tokens.empty() && tokens[0] == "transit";
      if ((is_transit && tokens.size() != 3) ||
          (!is_transit && tokens.size() != 4)) {
        throw ParseError(where + ": bad record header arity");
      }
      header = std::move(tokens);
      continue;
    }

    if (key == "body_length_cm") {
      if (header) {
        throw ParseError(where + ": body_length_cm belongs at top level");
      }
      std::string value;
      if (!(ls >> value)) throw ParseError(where + ": missing value");
      table.body_length_cm = parse_number(value, where);
      if (!(table.body_length_cm > 0.0)) {
        throw ParseError(where + ": body_length_cm must be positive");
      }
      continue;
    }

    if (!header) {
      throw ParseError(where + ": field outside a record: " + key);
    }

    if (key == "provenance") {
      std::string rest;
      std::getline(ls, rest);
      const std::size_t start = rest.find_first_not_of(" \t");
      entry.provenance = start == std::string::npos ? "" : rest.substr(start);
      continue;
    }

    std::string value;
    if (!(ls >> value)) throw ParseError(where + ": missing value for " + key);
    std::string extra;
    if (ls >> extra) throw ParseError(where + ": trailing junk after " + key);
    const double v = parse_number(value, where);

    if (key == "disp_mean") {
      entry.disp_mean = v;
    } else if (key == "disp_std") {
      entry.disp_std = v;
    } else if (key == "cot") {
      entry.cot = v;
    } else if (key == "turn_mean") {
      entry.turn_mean = v;
    } else if (key == "turn_std") {
      entry.turn_std = v;
    } else if (key == "success_prob") {
      entry.success_prob = v;
    } else if (key == "descent_prob") {
      entry.descent_prob = v;
    } else if (key == "cycles_mean") {
      entry.cycles_mean = v;
    } else if (key == "cycles_std") {
      entry.cycles_std = v;
    } else {
      throw ParseError(where + ": unknown field: " + key);
    }
  }
  flush();
  return table;
}

CalibrationTable CalibrationTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calibration table: " + path);
  return load(in, path);
}

std::string CalibrationTable::default_path() {
  return std::string(HATCHLING_DATA_DIR) + "/calibration.table";
}

const CalibrationTable& CalibrationTable::shipped() {
  static const CalibrationTable table = load_file(default_path());
  return table;
}

namespace {

double truncated_normal(std::optional<double> mean, std::optional<double> std,
                        SampleRng& rng, const char* what) {
  if (!mean) {
    throw ModelError(std::string("entry has no ") + what + " calibration");
  }
  // Always burns two words so parallel draws stay aligned across entries.
  const double draw = rng.normal(*mean, std.value_or(0.0));
  return std::max(0.0, draw);
}

}  // namespace

double sample_displacement(const PerformanceEntry& entry, SampleRng& rng,
                           double body_length_cm) {
  return truncated_normal(entry.disp_mean, entry.disp_std, rng,
                          "displacement") *
         body_length_cm;
}

double sample_rotation(const PerformanceEntry& entry, SampleRng& rng,
                       gait::TurnDirection direction) {
  const double magnitude =
      truncated_normal(entry.turn_mean, entry.turn_std, rng, "rotation");
  return direction == gait::TurnDirection::Left ? magnitude : -magnitude;
}

bool sample_obstacle_outcome(const PerformanceEntry& entry, SampleRng& rng) {
  if (!entry.success_prob) {
    throw ModelError("entry has no success-rate calibration");
  }
  return rng.bernoulli(*entry.success_prob);
}

bool sample_descent_outcome(const PerformanceEntry& entry, SampleRng& rng) {
  if (!entry.descent_prob) {
    throw ModelError("entry has no descent-rate calibration");
  }
  return rng.bernoulli(*entry.descent_prob);
}

int sample_stairs_cycles(const PerformanceEntry& entry, SampleRng& rng) {
  const double draw =
      truncated_normal(entry.cycles_mean, entry.cycles_std, rng, "cycle-count");
  return static_cast<int>(std::lround(std::max(1.0, draw)));
}

double derive_cycle_energy(const PerformanceEntry& entry, double mass_kg,
                           double g, double body_length_cm) {
  if (!entry.cot) throw ModelError("entry has no transport-cost calibration");
  if (!entry.disp_mean) {
    throw ModelError("entry has no displacement calibration");
  }
  if (!(mass_kg > 0.0) || !(g > 0.0) || !(body_length_cm > 0.0)) {
    throw RangeError("mass, g and body length must be positive");
  }
  const double distance_m = *entry.disp_mean * body_length_cm / 100.0;
  return *entry.cot * mass_kg * g * distance_m;
}

}  // namespace hatchling::terrain

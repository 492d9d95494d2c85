#include "hatchling/sensors.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "hatchling/kinematics.hpp"

namespace hatchling::sensors {

double normalize_heading(double heading_deg) {
  double h = std::fmod(heading_deg, 360.0);
  if (h <= -180.0) h += 360.0;
  if (h > 180.0) h -= 360.0;
  return h;
}

void TargetPath::validate() const {
  if (dir_x == 0.0 && dir_y == 0.0) {
    throw ConfigError("target path direction must not be the zero vector");
  }
}

double TargetPath::heading_deg() const {
  validate();
  return kinematics::rad2deg(std::atan2(dir_y, dir_x));
}

ImuReading read_imu(const RobotPose& pose, const TargetPath& path,
                    double noise_std_cm, SampleRng& rng) {
  path.validate();
  if (noise_std_cm < 0.0) {
    throw RangeError("imu noise stddev must be nonnegative");
  }
  const double len = std::hypot(path.dir_x, path.dir_y);
  const double ox = pose.x_cm - path.origin_x_cm;
  const double oy = pose.y_cm - path.origin_y_cm;
  // z of dir x offset: positive when the robot sits left of the path.
  const double lateral = (path.dir_x * oy - path.dir_y * ox) / len;
  // Burns two words even at zero noise, like the terrain samplers.
  return {pose.heading_deg, lateral + rng.normal(0.0, noise_std_cm)};
}

const char* to_string(ColorReading c) {
  switch (c) {
    case ColorReading::Grey:
      return "grey";
    case ColorReading::Red:
      return "red";
    case ColorReading::LightBrown:
      return "light_brown";
    case ColorReading::Other:
      return "other";
  }
  return "?";
}

namespace {

ColorReading true_color(terrain::TerrainType terrain) {
  switch (terrain::color_tag(terrain)) {
    case terrain::ColorTag::Grey:
      return ColorReading::Grey;
    case terrain::ColorTag::Red:
      return ColorReading::Red;
    case terrain::ColorTag::LightBrown:
      return ColorReading::LightBrown;
    case terrain::ColorTag::None:
      return ColorReading::Other;
  }
  return ColorReading::Other;
}

}  // namespace

ColorReading detect_color(terrain::TerrainType terrain, double misread_prob,
                          SampleRng& rng) {
  if (!(misread_prob >= 0.0 && misread_prob < 1.0)) {
    throw RangeError("misread probability must lie in [0, 1)");
  }
  const ColorReading truth = true_color(terrain);
  if (!rng.bernoulli(misread_prob)) return truth;

  // uniform01() < 1, so the index stays in {0, 1, 2}.
  int pick = static_cast<int>(rng.uniform01() * 3.0);
  constexpr std::array<ColorReading, 4> kAll = {
      ColorReading::Grey, ColorReading::Red, ColorReading::LightBrown,
      ColorReading::Other};
  for (ColorReading c : kAll) {
    if (c == truth) continue;
    if (pick == 0) return c;
    --pick;
  }
  return truth;  // unreachable
}

const char* to_string(TerrainClass t) {
  switch (t) {
    case TerrainClass::HardGround:
      return "hard_ground";
    case TerrainClass::Rocks:
      return "rocks";
    case TerrainClass::Sand:
      return "sand";
    case TerrainClass::Unknown:
      return "unknown";
  }
  return "?";
}

TerrainClass parse_terrain_class(const std::string& s) {
  if (s == "hard_ground") return TerrainClass::HardGround;
  if (s == "rocks") return TerrainClass::Rocks;
  if (s == "sand") return TerrainClass::Sand;
  if (s == "unknown") return TerrainClass::Unknown;
  throw ParseError("unknown terrain class: " + s);
}

TerrainClass classify_terrain(ColorReading color) {
  switch (color) {
    case ColorReading::Grey:
      return TerrainClass::HardGround;
    case ColorReading::Red:
      return TerrainClass::Rocks;
    case ColorReading::LightBrown:
      return TerrainClass::Sand;
    case ColorReading::Other:
      return TerrainClass::Unknown;
  }
  return TerrainClass::Unknown;
}

terrain::TerrainType table_terrain(TerrainClass t) {
  switch (t) {
    case TerrainClass::HardGround:
      return terrain::TerrainType::FlatFoam;
    case TerrainClass::Rocks:
      return terrain::TerrainType::Rocks;
    case TerrainClass::Sand:
      return terrain::TerrainType::DrySand;
    case TerrainClass::Unknown:
      break;
  }
  throw NotCalibratedError("no calibration terrain stands for 'unknown'");
}

const char* to_string(GaitDecision d) {
  switch (d) {
    case GaitDecision::Straight:
      return "straight";
    case GaitDecision::CorrectLeft:
      return "correct_left";
    case GaitDecision::CorrectRight:
      return "correct_right";
  }
  return "?";
}

GaitDecision trajectory_correction_step(const ImuReading& reading,
                                        double threshold_cm) {
  if (!(threshold_cm > 0.0)) {
    throw RangeError("correction threshold must be positive");
  }
  const double dev = reading.lateral_deviation_cm;
  if (!(std::abs(dev) > threshold_cm)) return GaitDecision::Straight;
  return dev > 0.0 ? GaitDecision::CorrectRight : GaitDecision::CorrectLeft;
}

GaitPolicy::Choice GaitPolicy::choice(
    TerrainClass terrain_class, terrain::FlipperMorphology morphology) const {
  const auto it = map_.find({terrain_class, morphology});
  if (it == map_.end()) {
    throw ConfigError("policy '" + name_ + "' has no entry for " +
                      std::string(to_string(terrain_class)) + " / " +
                      terrain::to_string(morphology.stiffness) + " / " +
                      terrain::to_string(morphology.placement));
  }
  return it->second;
}

void GaitPolicy::set(TerrainClass terrain_class,
                     terrain::FlipperMorphology morphology, Choice choice) {
  if (!map_.emplace(std::make_pair(terrain_class, morphology), choice)
           .second) {
    throw ConfigError("policy '" + name_ + "' assigns " +
                      std::string(to_string(terrain_class)) + " / " +
                      terrain::to_string(morphology.stiffness) + " / " +
                      terrain::to_string(morphology.placement) + " twice");
  }
}

void GaitPolicy::validate() const {
  constexpr std::array<TerrainClass, 4> kClasses = {
      TerrainClass::HardGround, TerrainClass::Rocks, TerrainClass::Sand,
      TerrainClass::Unknown};
  for (TerrainClass tc : kClasses) {
    for (terrain::Stiffness s :
         {terrain::Stiffness::Soft, terrain::Stiffness::Rigid}) {
      for (terrain::Placement p :
           {terrain::Placement::All, terrain::Placement::FrontOnly}) {
        const auto it = map_.find({tc, {s, p}});
        if (it == map_.end()) {
          throw ConfigError("policy '" + name_ + "' misses " +
                            std::string(to_string(tc)) + " / " +
                            terrain::to_string(s) + " / " +
                            terrain::to_string(p));
        }
        const Choice& c = it->second;
        if (c.keep) {
          continue;
        }
        if (tc == TerrainClass::Unknown) {
          throw ConfigError("policy '" + name_ +
                            "' must keep the running gait on unknown terrain");
        }
        if (c.family != terrain::GaitFamily::AllTogether &&
            c.family != terrain::GaitFamily::Diagonal) {
          throw ConfigError("policy '" + name_ +
                            "' selects a non-forward gait for " +
                            std::string(to_string(tc)));
        }
      }
    }
  }
}

const GaitPolicy& GaitPolicySet::policy(const std::string& name) const {
  const auto it = policies_.find(name);
  if (it == policies_.end()) {
    throw ConfigError("no gait policy named '" + name + "'");
  }
  return it->second;
}

bool GaitPolicySet::has(const std::string& name) const {
  return policies_.count(name) != 0;
}

std::vector<std::string> GaitPolicySet::names() const {
  std::vector<std::string> out;
  out.reserve(policies_.size());
  for (const auto& [name, policy] : policies_) out.push_back(name);
  return out;
}

GaitPolicySet GaitPolicySet::load(std::istream& in,
                                  const std::string& origin) {
  GaitPolicySet set;
  std::string line;
  int line_no = 0;
  std::optional<GaitPolicy> current;

  const auto flush = [&] {
    if (!current) return;
    current->validate();
    const std::string name = current->name();
    if (!set.policies_.emplace(name, std::move(*current)).second) {
      throw ConfigError("duplicate policy name: " + name);
    }
    current.reset();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank

    if (tok.front() == '[') {
      flush();
      std::string rest = tok.substr(1) + " ";
      while (ls >> tok) rest += tok + " ";
      const std::size_t close = rest.find(']');
      if (close == std::string::npos) {
        throw ParseError(where + ": unterminated policy header");
      }
      std::istringstream hs(rest.substr(0, close));
      std::string kind, name, extra;
      if (!(hs >> kind >> name) || kind != "policy" || (hs >> extra)) {
        throw ParseError(where + ": expected [policy <name>]");
      }
      current.emplace(name);
      continue;
    }

    if (!current) {
      throw ParseError(where + ": rule outside a policy: " + tok);
    }

    std::string stiffness_tok, placement_tok, choice_tok, extra;
    if (!(ls >> stiffness_tok >> placement_tok >> choice_tok)) {
      throw ParseError(where +
                       ": expected <class> <stiffness> <placement> <choice>");
    }
    if (ls >> extra) throw ParseError(where + ": trailing junk: " + extra);

    std::vector<TerrainClass> classes;
    if (tok == "*") {
      classes = {TerrainClass::HardGround, TerrainClass::Rocks,
                 TerrainClass::Sand, TerrainClass::Unknown};
    } else {
      classes = {parse_terrain_class(tok)};
    }
    std::vector<terrain::Stiffness> stiffnesses;
    if (stiffness_tok == "*") {
      stiffnesses = {terrain::Stiffness::Soft, terrain::Stiffness::Rigid};
    } else {
      stiffnesses = {terrain::parse_stiffness(stiffness_tok)};
    }
    std::vector<terrain::Placement> placements;
    if (placement_tok == "*") {
      placements = {terrain::Placement::All, terrain::Placement::FrontOnly};
    } else {
      placements = {terrain::parse_placement(placement_tok)};
    }

    GaitPolicy::Choice choice;
    if (choice_tok == "keep") {
      choice.keep = true;
    } else {
      choice.family = terrain::parse_gait_family(choice_tok);
    }
    try {
      for (TerrainClass tc : classes) {
        for (terrain::Stiffness s : stiffnesses) {
          for (terrain::Placement p : placements) {
            current->set(tc, {s, p}, choice);
          }
        }
      }
    } catch (const ConfigError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  flush();
  return set;
}

GaitPolicySet GaitPolicySet::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gait policy file: " + path);
  return load(in, path);
}

std::string GaitPolicySet::default_path() {
  return std::string(HATCHLING_DATA_DIR) + "/gait_policy.conf";
}

const GaitPolicySet& GaitPolicySet::shipped() {
  static const GaitPolicySet set = load_file(default_path());
  return set;
}

gait::GaitPattern select_gait(TerrainClass terrain_class,
                              terrain::FlipperMorphology morphology,
                              const GaitPolicy& policy,
                              const gait::GaitPattern& current) {
  if (terrain_class == TerrainClass::Unknown) return current;
  const GaitPolicy::Choice c = policy.choice(terrain_class, morphology);
  if (c.keep) return current;
  switch (c.family) {
    case terrain::GaitFamily::AllTogether:
      return gait::GaitPattern::all_together();
    case terrain::GaitFamily::Diagonal:
      return gait::GaitPattern::diagonal();
    default:
      throw ConfigError("policy selected a non-forward gait");
  }
}

double MotorCurrents::power_in_w() const {
  double p = 0.0;
  for (double a : amps) p += a * supply_v;
  return p;
}

MotorCurrents simulate_motor_currents(double energy_j, double cycle_period_s,
                                      double supply_v) {
  if (!(cycle_period_s > 0.0)) {
    throw ConfigError("cycle period must be positive");
  }
  if (!(supply_v > 0.0)) {
    throw ConfigError("supply voltage must be positive");
  }
  if (energy_j < 0.0) {
    throw RangeError("cycle energy must be nonnegative");
  }
  MotorCurrents out;
  out.supply_v = supply_v;
  const double per_motor = energy_j / (6.0 * supply_v * cycle_period_s);
  out.amps.fill(per_motor);
  return out;
}

}  // namespace hatchling::sensors

#include "hatchling/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "hatchling/metrics.hpp"
#include "hatchling/rng.hpp"
#include "hatchling/sensors.hpp"

namespace hatchling::suite {

namespace {

// Targets with zero calibrated spread must be met exactly; this absorbs
// nothing but floating-point noise.
constexpr double kExactTolerance = 1e-9;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt6(const std::optional<double>& v) {
  return v ? fmt6(*v) : std::string();
}

// ---- suite file parsing ----------------------------------------------------

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

double parse_double(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(where, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail(where, "trailing junk in number '" + tok + "'");
  return v;
}

long parse_count(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    fail(where, "expected a count, got '" + tok + "'");
  }
  if (used != tok.size()) fail(where, "trailing junk in count '" + tok + "'");
  return v;
}

// The low-level parsers report the bad token; suite diagnostics add the
// admissible names so a typo in a hand-edited file is a one-look fix.
terrain::TerrainType parse_terrain_tok(const std::string& tok,
                                       const std::string& where) {
  try {
    return terrain::parse_terrain(tok);
  } catch (const ParseError&) {
    fail(where, "unknown terrain '" + tok +
                    "' (expected dry_sand, rocks, wet_sand, flat_foam, "
                    "foam_stairs, or sandy_incline)");
  }
}

terrain::Stiffness parse_stiffness_tok(const std::string& tok,
                                       const std::string& where) {
  try {
    return terrain::parse_stiffness(tok);
  } catch (const ParseError&) {
    fail(where, "unknown stiffness '" + tok + "' (expected soft or rigid)");
  }
}

terrain::Placement parse_placement_tok(const std::string& tok,
                                       const std::string& where) {
  try {
    return terrain::parse_placement(tok);
  } catch (const ParseError&) {
    fail(where,
         "unknown placement '" + tok + "' (expected all or front_only)");
  }
}

gait::GaitPattern parse_gait_tok(const std::string& tok,
                                 const std::string& where) {
  try {
    return gait::parse_gait_pattern(tok);
  } catch (const std::exception&) {
    fail(where, "unknown gait '" + tok +
                    "' (expected all_together, diagonal, "
                    "turn_front_only_left/right, or "
                    "turn_all_flippers_left/right)");
  }
}

terrain::TransitPolicy parse_policy_tok(const std::string& tok,
                                        const std::string& where) {
  try {
    return terrain::parse_transit_policy(tok);
  } catch (const ParseError&) {
    fail(where, "unknown transit policy '" + tok +
                    "' (expected adaptive, diagonal, or all_together)");
  }
}

bool metric_valid_for(SuiteKind kind, const std::string& metric) {
  switch (kind) {
    case SuiteKind::Displacement:
      return metric == "displacement_rate" || metric == "cot";
    case SuiteKind::Turning:
      return metric == "turning_rate";
    case SuiteKind::Obstacle:
      return metric == "success_rate" || metric == "descent_rate" ||
             metric == "cycles";
    case SuiteKind::Transit:
      return metric == "displacement_rate";
  }
  return false;
}

const char* metrics_for(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Displacement:
      return "displacement_rate, cot";
    case SuiteKind::Turning:
      return "turning_rate";
    case SuiteKind::Obstacle:
      return "success_rate, descent_rate, cycles";
    case SuiteKind::Transit:
      return "displacement_rate";
  }
  return "";
}

std::string describe(const ExperimentSuite& s, const ConfigTemplate& c) {
  std::ostringstream out;
  if (s.kind == SuiteKind::Transit) {
    out << "transit " << terrain::to_string(c.morphology.stiffness) << ' '
        << terrain::to_string(c.policy);
  } else {
    out << terrain::to_string(c.terrain) << ' '
        << terrain::to_string(c.morphology.stiffness) << ' '
        << terrain::to_string(c.morphology.placement) << ' ' << c.gait.name();
  }
  return out.str();
}

// ---- trial execution -------------------------------------------------------

// Runs fn(t) for every trial index, partitioned into contiguous chunks over
// at most `parallelism` threads. Results land in per-trial slots, so the
// merge is order-independent; the first worker exception is rethrown after
// all of them joined.
template <typename Fn>
void for_trials(long trials, int parallelism, Fn&& fn) {
  const int workers =
      static_cast<int>(std::min<long>(std::max(parallelism, 1), trials));
  if (workers <= 1) {
    for (long t = 0; t < trials; ++t) fn(t);
    return;
  }
  const long chunk = (trials + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const long lo = w * chunk;
        const long hi = std::min(trials, lo + chunk);
        for (long t = lo; t < hi; ++t) fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double tolerance_from(double per_trial_spread, long n) {
  return std::max(3.0 * per_trial_spread / std::sqrt(static_cast<double>(n)),
                  kExactTolerance);
}

double cell_value(const std::optional<double>& v, const char* field,
                  const std::string& cell) {
  if (!v) throw NotCalibratedError(cell + ": cell lacks " + field);
  return *v;
}

ReportRow base_row(const ExperimentSuite& s, const ConfigTemplate& c) {
  ReportRow row;
  row.suite = s.name;
  row.terrain = s.kind == SuiteKind::Transit
                    ? "transit"
                    : terrain::to_string(c.terrain);
  row.stiffness = terrain::to_string(c.morphology.stiffness);
  row.placement = terrain::to_string(c.morphology.placement);
  row.gait_policy = s.kind == SuiteKind::Transit ? terrain::to_string(c.policy)
                                                 : c.gait.name();
  return row;
}

void finish_row(ReportRow& row, double mean, double stddev, long n,
                double target, double per_trial_spread,
                const std::string& provenance) {
  row.mean = mean;
  row.stddev = stddev;
  row.n = n;
  row.target = target;
  row.tolerance = tolerance_from(per_trial_spread, n);
  row.verdict = std::abs(mean - target) <= *row.tolerance ? "pass" : "fail";
  row.note = provenance;
}

sim::TrialConfig materialize(const ExperimentSuite& s, const ConfigTemplate& c,
                             const RunOptions& opt) {
  sim::TrialConfig cfg;
  cfg.mass_kg = opt.mass_kg;
  cfg.morphology = c.morphology;
  if (s.stop) cfg.stop = *s.stop;
  switch (s.kind) {
    case SuiteKind::Displacement:
      cfg.arena = sim::Arena::single(c.terrain);
      cfg.initial_gait = c.gait;
      cfg.correction_enabled = opt.correction_enabled;
      break;
    case SuiteKind::Turning:
      cfg.arena = sim::Arena::single(c.terrain);
      cfg.initial_gait = c.gait;
      cfg.correction_enabled = false;  // open-loop pivot protocol
      break;
    case SuiteKind::Transit:
      cfg.arena = sim::Arena::transit_course();
      cfg.start = {0.0, 50.0, 0.0};
      cfg.path = {0.0, 50.0, 1.0, 0.0};
      cfg.correction_enabled = opt.correction_enabled;
      switch (c.policy) {
        case terrain::TransitPolicy::Adaptive:
          cfg.adaptive = true;
          cfg.policy = &sensors::GaitPolicySet::shipped().policy("measured");
          cfg.initial_gait = gait::GaitPattern::diagonal();
          break;
        case terrain::TransitPolicy::FixedDiagonal:
          cfg.initial_gait = gait::GaitPattern::diagonal();
          break;
        case terrain::TransitPolicy::FixedAllTogether:
          cfg.initial_gait = gait::GaitPattern::all_together();
          break;
      }
      break;
    case SuiteKind::Obstacle:
      break;  // obstacle trials never build a TrialConfig
  }
  return cfg;
}

void run_obstacle_config(std::vector<ReportRow>& rows,
                         const ExperimentSuite& s, const ConfigTemplate& c,
                         std::size_t config_index, long trials,
                         std::uint64_t suite_seed,
                         const terrain::CalibrationTable& table,
                         const RunOptions& opt) {
  const auto family = terrain::family_of(c.gait);
  const auto& entry = table.lookup(c.terrain, c.morphology, family);
  const std::string cell = describe(s, c);

  std::vector<double> success(trials);
  std::vector<double> descent(trials, -1.0);
  std::vector<double> cycles(trials, -1.0);
  for_trials(trials, opt.parallelism, [&](long t) {
    const auto r = sim::run_obstacle_trial(
        c.terrain, c.morphology, family,
        derive_trial_seed(suite_seed, config_index, t), table);
    success[t] = r.success ? 1.0 : 0.0;
    if (r.descended) descent[t] = *r.descended ? 1.0 : 0.0;
    if (r.cycles) cycles[t] = static_cast<double>(*r.cycles);
  });

  const auto conditioned = [](const std::vector<double>& all) {
    std::vector<double> out;
    for (double v : all) {
      if (v >= 0.0) out.push_back(v);
    }
    return out;
  };

  for (const TargetRule& rule : s.targets) {
    ReportRow row = base_row(s, c);
    row.metric = rule.metric;
    if (rule.metric == "success_rate") {
      const double target =
          rule.from_cell ? cell_value(entry.success_prob, "success_prob", cell)
                         : rule.mean;
      const double spread = rule.from_cell
                                ? std::sqrt(target * (1.0 - target))
                                : rule.stddev;
      const auto agg = sim::aggregate(success);
      finish_row(row, agg.mean, agg.stddev, trials, target, spread,
                 rule.from_cell ? entry.provenance : rule.provenance);
    } else {
      const bool is_descent = rule.metric == "descent_rate";
      if (rule.from_cell &&
          !(is_descent ? entry.descent_prob : entry.cycles_mean)) {
        continue;  // this config never calibrated the conditional stage
      }
      const auto vals = conditioned(is_descent ? descent : cycles);
      const double target =
          rule.from_cell
              ? (is_descent ? *entry.descent_prob : *entry.cycles_mean)
              : rule.mean;
      const double spread =
          rule.from_cell
              ? (is_descent ? std::sqrt(target * (1.0 - target))
                            : cell_value(entry.cycles_std, "cycles_std", cell))
              : rule.stddev;
      if (vals.empty()) {
        // Conditioned on a successful climb and none happened.
        row.n = 0;
        row.target = target;
        row.verdict = "no_data";
        row.note = rule.from_cell ? entry.provenance : rule.provenance;
        rows.push_back(std::move(row));
        continue;
      }
      const auto agg = sim::aggregate(vals);
      finish_row(row, agg.mean, agg.stddev, agg.n, target, spread,
                 rule.from_cell ? entry.provenance : rule.provenance);
    }
    rows.push_back(std::move(row));
  }
}

void run_locomotion_config(std::vector<ReportRow>& rows,
                           const ExperimentSuite& s, const ConfigTemplate& c,
                           std::size_t config_index, long trials,
                           std::uint64_t suite_seed,
                           const terrain::CalibrationTable& table,
                           const RunOptions& opt) {
  const std::string cell = describe(s, c);
  const terrain::PerformanceEntry& entry =
      s.kind == SuiteKind::Transit
          ? table.transit(c.morphology.stiffness, c.policy)
          : table.lookup(c.terrain, c.morphology, terrain::family_of(c.gait));

  const sim::TrialConfig base = materialize(s, c, opt);
  const bool want_cot =
      std::any_of(s.targets.begin(), s.targets.end(),
                  [](const TargetRule& r) { return r.metric == "cot"; });

  std::vector<double> rate(trials);
  std::vector<double> energy, dist, cyc;
  if (want_cot) {
    energy.resize(trials);
    dist.resize(trials);
    cyc.resize(trials);
  }
  for_trials(trials, opt.parallelism, [&](long t) {
    sim::TrialConfig cfg = base;
    cfg.seed = derive_trial_seed(suite_seed, config_index, t);
    const auto res = sim::run_trial(cfg, table);
    rate[t] = s.kind == SuiteKind::Turning
                  ? sim::turning_rate(res)
                  : sim::displacement_rate(res, table.body_length_cm);
    if (want_cot) {
      energy[t] = res.energy_j;
      dist[t] = res.distance_cm;
      cyc[t] = static_cast<double>(res.cycles);
    }
  });

  for (const TargetRule& rule : s.targets) {
    ReportRow row = base_row(s, c);
    row.metric = rule.metric;
    if (rule.metric == "cot") {
      if (rule.from_cell && !entry.cot) continue;  // efficiency not measured
      // The batch transport cost (total energy over total weight-distance)
      // rather than a mean of per-trial ratios; the latter carries an
      // E[1/x] bias the table value never had.
      const double total_e = std::accumulate(energy.begin(), energy.end(), 0.0);
      const double total_d = std::accumulate(dist.begin(), dist.end(), 0.0);
      const double batch =
          sim::compute_cot(total_e, opt.mass_kg, base.g_m_s2, total_d / 100.0);
      std::vector<double> per_trial(trials);
      for (long t = 0; t < trials; ++t) {
        per_trial[t] = sim::compute_cot(energy[t], opt.mass_kg, base.g_m_s2,
                                        dist[t] / 100.0);
      }
      const auto agg = sim::aggregate(per_trial);
      const double target = rule.from_cell ? *entry.cot : rule.mean;
      // Tolerance from the calibrated inputs, not the observed sample: the
      // per-cycle energy is fixed, so a trial's ratio inherits the relative
      // spread of its mean displacement over ~k cycles. The observed sample
      // spread still reports as the std column, but at small n it badly
      // underestimates the true spread and would flake the verdict.
      double spread = rule.stddev;
      if (rule.from_cell) {
        const double mu = cell_value(entry.disp_mean, "disp_mean", cell);
        const double sigma = entry.disp_std.value_or(0.0);
        const double mean_cycles =
            std::accumulate(cyc.begin(), cyc.end(), 0.0) /
            static_cast<double>(trials);
        spread = (mu > 0.0 && mean_cycles > 0.0)
                     ? target * (sigma / mu) / std::sqrt(mean_cycles)
                     : 0.0;
      }
      finish_row(row, batch, agg.stddev, trials, target, spread,
                 rule.from_cell ? entry.provenance : rule.provenance);
    } else {
      const bool turning = s.kind == SuiteKind::Turning;
      const double target =
          rule.from_cell
              ? cell_value(turning ? entry.turn_mean : entry.disp_mean,
                           turning ? "turn_mean" : "disp_mean", cell)
              : rule.mean;
      const double spread =
          rule.from_cell
              ? cell_value(turning ? entry.turn_std : entry.disp_std,
                           turning ? "turn_std" : "disp_std", cell)
              : rule.stddev;
      const auto agg = sim::aggregate(rate);
      finish_row(row, agg.mean, agg.stddev, trials, target, spread,
                 rule.from_cell ? entry.provenance : rule.provenance);
    }
    rows.push_back(std::move(row));
  }
}

void run_suite_into(Report& report, const ExperimentSuite& s,
                    const terrain::CalibrationTable& table,
                    const RunOptions& opt) {
  const long trials = opt.trials_override > 0 ? opt.trials_override
                      : opt.acceptance_counts ? s.acceptance_trials
                                              : s.trials;
  const std::uint64_t suite_seed = opt.master_seed ^ fnv1a(s.name.c_str());
  report.seeds.push_back(
      {s.name, suite_seed, static_cast<long>(s.configs.size()), trials});

  for (std::size_t ci = 0; ci < s.configs.size(); ++ci) {
    const ConfigTemplate& c = s.configs[ci];
    try {
      if (s.kind == SuiteKind::Obstacle) {
        run_obstacle_config(report.rows, s, c, ci, trials, suite_seed, table,
                            opt);
      } else {
        run_locomotion_config(report.rows, s, c, ci, trials, suite_seed,
                              table, opt);
      }
    } catch (const NotCalibratedError& e) {
      for (const TargetRule& rule : s.targets) {
        ReportRow row = base_row(s, c);
        row.metric = rule.metric;
        row.verdict = "not_calibrated";
        row.note = e.what();
        report.rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      for (const TargetRule& rule : s.targets) {
        ReportRow row = base_row(s, c);
        row.metric = rule.metric;
        row.verdict = "error";
        row.note = e.what();
        report.rows.push_back(std::move(row));
      }
    }
  }
}

}  // namespace

// ---- names ------------------------------------------------------------------

const char* to_string(SuiteKind k) {
  switch (k) {
    case SuiteKind::Displacement:
      return "displacement";
    case SuiteKind::Turning:
      return "turning";
    case SuiteKind::Obstacle:
      return "obstacle";
    case SuiteKind::Transit:
      return "transit";
  }
  return "?";
}

SuiteKind parse_suite_kind(const std::string& s) {
  if (s == "displacement") return SuiteKind::Displacement;
  if (s == "turning") return SuiteKind::Turning;
  if (s == "obstacle") return SuiteKind::Obstacle;
  if (s == "transit") return SuiteKind::Transit;
  throw ParseError("unknown suite kind '" + s +
                   "' (expected displacement, turning, obstacle, or transit)");
}

// ---- loading ----------------------------------------------------------------

ExperimentSuite ExperimentSuite::load(std::istream& in,
                                      const std::string& origin) {
  ExperimentSuite s;
  bool saw_suite = false;
  bool saw_kind = false;
  std::optional<terrain::TerrainType> current_terrain;

  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string where = origin + ":" + std::to_string(line);
    const auto hash = raw.find('#');
    std::istringstream split(hash == std::string::npos ? raw
                                                       : raw.substr(0, hash));
    std::vector<std::string> tok;
    std::string word;
    while (split >> word) tok.push_back(word);
    if (tok.empty()) continue;

    const std::string& directive = tok[0];
    const auto want = [&](std::size_t n, const char* usage) {
      if (tok.size() != n + 1) {
        fail(where, "'" + directive + "' expects: " + directive + " " + usage);
      }
    };
    const auto need_kind = [&] {
      if (!saw_kind) {
        fail(where, "declare 'kind' before '" + directive + "' lines");
      }
    };

    if (directive == "suite") {
      want(1, "<name>");
      if (saw_suite) fail(where, "duplicate 'suite' line");
      s.name = tok[1];
      saw_suite = true;
    } else if (directive == "kind") {
      want(1, "<displacement|turning|obstacle|transit>");
      if (saw_kind) fail(where, "duplicate 'kind' line");
      try {
        s.kind = parse_suite_kind(tok[1]);
      } catch (const ParseError& e) {
        fail(where, e.what());
      }
      saw_kind = true;
    } else if (directive == "trials") {
      want(1, "<count>");
      s.trials = parse_count(tok[1], where);
      if (s.trials < 1) fail(where, "trials must be at least 1");
    } else if (directive == "acceptance_trials") {
      want(1, "<count>");
      s.acceptance_trials = parse_count(tok[1], where);
      if (s.acceptance_trials < 1) {
        fail(where, "acceptance_trials must be at least 1");
      }
    } else if (directive == "stop") {
      need_kind();
      want(2, "<max_cycles|distance|full_turn> <value>");
      if (s.stop) fail(where, "duplicate 'stop' line");
      if (s.kind == SuiteKind::Obstacle) {
        fail(where, "obstacle suites have no stop rule; outcomes are drawn "
                    "per trial");
      }
      const double value = parse_double(tok[2], where);
      try {
        if (tok[1] == "max_cycles") {
          s.stop = sim::StopRule::max_cycles(parse_count(tok[2], where));
        } else if (tok[1] == "distance") {
          s.stop = sim::StopRule::distance(value);
        } else if (tok[1] == "full_turn") {
          s.stop = sim::StopRule::full_turn(value);
        } else {
          fail(where, "unknown stop rule '" + tok[1] +
                          "' (expected max_cycles, distance, or full_turn)");
        }
      } catch (const RangeError& e) {
        fail(where, e.what());
      }
      const bool ok =
          s.kind == SuiteKind::Turning
              ? s.stop->kind != sim::StopRule::Kind::Distance
              : s.stop->kind != sim::StopRule::Kind::FullTurn;
      if (!ok) {
        fail(where, std::string("stop rule '") + tok[1] + "' never triggers "
                        "under a " + to_string(s.kind) + " suite");
      }
    } else if (directive == "terrain") {
      need_kind();
      want(1, "<name>");
      if (s.kind == SuiteKind::Transit) {
        fail(where, "transit suites run the fixed three-segment course; "
                    "remove the terrain line");
      }
      current_terrain = parse_terrain_tok(tok[1], where);
    } else if (directive == "config") {
      need_kind();
      ConfigTemplate c;
      if (s.kind == SuiteKind::Transit) {
        want(2, "<stiffness> <policy>");
        c.morphology.stiffness = parse_stiffness_tok(tok[1], where);
        c.policy = parse_policy_tok(tok[2], where);
      } else {
        want(3, "<stiffness> <placement> <gait>");
        if (!current_terrain) {
          fail(where, "set 'terrain' before config lines");
        }
        c.terrain = *current_terrain;
        c.morphology.stiffness = parse_stiffness_tok(tok[1], where);
        c.morphology.placement = parse_placement_tok(tok[2], where);
        c.gait = parse_gait_tok(tok[3], where);
        const bool turning_gait = c.gait.is_turning();
        if (c.gait.is_correction()) {
          fail(where, "correction gaits are engaged by the controller, not "
                      "scheduled by suites");
        }
        if (turning_gait != (s.kind == SuiteKind::Turning)) {
          fail(where, std::string("gait '") + c.gait.name() +
                          "' does not fit a " + to_string(s.kind) + " suite");
        }
      }
      if (std::find(s.configs.begin(), s.configs.end(), c) !=
          s.configs.end()) {
        fail(where, "duplicate config");
      }
      s.configs.push_back(c);
    } else if (directive == "target") {
      need_kind();
      if (tok.size() < 3) {
        fail(where, "'target' expects: target <metric> cell | "
                    "target <metric> value <mean> <std> <provenance...>");
      }
      TargetRule rule;
      rule.metric = tok[1];
      if (!metric_valid_for(s.kind, rule.metric)) {
        fail(where, "metric '" + rule.metric + "' does not apply to a " +
                        to_string(s.kind) + " suite (expected one of: " +
                        metrics_for(s.kind) + ")");
      }
      if (tok[2] == "cell") {
        if (tok.size() != 3) fail(where, "'target <metric> cell' takes no "
                                         "further tokens");
      } else if (tok[2] == "value") {
        if (tok.size() < 6) {
          fail(where, "'target <metric> value' expects <mean> <std> "
                      "<provenance...>");
        }
        rule.from_cell = false;
        rule.mean = parse_double(tok[3], where);
        rule.stddev = parse_double(tok[4], where);
        if (rule.stddev < 0.0) fail(where, "target std must be nonnegative");
        for (std::size_t i = 5; i < tok.size(); ++i) {
          if (i > 5) rule.provenance += ' ';
          rule.provenance += tok[i];
        }
      } else {
        fail(where, "target source must be 'cell' or 'value', got '" +
                        tok[2] + "'");
      }
      for (const TargetRule& existing : s.targets) {
        if (existing.metric == rule.metric) {
          fail(where, "duplicate target for metric '" + rule.metric + "'");
        }
      }
      s.targets.push_back(std::move(rule));
    } else {
      fail(where, "unknown directive '" + directive +
                      "' (expected suite, kind, trials, acceptance_trials, "
                      "stop, terrain, config, or target)");
    }
  }

  if (!saw_suite) throw ParseError(origin + ": missing 'suite' line");
  if (!saw_kind) throw ParseError(origin + ": missing 'kind' line");
  if (s.configs.empty()) throw ParseError(origin + ": no config lines");
  if (s.targets.empty()) throw ParseError(origin + ": no target lines");
  if (s.kind != SuiteKind::Obstacle && !s.stop) {
    throw ParseError(origin + ": missing 'stop' line");
  }
  return s;
}

ExperimentSuite ExperimentSuite::load_file(
    const std::string& path, const terrain::CalibrationTable* table) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open suite file: " + path);
  ExperimentSuite s = load(in, path);
  s.validate_cells(table ? *table : terrain::CalibrationTable::shipped());
  return s;
}

void ExperimentSuite::validate_cells(
    const terrain::CalibrationTable& table) const {
  for (const ConfigTemplate& c : configs) {
    const bool covered =
        kind == SuiteKind::Transit
            ? table.has_transit(c.morphology.stiffness, c.policy)
            : table.has(c.terrain, c.morphology, terrain::family_of(c.gait));
    if (!covered) {
      throw NotCalibratedError("suite " + name +
                               ": no calibration for config " +
                               describe(*this, c));
    }
  }
}

std::string ExperimentSuite::default_dir() {
  return std::string(HATCHLING_DATA_DIR) + "/suites";
}

std::vector<std::string> ExperimentSuite::list_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("suite directory not found: " + dir);
  }
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".suite") {
      out.push_back(e.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- reports ----------------------------------------------------------------

bool Report::all_passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.verdict == "pass"; });
}

long Report::count(const std::string& verdict) const {
  return std::count_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
    return r.verdict == verdict;
  });
}

void Report::write_csv(std::ostream& out) const {
  out << "suite,terrain,stiffness,placement,gait_policy,metric,mean,std,n,"
         "target,tolerance,pass\n";
  for (const ReportRow& r : rows) {
    out << r.suite << ',' << r.terrain << ',' << r.stiffness << ','
        << r.placement << ',' << r.gait_policy << ',' << r.metric << ','
        << fmt6(r.mean) << ',' << fmt6(r.stddev) << ',' << r.n << ','
        << fmt6(r.target) << ',' << fmt6(r.tolerance) << ',' << r.verdict
        << '\n';
  }
  if (!out) throw IoError("failed while writing the CSV report");
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["master_seed"] = master_seed;
  j["parallelism"] = parallelism;
  j["runtime_s"] = runtime_s;
  j["all_passed"] = all_passed();
  j["seeds"] = nlohmann::json::array();
  for (const SuiteSeeds& s : seeds) {
    j["seeds"].push_back({{"suite", s.suite},
                          {"seed", s.seed},
                          {"configs", s.configs},
                          {"trials", s.trials}});
  }
  j["rows"] = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json row;
    row["suite"] = r.suite;
    row["terrain"] = r.terrain;
    row["stiffness"] = r.stiffness;
    row["placement"] = r.placement;
    row["gait_policy"] = r.gait_policy;
    row["metric"] = r.metric;
    row["mean"] = r.mean ? nlohmann::json(*r.mean) : nlohmann::json();
    row["std"] = r.stddev ? nlohmann::json(*r.stddev) : nlohmann::json();
    row["n"] = r.n;
    row["target"] = r.target ? nlohmann::json(*r.target) : nlohmann::json();
    row["tolerance"] =
        r.tolerance ? nlohmann::json(*r.tolerance) : nlohmann::json();
    row["pass"] = r.verdict;
    row["note"] = r.note;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

void Report::write(std::ostream& out, const std::string& format) const {
  if (format == "csv") {
    write_csv(out);
  } else if (format == "json") {
    out << to_json().dump(2) << '\n';
    if (!out) throw IoError("failed while writing the JSON report");
  } else {
    throw ConfigError("unknown report format '" + format +
                      "' (expected csv or json)");
  }
}

void Report::write_file(const std::string& path,
                        const std::string& format) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open report path: " + path);
  write(out, format);
}

// ---- running ----------------------------------------------------------------

Report run_suite(const ExperimentSuite& suite,
                 const terrain::CalibrationTable& table,
                 const RunOptions& options) {
  return run_suites({suite}, table, options);
}

Report run_suites(const std::vector<ExperimentSuite>& suites,
                  const terrain::CalibrationTable& table,
                  const RunOptions& options) {
  Report report;
  report.master_seed = options.master_seed;
  report.parallelism = options.parallelism;
  const auto t0 = std::chrono::steady_clock::now();
  for (const ExperimentSuite& s : suites) {
    run_suite_into(report, s, table, options);
  }
  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace hatchling::suite

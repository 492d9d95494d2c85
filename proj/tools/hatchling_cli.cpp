// Command-line harness: replays the calibrated experiment protocols, checks
// their acceptance targets, and emits machine-readable reports.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hatchling/gait.hpp"
#include "hatchling/suite.hpp"
#include "hatchling/terrain.hpp"

namespace {

using hatchling::suite::ExperimentSuite;
using hatchling::suite::Report;
using hatchling::suite::RunOptions;

struct OutputOptions {
  std::string format = "csv";
  std::string out;  // empty: stdout
};

void add_run_flags(CLI::App* cmd, RunOptions* run, OutputOptions* output,
                   bool with_trials) {
  cmd->add_option("--seed", run->master_seed,
                  "Master seed every trial seed derives from");
  if (with_trials) {
    cmd->add_option("--trials", run->trials_override,
                    "Override the per-config trial count")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--parallelism", run->parallelism,
                  "Worker threads per config (results are identical "
                  "regardless)")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--mass-kg", run->mass_kg, "Robot mass in kilograms")
      ->check(CLI::PositiveNumber);
  cmd->add_flag_callback(
      "--no-correction",
      [run] { run->correction_enabled = false; },
      "Disable closed-loop trajectory correction");
  cmd->add_option("--format", output->format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", output->out,
                  "Write the report here instead of stdout");
}

int emit_and_grade(const Report& report, const OutputOptions& output) {
  if (output.out.empty()) {
    report.write(std::cout, output.format);
  } else {
    report.write_file(output.out, output.format);
  }
  if (report.all_passed()) return 0;

  std::cerr << "FAILED: " << report.count("fail") << " target(s) missed, "
            << report.count("not_calibrated") << " not calibrated, "
            << report.count("error") << " errored, "
            << report.count("no_data") << " without data\n";
  for (const auto& row : report.rows) {
    if (row.verdict == "pass") continue;
    std::cerr << "  " << row.verdict << ": " << row.suite << ' '
              << row.terrain << ' ' << row.stiffness << ' ' << row.placement
              << ' ' << row.gait_policy << ' ' << row.metric;
    if (row.mean && row.target && row.tolerance) {
      std::cerr << " (got " << *row.mean << ", want " << *row.target
                << " +/- " << *row.tolerance << ")";
    }
    if (!row.note.empty() && row.verdict != "fail") {
      std::cerr << " [" << row.note << "]";
    }
    std::cerr << '\n';
  }
  return 1;
}

std::string resolve_suite_path(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  const std::string shipped =
      ExperimentSuite::default_dir() + "/" + arg + ".suite";
  if (fs::exists(shipped)) return shipped;
  throw hatchling::IoError("no suite file at '" + arg +
                           "' and no shipped suite named '" + arg + "'");
}

void dump_table(std::ostream& out) {
  const auto& table = hatchling::terrain::CalibrationTable::shipped();
  out << "body_length_cm " << table.body_length_cm << "\n";
  const auto field = [&](const char* name, const std::optional<double>& v) {
    if (v) out << "  " << name << ' ' << *v << '\n';
  };
  for (const auto& row : table.rows()) {
    out << '\n'
        << hatchling::terrain::to_string(row.terrain) << ' '
        << hatchling::terrain::to_string(row.morphology.stiffness) << ' '
        << hatchling::terrain::to_string(row.morphology.placement) << ' '
        << hatchling::terrain::to_string(row.gait) << '\n';
    field("disp_mean", row.entry->disp_mean);
    field("disp_std", row.entry->disp_std);
    field("cot", row.entry->cot);
    field("turn_mean", row.entry->turn_mean);
    field("turn_std", row.entry->turn_std);
    field("success_prob", row.entry->success_prob);
    field("descent_prob", row.entry->descent_prob);
    field("cycles_mean", row.entry->cycles_mean);
    field("cycles_std", row.entry->cycles_std);
    out << "  provenance " << row.entry->provenance << '\n';
  }
  for (const auto& row : table.transit_rows()) {
    out << "\ntransit " << hatchling::terrain::to_string(row.stiffness) << ' '
        << hatchling::terrain::to_string(row.policy) << '\n';
    field("disp_mean", row.entry->disp_mean);
    field("disp_std", row.entry->disp_std);
    out << "  provenance " << row.entry->provenance << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hatchling: sea-turtle-inspired crawler, calibrated simulator "
               "and experiment harness"};
  app.require_subcommand(1);

  RunOptions run_options;
  OutputOptions output;

  auto* run_cmd = app.add_subcommand(
      "run", "Run one experiment suite and grade its targets");
  std::string suite_arg;
  run_cmd->add_option("suite", suite_arg,
                      "Suite file path, or the name of a shipped suite")
      ->required();
  add_run_flags(run_cmd, &run_options, &output, true);

  auto* accept_cmd = app.add_subcommand(
      "check-acceptance",
      "Run every shipped suite at its statistical trial count");
  add_run_flags(accept_cmd, &run_options, &output, false);

  auto* list_cmd =
      app.add_subcommand("list-suites", "List the shipped experiment suites");

  auto* dump_cmd = app.add_subcommand(
      "dump-table", "Print the calibrated terrain response model");

  auto* trace_cmd = app.add_subcommand(
      "trace-gait", "Emit the six-motor servo trajectory of a gait pattern");
  std::string pattern_name;
  int cycles = 2;
  int samples_per_cycle = 64;
  std::string trace_out;
  trace_cmd->add_option("pattern", pattern_name,
                        "all_together, diagonal, turn_front_only_left/right, "
                        "turn_all_flippers_left/right, correction_left/right")
      ->required();
  trace_cmd->add_option("--cycles", cycles, "Full gait cycles to trace")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--samples-per-cycle", samples_per_cycle,
                        "Setpoints per cycle")
      ->check(CLI::Range(2, 1000000));
  trace_cmd->add_option("--out", trace_out,
                        "Write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto suite = ExperimentSuite::load_file(resolve_suite_path(
          suite_arg));
      const auto report = hatchling::suite::run_suite(
          suite, hatchling::terrain::CalibrationTable::shipped(), run_options);
      return emit_and_grade(report, output);
    }

    if (*accept_cmd) {
      std::vector<ExperimentSuite> suites;
      for (const auto& path :
           ExperimentSuite::list_files(ExperimentSuite::default_dir())) {
        suites.push_back(ExperimentSuite::load_file(path));
      }
      run_options.acceptance_counts = true;
      const auto report = hatchling::suite::run_suites(
          suites, hatchling::terrain::CalibrationTable::shipped(),
          run_options);
      return emit_and_grade(report, output);
    }

    if (*list_cmd) {
      for (const auto& path :
           ExperimentSuite::list_files(ExperimentSuite::default_dir())) {
        const auto s = ExperimentSuite::load_file(path);
        std::cout << s.name << ": " << hatchling::suite::to_string(s.kind)
                  << ", " << s.configs.size() << " configs, " << s.trials
                  << " trials (" << s.acceptance_trials << " for acceptance)"
                  << '\n';
      }
      return 0;
    }

    if (*dump_cmd) {
      dump_table(std::cout);
      return 0;
    }

    if (*trace_cmd) {
      const auto pattern = hatchling::gait::parse_gait_pattern(pattern_name);
      const auto traj = hatchling::gait::servo_trajectory(pattern, cycles,
                                                          samples_per_cycle);
      if (trace_out.empty()) {
        hatchling::gait::write_servo_csv(traj, std::cout);
      } else {
        hatchling::gait::write_servo_csv(traj, trace_out);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

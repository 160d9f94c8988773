#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hdfe {

// One named study with optional parameter overrides. Known names:
//   sample-invariance, refinement-comparison, reconstruction-sweep,
//   isometry, info-loss, high-dim, noise-robustness, regression-shift,
//   vfa-failure
struct ExperimentSpec {
  std::string name;
  std::map<std::string, double> overrides;
  std::vector<std::uint64_t> seeds;  // nonempty
};

struct Criterion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // ">=", "<=", ...
  bool pass = false;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, double> metrics;
  std::map<std::string, Eigen::MatrixXd> tables;
  std::vector<Series> series;
  std::vector<Criterion> criteria;
  bool pass = false;
  double runtime_seconds = 0.0;
};

// Default seed list for an experiment (its criteria are stated over a
// fixed seed count).
std::vector<std::uint64_t> default_seeds(const std::string& name);

ExperimentReport run_experiment(const ExperimentSpec& spec);

// Writes one CSV per series and a minimal SVG per figure analog into
// `dir/series` and `dir/figures`. Returns the created paths.
std::vector<std::filesystem::path> emit_plots(const ExperimentReport& report,
                                              const std::filesystem::path& dir);

void write_report_json(const ExperimentReport& report,
                       const std::filesystem::path& path);

// Runs the experiment, writes per-seed artifacts plus the aggregated
// report and summary.json under out_dir. Returns the report.
ExperimentReport run_and_emit(const ExperimentSpec& spec,
                              const std::filesystem::path& out_dir);

}  // namespace hdfe

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgse/qpe.hpp"

namespace qgse {

/// One experiment point: problem, algorithm knobs, output destinations.
/// Serialization round-trips bit-exactly (sorted keys, shortest-round-trip
/// number formatting).
struct ExperimentConfig {
  int schema = 1;
  std::uint64_t seed = 1;

  // problem
  int d = 1;
  int q = 3;
  std::string family = "zero";
  std::map<std::string, double> params;

  // algorithm
  int b = 0;  // 0 = q
  std::string mode = "exact";  // exact | splitting
  int k = 0;                   // 0 = auto k*
  std::string step_policy = "calibrated";  // calibrated | empirical | analytic
  int query_bits = 0;

  // outputs
  std::string report_path = "report.json";
  std::string summary_csv = "summary.csv";
  int top_k = 8;

  QpeConfig to_qpe_config() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const ExperimentConfig& cfg);

/// Seeded sample from an exact outcome distribution (demonstration output
/// only; all verification uses the exact distribution).
std::vector<std::int64_t> sample_outcomes(const OutcomeDistribution& dist, int n,
                                          std::uint64_t seed);

struct RunArtifacts {
  nlohmann::json report;
  std::string summary_row;
  bool criteria_pass = false;
};

/// Runs one experiment, writes the JSON report and appends a CSV summary row.
/// Report bytes are deterministic for a fixed config + seed apart from the
/// timestamp field, which is excluded from the report hash.
RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Sweep: run one point per (d, q, b) triple with shared algorithm settings.
struct SweepPoint {
  int d = 1;
  int q = 3;
  int b = 0;
};
std::vector<RunArtifacts> run_sweep(const ExperimentConfig& base,
                                    const std::vector<SweepPoint>& points,
                                    const std::optional<std::filesystem::path>& out_dir);

nlohmann::json sweep_points_json(const nlohmann::json& sweep_config);

/// The acceptance-suite instances: every built-in family (seeded) on two
/// grids per dimension, all with m^d <= 1024 so both oracle and splitting
/// verification stay dense.
struct SuiteInstance {
  int d = 1;
  int q = 3;
  std::string family;
  std::map<std::string, double> params;
  std::string label() const;
};
std::vector<SuiteInstance> acceptance_suite();

/// Writes the derived oracle fixtures for a named suite into out_dir.
/// Suites: "overlap", "order", "spectral", "scaling", "cost", "all".
std::vector<std::filesystem::path> make_fixtures(const std::string& suite,
                                                 const std::filesystem::path& out_dir);

std::string csv_summary_header();

}  // namespace qgse

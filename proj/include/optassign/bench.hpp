#pragma once

// Seeded instance generation, the benchmark protocol (run each mechanism over
// each seed, time the mechanism call only, aggregate means), and report
// emission as CSV / JSON / SVG.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "optassign/model.hpp"
#include "optassign/weights.hpp"

namespace optassign {

enum class TieMode { strict, tied };

struct ExperimentConfig {
  std::size_t n_students = 0;
  std::size_t n_schools = 0;
  /// Explicit per-school capacities; empty means an equal split of
  /// n_students over n_schools (which must divide evenly).
  std::vector<int> capacities;
  std::vector<std::uint64_t> seeds;
  TieMode tie_mode = TieMode::strict;
  int tie_max = 3;  // largest tie-group size in tied mode
  std::vector<std::string> mechanisms = {"student-optimal", "serial-dictatorship",
                                         "boston-rounds"};
  WeightKind weight_fn = WeightKind::exp_minus_one;

  static ExperimentConfig from_json(const nlohmann::json& doc);  // CONFIG_INVALID
  nlohmann::ordered_json to_json() const;
};

/// Throws CONFIG_INVALID when sizes, capacities, seeds, tie settings or
/// mechanism names are unusable.
void validate_config(const ExperimentConfig& config);

/// Resolved per-school capacities (the equal split when none are given).
std::vector<int> config_capacities(const ExperimentConfig& config);

/// Deterministic random instance for (config, seed). Strict mode gives every
/// student an independent uniform permutation of all schools; tied mode
/// partitions that permutation into groups with sizes drawn uniformly from
/// [1, tie_max]. Ids are zero-padded ("s0007", "h03") so lexicographic order
/// equals numeric order.
Instance generate_instance(const ExperimentConfig& config, std::uint64_t seed);

/// Runs `mechanism` ("student-optimal" runs the assignment pipeline; the
/// baselines draw a lottery from the seed, break ties and assign greedily).
Matching run_mechanism(const std::string& mechanism, const Instance& instance,
                       WeightKind weight_fn, std::uint64_t seed);

struct RunResult {
  std::string mechanism;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> counts;  // students per rank, index k-1 = rank k
  double duration_ms = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RunResult> runs;  // ordered by (mechanism config order, seed order)
};

struct Aggregate {
  std::string mechanism;
  std::vector<double> mean_counts;  // padded to the longest profile
  double mean_duration_ms = 0.0;
};

std::vector<Aggregate> aggregate(const RunReport& report);

/// Runs every (mechanism, seed) pair. Instances are generated up front, one
/// per seed, so results do not depend on scheduling; runs execute on up to
/// OPTASSIGN_THREADS workers (0 or unset = hardware concurrency). Checks
/// capacities on every output and aborts if any baseline profile
/// lexicographically exceeds the student-optimal profile on the same seed.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes report.csv / report.json / report.svg (per `formats`, each of
/// "csv", "json", "svg") into out_dir. Bytes depend only on the report.
void emit_report(const RunReport& report, const std::vector<std::string>& formats,
                 const std::filesystem::path& out_dir);

std::string report_csv(const RunReport& report);
std::string report_json(const RunReport& report);
std::string report_svg(const RunReport& report);

}  // namespace optassign

#pragma once

#include "sscomp/metrics.hpp"
#include "sscomp/spectral.hpp"
#include "sscomp/theory.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sscomp {

enum class Algorithm { kSscOmp, kLsr };

std::string_view algorithm_name(Algorithm algorithm);
/// "ssc-omp" or "lsr"; anything else is a ContractViolation.
Algorithm parse_algorithm(std::string_view name);

struct AlgorithmParams {
  Algorithm algorithm = Algorithm::kSscOmp;
  Index k_max = 6;
  double epsilon = 1e-3;
  double lambda = 60.0;
};

/// How conditions mode draws its subspaces.
enum class ArrangementKind { kRandom, kIndependent, kIdentical };

std::string_view arrangement_name(ArrangementKind kind);
ArrangementKind parse_arrangement(std::string_view name);

struct ExperimentConfig {
  int n_subspaces = 5;
  Index dim = 6;
  Index ambient_dim = 9;
  std::vector<double> densities{5, 10, 20, 50};
  int trials = 20;
  std::uint64_t seed = 1;
  /// Run only this trial index of every density (for reruns).
  std::optional<int> only_trial;

  AlgorithmParams algorithm;
  PreservationOptions preservation;
  SpectralOptions spectral;
  ArrangementKind arrangement = ArrangementKind::kRandom;

  /// Trials in flight at once. 0 reads SSCOMP_WORKERS, falling back to 1.
  int workers = 0;
  /// Off writes NA in the timing columns so repeated runs are byte-identical.
  bool record_timing = true;
};

/// Throws ContractViolation on trials < 1, an empty or non-positive density
/// list, or non-positive dimensions.
void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);

/// Seed of one trial: derive_seed(derive_seed(master, bits(rho)), trial).
/// Depends only on its arguments, never on the rest of the density list.
std::uint64_t trial_seed(std::uint64_t master, double density, int trial);

/// SSCOMP_WORKERS if `requested` is 0, clamped to at least 1.
int resolve_workers(int requested);

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct ResultRecord {
  double density = 0.0;
  int trial = 0;
  Index n_points = 0;
  MetricReport metrics;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kSscOmp;
  /// Set when the trial threw; the metrics are then empty.
  std::optional<std::string> error;
};

struct DensitySummary {
  double density = 0.0;
  Index n_points = 0;
  int completed = 0;
  int failed = 0;
  MetricReport mean;
};

struct SweepResult {
  std::vector<ResultRecord> records;  // ordered by (density, trial)
  std::vector<DensitySummary> means;  // one per density, in config order
};

/// Generate, self-express, cluster and score one trial. Never throws; a
/// failure is returned in `error`.
ResultRecord run_trial(const ExperimentConfig& config, double density, int trial, int threads = 0);

SweepResult run_sweep(const ExperimentConfig& config);

/// Columns: rho,trial,N,p,e,c,a,t_build,t_cluster,seed,algorithm,status.
/// Mean rows follow with trial = "mean". The first line is "# config: {json}".
inline constexpr std::string_view kSweepHeader =
    "rho,trial,N,p,e,c,a,t_build,t_cluster,seed,algorithm,status";
void write_sweep_csv(std::ostream& out, const SweepResult& result, const ExperimentConfig& config);
nlohmann::json sweep_summary_json(const SweepResult& result, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterRequest {
  Eigen::MatrixXd points;  // one point per column, normalized on entry
  std::optional<std::vector<int>> labels;
  /// Defaults to the number of distinct truth labels.
  std::optional<int> n_clusters;
  AlgorithmParams algorithm;
  PreservationOptions preservation;
  SpectralOptions spectral;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct ClusterOutcome {
  std::vector<int> labels;
  int n_clusters = 0;
  /// accuracy, p and e stay empty without truth labels.
  MetricReport report;
};

ClusterOutcome run_cluster(const ClusterRequest& request);
nlohmann::json to_json(const MetricReport& report);

// ---------------------------------------------------------------------------
// conditions
// ---------------------------------------------------------------------------

struct ConditionRow {
  double density = 0.0;
  int instance = 0;
  std::uint64_t seed = 0;
  Index n_points = 0;
  bool residual = false;
  bool coherence = false;
  bool angle = false;
  double residual_margin = 0.0;  // worst subspace
  double coherence_margin = 0.0;
  double angle_margin = 0.0;
  bool inradius_exact = true;
  double p_percent = 0.0;  // SSC-OMP with epsilon = 0 and k_max = N - 1
  Index max_iterations = 0;
  /// Per subspace: a residual-coherence pass without a subspace-preserving
  /// result, a data-coherence pass without a residual-coherence pass, or a
  /// residual-coherence pass with some OMP trace longer than d_i.
  int implication_violations = 0;
  /// Subspaces where the angle condition holds but the residual-coherence
  /// condition does not. Informational; see README.
  int angle_without_residual = 0;
};

struct ConditionTable {
  std::vector<ConditionRow> rows;
  int implication_violations = 0;
  std::vector<RandomModelReport> random_model;  // one per density
};

ConditionRow run_condition_instance(const ExperimentConfig& config, double density, int instance);
ConditionTable run_conditions(const ExperimentConfig& config);

inline constexpr std::string_view kConditionHeader =
    "rho,instance,N,seed,residual_cond,coherence_cond,angle_cond,residual_margin,coherence_margin,angle_margin,inradius_exact,p,"
    "max_iterations,implication_violations,angle_without_residual";
void write_conditions_csv(std::ostream& out, const ConditionTable& table, const ExperimentConfig& config);
nlohmann::json conditions_summary_json(const ConditionTable& table, const ExperimentConfig& config);

}  // namespace sscomp

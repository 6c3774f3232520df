#include "sscomp/experiment.hpp"

#include "sscomp/dataset.hpp"
#include "sscomp/errors.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/self_expressive.hpp"
#include "sscomp/synth.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace sscomp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Child stream indices under a trial seed.
enum Stream : std::uint64_t { kArrangementStream = 0, kSampleStream = 1, kClusterStream = 2, kInradiusStream = 3 };

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : "NA"; }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

CoefficientMatrix self_express(const Dataset& data, const AlgorithmParams& params, int threads) {
  if (params.algorithm == Algorithm::kLsr) return lsr_coefficients(data, params.lambda);
  return build_coefficient_matrix(data, {.k_max = params.k_max, .epsilon = params.epsilon, .threads = threads});
}

int distinct_count(const std::vector<int>& labels) {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  return algorithm == Algorithm::kLsr ? "lsr" : "ssc-omp";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ssc-omp") return Algorithm::kSscOmp;
  if (name == "lsr") return Algorithm::kLsr;
  throw ContractViolation("unknown algorithm '" + std::string(name) + "' (expected ssc-omp or lsr)");
}

std::string_view arrangement_name(ArrangementKind kind) {
  switch (kind) {
    case ArrangementKind::kIndependent: return "independent";
    case ArrangementKind::kIdentical: return "identical";
    default: return "random";
  }
}

ArrangementKind parse_arrangement(std::string_view name) {
  if (name == "random") return ArrangementKind::kRandom;
  if (name == "independent") return ArrangementKind::kIndependent;
  if (name == "identical") return ArrangementKind::kIdentical;
  throw ContractViolation("unknown arrangement '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& config) {
  require(config.trials >= 1, "trials must be at least 1");
  require(!config.densities.empty(), "density list must not be empty");
  for (double rho : config.densities) require(rho > 0.0, "densities must be positive");
  require(config.n_subspaces >= 1, "need at least one subspace");
  require(config.dim >= 1 && config.dim <= config.ambient_dim, "need 1 <= d <= D");
  require(config.algorithm.k_max >= 1, "k_max must be at least 1");
  require(config.algorithm.epsilon >= 0.0, "epsilon must be nonnegative");
  require(config.algorithm.lambda > 0.0, "lambda must be positive");
  if (config.only_trial)
    require(*config.only_trial >= 0 && *config.only_trial < config.trials, "trial index out of range");
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["n"] = config.n_subspaces;
  j["d"] = config.dim;
  j["D"] = config.ambient_dim;
  j["rho"] = config.densities;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["trial"] = config.only_trial ? nlohmann::json(*config.only_trial) : nlohmann::json(nullptr);
  j["algorithm"] = algorithm_name(config.algorithm.algorithm);
  j["k_max"] = config.algorithm.k_max;
  j["epsilon"] = config.algorithm.epsilon;
  j["lambda"] = config.algorithm.lambda;
  j["threshold"] = config.preservation.threshold;
  j["threshold_mode"] = config.preservation.mode == ThresholdMode::kRelative ? "relative" : "absolute";
  j["dense_limit"] = config.spectral.dense_limit;
  j["kmeans_restarts"] = config.spectral.kmeans_restarts;
  j["arrangement"] = arrangement_name(config.arrangement);
  j["timing"] = config.record_timing;
  j["rng"] = kRngName;
  return j;
}

std::uint64_t trial_seed(std::uint64_t master, double density, int trial) {
  return derive_seed(derive_seed(master, std::bit_cast<std::uint64_t>(density)), static_cast<std::uint64_t>(trial));
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SSCOMP_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

ResultRecord run_trial(const ExperimentConfig& config, double density, int trial, int threads) {
  ResultRecord rec;
  rec.density = density;
  rec.trial = trial;
  rec.seed = trial_seed(config.seed, density, trial);
  rec.algorithm = config.algorithm.algorithm;
  try {
    const SynthConfig synth{.n_subspaces = config.n_subspaces, .dim = config.dim, .ambient_dim = config.ambient_dim,
                            .density = density, .seed = derive_seed(rec.seed, kArrangementStream)};
    const SubspaceArrangement arrangement = random_arrangement(synth);
    const std::vector<Index> counts(static_cast<std::size_t>(config.n_subspaces),
                                    points_per_subspace(synth, PointConvention::kExperiment));
    const Dataset data = sample_dataset(arrangement, counts, derive_seed(rec.seed, kSampleStream));
    rec.n_points = data.size();
    const std::vector<int>& truth = *data.labels;

    auto start = Clock::now();
    const CoefficientMatrix c = self_express(data, config.algorithm, threads);
    const AffinityGraph w = affinity(c);
    rec.metrics.t_build_seconds = seconds_since(start);

    start = Clock::now();
    const ClusteringResult clusters =
        spectral_clustering(w, config.n_subspaces, derive_seed(rec.seed, kClusterStream), config.spectral);
    rec.metrics.t_cluster_seconds = seconds_since(start);

    rec.metrics.p_percent = subspace_preserving_percentage(c, truth, config.preservation);
    rec.metrics.e_percent = subspace_preserving_error(c, truth, config.preservation);
    rec.metrics.connectivity = connectivity(w, truth, true, config.spectral);
    rec.metrics.accuracy_percent = clustering_accuracy(clusters.labels, truth);
  } catch (const std::exception& e) {
    rec.metrics = MetricReport{};
    rec.error = e.what();
  }
  return rec;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  validate(config);
  struct Job {
    double density;
    int trial;
  };
  std::vector<Job> jobs;
  for (double rho : config.densities)
    for (int t = 0; t < config.trials; ++t)
      if (!config.only_trial || *config.only_trial == t) jobs.push_back({rho, t});

  const int workers = resolve_workers(config.workers);
  SweepResult result;
  result.records.resize(jobs.size());
  // Each slot is written by exactly one iteration, so rows come out in
  // (density, trial) order whatever the completion order.
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::size_t k = 0; k < jobs.size(); ++k)
    result.records[k] = run_trial(config, jobs[k].density, jobs[k].trial, workers > 1 ? 1 : 0);

  for (double rho : config.densities) {
    DensitySummary s;
    s.density = rho;
    double p = 0, e = 0, c = 0, a = 0, tb = 0, tc = 0;
    for (const ResultRecord& r : result.records) {
      if (r.density != rho) continue;
      if (r.error) {
        ++s.failed;
        continue;
      }
      ++s.completed;
      s.n_points = r.n_points;
      p += *r.metrics.p_percent;
      e += *r.metrics.e_percent;
      c += *r.metrics.connectivity;
      a += *r.metrics.accuracy_percent;
      tb += r.metrics.t_build_seconds;
      tc += r.metrics.t_cluster_seconds;
    }
    if (s.completed > 0) {
      const double n = s.completed;
      s.mean.p_percent = p / n;
      s.mean.e_percent = e / n;
      s.mean.connectivity = c / n;
      s.mean.accuracy_percent = a / n;
      s.mean.t_build_seconds = tb / n;
      s.mean.t_cluster_seconds = tc / n;
    }
    result.means.push_back(s);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const ExperimentConfig& config) {
  const bool timing = config.record_timing;
  out << "# config: " << to_json(config).dump() << '\n' << kSweepHeader << '\n';
  const std::string algo(algorithm_name(config.algorithm.algorithm));
  for (const ResultRecord& r : result.records) {
    const MetricReport& m = r.metrics;
    const bool ok = !r.error;
    out << number(r.density) << ',' << r.trial << ',' << r.n_points << ',' << number(m.p_percent) << ','
        << number(m.e_percent) << ',' << number(m.connectivity) << ',' << number(m.accuracy_percent) << ','
        << (timing && ok ? number(m.t_build_seconds) : "NA") << ','
        << (timing && ok ? number(m.t_cluster_seconds) : "NA") << ',' << r.seed << ',' << algo << ','
        << (ok ? "ok" : "failed") << '\n';
  }
  for (const DensitySummary& s : result.means) {
    const MetricReport& m = s.mean;
    const bool ok = s.completed > 0;
    out << number(s.density) << ",mean," << s.n_points << ',' << number(m.p_percent) << ',' << number(m.e_percent)
        << ',' << number(m.connectivity) << ',' << number(m.accuracy_percent) << ','
        << (timing && ok ? number(m.t_build_seconds) : "NA") << ','
        << (timing && ok ? number(m.t_cluster_seconds) : "NA") << ",," << algo << ','
        << (s.failed == 0 ? "ok" : std::to_string(s.failed) + " failed") << '\n';
  }
}

nlohmann::json to_json(const MetricReport& report) {
  return {{"p", optional_json(report.p_percent)},
          {"e", optional_json(report.e_percent)},
          {"c", optional_json(report.connectivity)},
          {"a", optional_json(report.accuracy_percent)},
          {"t_build", report.t_build_seconds},
          {"t_cluster", report.t_cluster_seconds}};
}

nlohmann::json sweep_summary_json(const SweepResult& result, const ExperimentConfig& config) {
  nlohmann::json j;
  j["config"] = to_json(config);
  j["means"] = nlohmann::json::array();
  for (const DensitySummary& s : result.means) {
    nlohmann::json m = to_json(s.mean);
    if (!config.record_timing) m["t_build"] = m["t_cluster"] = nullptr;
    m["rho"] = s.density;
    m["N"] = s.n_points;
    m["completed"] = s.completed;
    m["failed"] = s.failed;
    j["means"].push_back(std::move(m));
  }
  j["failures"] = nlohmann::json::array();
  for (const ResultRecord& r : result.records)
    if (r.error) j["failures"].push_back({{"rho", r.density}, {"trial", r.trial}, {"error", *r.error}});
  return j;
}

ClusterOutcome run_cluster(const ClusterRequest& request) {
  const Dataset data = make_dataset(request.points, request.labels);
  int k = 0;
  if (request.n_clusters) k = *request.n_clusters;
  else if (request.labels) k = distinct_count(*request.labels);
  require(k >= 1, "number of clusters unknown: pass it explicitly or supply truth labels");
  require(k <= data.size(), "more clusters than points");

  ClusterOutcome out;
  out.n_clusters = k;
  auto start = Clock::now();
  const CoefficientMatrix c = self_express(data, request.algorithm, request.threads);
  const AffinityGraph w = affinity(c);
  out.report.t_build_seconds = seconds_since(start);

  start = Clock::now();
  const ClusteringResult clusters = spectral_clustering(w, k, request.seed, request.spectral);
  out.report.t_cluster_seconds = seconds_since(start);
  out.labels = clusters.labels;

  if (request.labels) {
    const std::vector<int>& truth = *request.labels;
    out.report.p_percent = subspace_preserving_percentage(c, truth, request.preservation);
    out.report.e_percent = subspace_preserving_error(c, truth, request.preservation);
    out.report.connectivity = connectivity(w, truth, true, request.spectral);
    out.report.accuracy_percent = clustering_accuracy(clusters.labels, truth);
  }
  return out;
}

ConditionRow run_condition_instance(const ExperimentConfig& config, double density, int instance) {
  ConditionRow row;
  row.density = density;
  row.instance = instance;
  row.seed = trial_seed(config.seed, density, instance);

  const SynthConfig synth{.n_subspaces = config.n_subspaces, .dim = config.dim, .ambient_dim = config.ambient_dim,
                          .density = density, .seed = derive_seed(row.seed, kArrangementStream)};
  SubspaceArrangement arrangement;
  switch (config.arrangement) {
    case ArrangementKind::kIndependent: {
      const std::vector<Index> dims(static_cast<std::size_t>(config.n_subspaces), config.dim);
      arrangement = independent_arrangement(dims, config.ambient_dim, synth.seed);
      break;
    }
    case ArrangementKind::kIdentical: {
      SynthConfig one = synth;
      one.n_subspaces = 1;
      arrangement = random_arrangement(one);
      arrangement.bases.assign(static_cast<std::size_t>(config.n_subspaces), arrangement.bases.front());
      arrangement.independent = config.n_subspaces == 1;
      break;
    }
    default:
      arrangement = random_arrangement(synth);
  }
  const std::vector<Index> counts(static_cast<std::size_t>(config.n_subspaces),
                                  points_per_subspace(synth, PointConvention::kExperiment));
  const Dataset data = sample_dataset(arrangement, counts, derive_seed(row.seed, kSampleStream));
  row.n_points = data.size();
  const std::vector<int>& truth = *data.labels;

  const ConditionReport report =
      check_all_conditions(data, arrangement, {.seed = derive_seed(row.seed, kInradiusStream)});
  row.inradius_exact = report.inradius_exact;
  row.residual = report.residual.value_or(false);
  row.coherence = report.coherence.value_or(false);
  row.angle = report.angle.value_or(false);
  row.residual_margin = row.coherence_margin = row.angle_margin = std::numeric_limits<double>::infinity();
  for (const SubspaceCondition& s : report.subspaces) {
    row.residual_margin = std::min(row.residual_margin, s.residual_margin.value_or(-1.0));
    row.coherence_margin = std::min(row.coherence_margin, s.coherence_margin.value_or(-1.0));
    row.angle_margin = std::min(row.angle_margin, s.angle_margin.value_or(-1.0));
  }

  // Exact self-expression: residual driven to zero, no sparsity cap below D.
  const CoefficientMatrix c = build_coefficient_matrix(
      data, {.k_max = std::max<Index>(1, data.size() - 1), .epsilon = 0.0, .threads = 0});
  row.p_percent = subspace_preserving_percentage(c, truth, config.preservation);
  row.max_iterations = c.iterations.empty() ? 0 : *std::max_element(c.iterations.begin(), c.iterations.end());

  std::vector<char> preserving(static_cast<std::size_t>(data.size()), 1);
  const double threshold = config.preservation.threshold;
  for (Index j = 0; j < data.size(); ++j) {
    double scale = 1.0;
    if (config.preservation.mode == ThresholdMode::kRelative) {
      scale = 0.0;
      c.for_each_in_column(j, [&](Index, double v) { scale = std::max(scale, std::abs(v)); });
    }
    c.for_each_in_column(j, [&](Index i, double v) {
      if (std::abs(v) > threshold * scale && truth[static_cast<std::size_t>(i)] != truth[static_cast<std::size_t>(j)])
        preserving[static_cast<std::size_t>(j)] = 0;
    });
  }

  for (const SubspaceCondition& s : report.subspaces) {
    const bool res = passes(s.residual_margin);
    const bool coh = passes(s.coherence_margin);
    const bool ang = passes(s.angle_margin);
    if (coh && !res) ++row.implication_violations;
    if (ang && !res) ++row.angle_without_residual;
    if (!res) continue;
    for (Index j : data.members(s.subspace)) {
      if (!preserving[static_cast<std::size_t>(j)]) ++row.implication_violations;
      if (c.iterations[static_cast<std::size_t>(j)] > s.dim) ++row.implication_violations;
    }
  }
  return row;
}

ConditionTable run_conditions(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::pair<double, int>> jobs;
  for (double rho : config.densities)
    for (int t = 0; t < config.trials; ++t)
      if (!config.only_trial || *config.only_trial == t) jobs.emplace_back(rho, t);

  const int workers = resolve_workers(config.workers);
  ConditionTable table;
  table.rows.resize(jobs.size());
  std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    try {
      table.rows[k] = run_condition_instance(config, jobs[k].first, jobs[k].second);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw NumericError("condition instance failed: " + e);

  for (const ConditionRow& r : table.rows) table.implication_violations += r.implication_violations;
  for (double rho : config.densities)
    table.random_model.push_back(check_random_model(static_cast<double>(config.dim),
                                                    static_cast<double>(config.ambient_dim), config.n_subspaces, rho));
  return table;
}

void write_conditions_csv(std::ostream& out, const ConditionTable& table, const ExperimentConfig& config) {
  out << "# config: " << to_json(config).dump() << '\n' << kConditionHeader << '\n';
  for (const ConditionRow& r : table.rows) {
    out << number(r.density) << ',' << r.instance << ',' << r.n_points << ',' << r.seed << ',' << int(r.residual)
        << ',' << int(r.coherence) << ',' << int(r.angle) << ',' << number(r.residual_margin) << ','
        << number(r.coherence_margin) << ',' << number(r.angle_margin) << ',' << int(r.inradius_exact) << ','
        << number(r.p_percent) << ',' << r.max_iterations << ',' << r.implication_violations << ','
        << r.angle_without_residual << '\n';
  }
}

nlohmann::json conditions_summary_json(const ConditionTable& table, const ExperimentConfig& config) {
  nlohmann::json j;
  j["config"] = to_json(config);
  j["instances"] = table.rows.size();
  j["implication_violations"] = table.implication_violations;
  int res = 0, coh = 0, ang = 0, angle_only = 0;
  for (const ConditionRow& r : table.rows) {
    res += r.residual;
    coh += r.coherence;
    ang += r.angle;
    angle_only += r.angle_without_residual;
  }
  j["residual_condition_passes"] = res;
  j["coherence_condition_passes"] = coh;
  j["angle_condition_passes"] = ang;
  j["angle_without_residual"] = angle_only;
  j["random_model"] = nlohmann::json::array();
  for (std::size_t k = 0; k < table.random_model.size(); ++k) {
    const RandomModelReport& m = table.random_model[k];
    j["random_model"].push_back({{"rho", config.densities[k]},
                                 {"N", m.total_points},
                                 {"dimension_bound", m.dimension_bound},
                                 {"holds", m.holds},
                                 {"probability_bound", m.probability_bound}});
  }
  return j;
}

}  // namespace sscomp

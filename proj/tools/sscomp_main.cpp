// sscomp: synthetic sweeps, clustering of feature matrices, and condition
// reports for sparse subspace clustering by orthogonal matching pursuit.

#include "sscomp/errors.hpp"
#include "sscomp/experiment.hpp"
#include "sscomp/matrix_io.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace sscomp;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kParse = 4, kContract = 5, kNumeric = 6 };

struct Options {
  ExperimentConfig config;
  std::string algorithm = "ssc-omp";
  std::string arrangement = "random";
  bool relative_threshold = false;
  bool no_timing = false;
  int trial = -1;
  std::string output;
  std::string summary;

  // cluster
  std::string input;
  std::string labels;
  std::string labels_out;
  int clusters = 0;

  // generate
  std::vector<Index> dims;
  double rho = 5.0;
  std::string points_out;
};

void add_synth_flags(CLI::App* cmd, Options& o, bool density_list) {
  cmd->add_option("--subspaces,-n", o.config.n_subspaces, "number of subspaces")->capture_default_str();
  cmd->add_option("--dim,-d", o.config.dim, "subspace dimension")->capture_default_str();
  cmd->add_option("--ambient,-D", o.config.ambient_dim, "ambient dimension")->capture_default_str();
  if (density_list) {
    cmd->add_option("--rho", o.config.densities, "points per subspace dimension (list)")->capture_default_str();
    cmd->add_option("--trials", o.config.trials, "trials per density")->capture_default_str();
    cmd->add_option("--trial", o.trial, "run only this trial index");
  }
  cmd->add_option("--seed", o.config.seed, "master seed")->capture_default_str();
}

void add_algorithm_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--algorithm", o.algorithm, "ssc-omp or lsr")->capture_default_str();
  cmd->add_option("--k-max", o.config.algorithm.k_max, "OMP iteration cap")->capture_default_str();
  cmd->add_option("--epsilon", o.config.algorithm.epsilon, "OMP residual tolerance")->capture_default_str();
  cmd->add_option("--lambda", o.config.algorithm.lambda, "LSR ridge weight")->capture_default_str();
  cmd->add_option("--threshold", o.config.preservation.threshold, "zero threshold for p/e")->capture_default_str();
  cmd->add_flag("--relative-threshold", o.relative_threshold, "threshold relative to the column max");
  cmd->add_option("--kmeans-restarts", o.config.spectral.kmeans_restarts)->capture_default_str();
  cmd->add_option("--dense-limit", o.config.spectral.dense_limit, "largest N solved by a dense eigensolver")
      ->capture_default_str();
}

void finish(Options& o) {
  o.config.algorithm.algorithm = parse_algorithm(o.algorithm);
  o.config.arrangement = parse_arrangement(o.arrangement);
  o.config.preservation.mode = o.relative_threshold ? ThresholdMode::kRelative : ThresholdMode::kAbsolute;
  o.config.record_timing = !o.no_timing;
  if (o.trial >= 0) o.config.only_trial = o.trial;
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw IoError("cannot open " + path + " for writing");
  return *holder;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

int run_sweep_cmd(Options& o) {
  finish(o);
  const SweepResult result = run_sweep(o.config);
  std::unique_ptr<std::ofstream> holder;
  write_sweep_csv(open_output(o.output, holder), result, o.config);
  write_json(o.summary, sweep_summary_json(result, o.config));
  return kOk;
}

int run_conditions_cmd(Options& o) {
  finish(o);
  const ConditionTable table = run_conditions(o.config);
  std::unique_ptr<std::ofstream> holder;
  write_conditions_csv(open_output(o.output, holder), table, o.config);
  write_json(o.summary, conditions_summary_json(table, o.config));
  std::cerr << "implication violations: " << table.implication_violations << '\n';
  return table.implication_violations == 0 ? kOk : kFailure;
}

int run_cluster_cmd(Options& o) {
  finish(o);
  ClusterRequest request;
  request.points = read_matrix(o.input);
  if (!o.labels.empty()) request.labels = read_labels(o.labels);
  if (o.clusters > 0) request.n_clusters = o.clusters;
  request.algorithm = o.config.algorithm;
  request.preservation = o.config.preservation;
  request.spectral = o.config.spectral;
  request.seed = o.config.seed;
  request.threads = o.config.workers;

  const ClusterOutcome outcome = run_cluster(request);
  if (!o.labels_out.empty()) write_labels(o.labels_out, outcome.labels);
  nlohmann::json report = to_json(outcome.report);
  if (!o.config.record_timing) report["t_build"] = report["t_cluster"] = nullptr;
  report["clusters"] = outcome.n_clusters;
  report["N"] = request.points.cols();
  report["config"] = to_json(o.config);
  report["config"]["input"] = o.input;
  if (o.summary.empty()) std::cout << report.dump(2) << '\n';
  else write_json(o.summary, report);
  return kOk;
}

int run_generate_cmd(Options& o) {
  finish(o);
  SubspaceArrangement arrangement;
  std::vector<Index> counts;
  const SynthConfig synth{.n_subspaces = o.config.n_subspaces, .dim = o.config.dim,
                          .ambient_dim = o.config.ambient_dim, .density = o.rho, .seed = o.config.seed};
  if (o.config.arrangement == ArrangementKind::kIndependent) {
    if (o.dims.empty()) o.dims.assign(static_cast<std::size_t>(o.config.n_subspaces), o.config.dim);
    arrangement = independent_arrangement(o.dims, o.config.ambient_dim, derive_seed(o.config.seed, 0));
    for (Index d : o.dims) counts.push_back(std::max<Index>(1, std::llround(o.rho * static_cast<double>(d))));
  } else {
    require(o.config.arrangement == ArrangementKind::kRandom, "generate supports random or independent");
    arrangement = random_arrangement({synth.n_subspaces, synth.dim, synth.ambient_dim, synth.density,
                                      derive_seed(o.config.seed, 0)});
    counts.assign(static_cast<std::size_t>(o.config.n_subspaces),
                  points_per_subspace(synth, PointConvention::kExperiment));
  }
  const Dataset data = sample_dataset(arrangement, counts, derive_seed(o.config.seed, 1));
  write_matrix(o.points_out, data.points);
  if (!o.labels_out.empty()) write_labels(o.labels_out, *data.labels);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse subspace clustering by orthogonal matching pursuit"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--workers", o.config.workers, "concurrent trials or threads (default: SSCOMP_WORKERS or 1)");
  app.add_flag("--no-timing", o.no_timing, "write NA for timings so output is byte-reproducible");

  CLI::App* sweep = app.add_subcommand("sweep", "synthetic sweep over densities");
  add_synth_flags(sweep, o, true);
  add_algorithm_flags(sweep, o);
  sweep->add_option("--output,-o", o.output, "CSV path (default stdout)");
  sweep->add_option("--summary", o.summary, "JSON summary path");

  CLI::App* cluster = app.add_subcommand("cluster", "cluster a feature matrix");
  cluster->add_option("--input,-i", o.input, "matrix file (.csv or .bin), one point per column")->required();
  cluster->add_option("--labels", o.labels, "truth labels, one integer per line");
  cluster->add_option("--clusters,-k", o.clusters, "number of clusters (default: from truth labels)");
  cluster->add_option("--labels-out", o.labels_out, "where to write estimated labels");
  cluster->add_option("--seed", o.config.seed, "k-means seed")->capture_default_str();
  cluster->add_option("--summary", o.summary, "JSON report path (default stdout)");
  add_algorithm_flags(cluster, o);

  CLI::App* conditions = app.add_subcommand("conditions", "evaluate the sufficient conditions on synthetic data");
  add_synth_flags(conditions, o, true);
  conditions->add_option("--arrangement", o.arrangement, "random, independent or identical")->capture_default_str();
  conditions->add_option("--threshold", o.config.preservation.threshold, "zero threshold for p")->capture_default_str();
  conditions->add_option("--output,-o", o.output, "CSV path (default stdout)");
  conditions->add_option("--summary", o.summary, "JSON summary path");

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic dataset");
  add_synth_flags(generate, o, false);
  generate->add_option("--rho", o.rho, "points per subspace dimension")->capture_default_str();
  generate->add_option("--arrangement", o.arrangement, "random or independent")->capture_default_str();
  generate->add_option("--dims", o.dims, "per-subspace dimensions (independent only)");
  generate->add_option("--output,-o", o.points_out, "matrix path (.csv or .bin)")->required();
  generate->add_option("--labels-out", o.labels_out, "labels path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (sweep->parsed()) return run_sweep_cmd(o);
    if (cluster->parsed()) return run_cluster_cmd(o);
    if (conditions->parsed()) return run_conditions_cmd(o);
    return run_generate_cmd(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kContract;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

#pragma once

#include "sscomp/self_expressive.hpp"
#include "sscomp/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace sscomp {

/// Evaluation quantities of one clustering run. Missing values mean the
/// quantity was unavailable (e.g. no ground truth).
struct MetricReport {
  std::optional<double> p_percent;
  std::optional<double> e_percent;
  std::optional<double> connectivity;
  std::optional<double> accuracy_percent;
  double t_build_seconds = 0.0;
  double t_cluster_seconds = 0.0;

  double runtime_seconds() const { return t_build_seconds + t_cluster_seconds; }
};

enum class ThresholdMode {
  kAbsolute,  // |c_ij| > threshold is nonzero
  kRelative,  // |c_ij| > threshold * max_i |c_ij| is nonzero
};

struct PreservationOptions {
  double threshold = 1e-3;
  ThresholdMode mode = ThresholdMode::kAbsolute;
  /// Compute e% on the thresholded columns (default) or on the raw ones.
  bool thresholded_error = true;
};

/// p%: share of columns whose above-threshold entries all index points with
/// the column's own label.
double subspace_preserving_percentage(const CoefficientMatrix& c, std::span<const int> labels,
                                      const PreservationOptions& options = {});

/// e%: mean share of each column's l1 mass that sits on other labels. A
/// column with no mass contributes 0.
double subspace_preserving_error(const CoefficientMatrix& c, std::span<const int> labels,
                                 const PreservationOptions& options = {});

/// min over ground-truth clusters of the algebraic connectivity of the
/// cluster's induced subgraph. Clusters with fewer than two points are a
/// contract violation unless `skip_singletons` is set.
double connectivity(const AffinityGraph& graph, std::span<const int> labels, bool skip_singletons = false,
                    const SpectralOptions& options = {});

/// Permutation pi maximizing sum_i score(i, pi(i)) for a square matrix
/// (Hungarian algorithm).
std::vector<int> optimal_assignment(const Eigen::MatrixXd& score);

/// Percentage of points labelled correctly under the best matching of
/// estimated to true clusters. Cluster counts may differ.
double clustering_accuracy(std::span<const int> estimated, std::span<const int> truth);

}  // namespace sscomp

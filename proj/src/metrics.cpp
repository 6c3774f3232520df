#include "sscomp/metrics.hpp"

#include "sscomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sscomp {

namespace {

void check_labels(const CoefficientMatrix& c, std::span<const int> labels) {
  require(static_cast<Index>(labels.size()) == c.size(), "need one label per column");
}

double column_threshold(const CoefficientMatrix& c, Index j, const PreservationOptions& options) {
  if (options.mode == ThresholdMode::kAbsolute) return options.threshold;
  double largest = 0.0;
  c.for_each_in_column(j, [&](Index, double v) { largest = std::max(largest, std::abs(v)); });
  return options.threshold * largest;
}

}  // namespace

double subspace_preserving_percentage(const CoefficientMatrix& c, std::span<const int> labels,
                                      const PreservationOptions& options) {
  check_labels(c, labels);
  const Index n = c.size();
  if (n == 0) return 100.0;
  Index preserving = 0;
  for (Index j = 0; j < n; ++j) {
    const double threshold = column_threshold(c, j, options);
    bool ok = true;
    c.for_each_in_column(j, [&](Index i, double v) {
      if (std::abs(v) > threshold && labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)])
        ok = false;
    });
    if (ok) ++preserving;
  }
  return 100.0 * static_cast<double>(preserving) / static_cast<double>(n);
}

double subspace_preserving_error(const CoefficientMatrix& c, std::span<const int> labels,
                                 const PreservationOptions& options) {
  check_labels(c, labels);
  const Index n = c.size();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double threshold = options.thresholded_error ? column_threshold(c, j, options) : 0.0;
    double mass = 0.0;
    double own = 0.0;
    c.for_each_in_column(j, [&](Index i, double v) {
      const double a = std::abs(v);
      if (options.thresholded_error ? a <= threshold : a == 0.0) return;
      mass += a;
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) own += a;
    });
    if (mass > 0.0) total += 1.0 - own / mass;
  }
  return 100.0 * total / static_cast<double>(n);
}

double connectivity(const AffinityGraph& graph, std::span<const int> labels, bool skip_singletons,
                    const SpectralOptions& options) {
  require(static_cast<Index>(labels.size()) == graph.size(), "need one label per vertex");
  if (labels.empty()) return 0.0;
  const int clusters = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(clusters));
  for (std::size_t v = 0; v < labels.size(); ++v) {
    require(labels[v] >= 0, "labels must be nonnegative");
    members[static_cast<std::size_t>(labels[v])].push_back(static_cast<Index>(v));
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < clusters; ++k) {
    const auto& vertices = members[static_cast<std::size_t>(k)];
    if (vertices.empty()) continue;
    if (vertices.size() < 2) {
      if (skip_singletons) continue;
      throw ContractViolation("cluster " + std::to_string(k) + " has a single point");
    }
    lowest = std::min(lowest, algebraic_connectivity(graph.induced(vertices), options));
  }
  require(std::isfinite(lowest), "no cluster with at least two points");
  return std::max(lowest, 0.0);
}

double clustering_accuracy(std::span<const int> estimated, std::span<const int> truth) {
  require(estimated.size() == truth.size(), "label vectors must have equal length");
  if (truth.empty()) return 100.0;
  int size = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    require(estimated[i] >= 0 && truth[i] >= 0, "labels must be nonnegative");
    size = std::max({size, estimated[i] + 1, truth[i] + 1});
  }
  Eigen::MatrixXd contingency = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t i = 0; i < truth.size(); ++i) contingency(estimated[i], truth[i]) += 1.0;
  const std::vector<int> perm = optimal_assignment(contingency);
  double matched = 0.0;
  for (int r = 0; r < size; ++r) matched += contingency(r, perm[static_cast<std::size_t>(r)]);
  return 100.0 * matched / static_cast<double>(truth.size());
}

}  // namespace sscomp

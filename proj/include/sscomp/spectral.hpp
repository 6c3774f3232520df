#pragma once

#include "sscomp/self_expressive.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <vector>

namespace sscomp {

/// Bottom eigenpairs of a normalized Laplacian, eigenvalues ascending,
/// eigenvectors as columns.
struct LaplacianSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

struct SpectralOptions {
  /// Graphs up to this size get a full dense symmetric eigensolve; larger
  /// ones are split into connected components and solved with Lanczos.
  Index dense_limit = 5000;
  int kmeans_restarts = 20;
  int kmeans_max_iterations = 300;
  double kmeans_tolerance = 1e-6;
};

struct ClusteringResult {
  std::vector<int> labels;
  int n_clusters = 0;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  /// Zero-degree vertices. Each spans its own null direction of L.
  Index isolated_vertices = 0;
};

/// L = I - D^{-1/2} W D^{-1/2}. An isolated vertex gets an all-zero row and
/// column, so every connected component, isolated vertices included,
/// contributes one zero eigenvalue.
Eigen::SparseMatrix<double> normalized_laplacian(const AffinityGraph& graph);

/// Connected component id per vertex (ids ordered by smallest member) and the
/// component count.
struct Components {
  std::vector<Index> id;
  Index count = 0;
};
Components connected_components(const AffinityGraph& graph);

/// The `count` smallest eigenpairs of the normalized Laplacian.
LaplacianSpectrum laplacian_spectrum(const AffinityGraph& graph, Index count,
                                     const SpectralOptions& options = {});

/// Second-smallest eigenvalue of the normalized Laplacian.
double algebraic_connectivity(const AffinityGraph& graph, const SpectralOptions& options = {});

/// Ng-Jordan-Weiss normalized spectral clustering: bottom `n_clusters`
/// eigenvectors, rows scaled to unit norm, k-means++ with restarts.
ClusteringResult spectral_clustering(const AffinityGraph& graph, int n_clusters, std::uint64_t seed,
                                     const SpectralOptions& options = {});

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // k x dim
  double inertia = 0.0;
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding; keeps the
/// lowest-inertia of `restarts` runs. Deterministic in (seed, restarts).
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts,
                    int max_iterations, double tolerance);

namespace detail {

/// Largest `count` eigenpairs (ascending) of a symmetric sparse matrix via
/// ARPACK's implicitly restarted Lanczos.
LaplacianSpectrum largest_eigenpairs(const Eigen::SparseMatrix<double>& matrix, Index count);

}  // namespace detail

}  // namespace sscomp

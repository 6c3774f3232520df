#include "sscomp/errors.hpp"
#include "sscomp/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace sscomp {

namespace {

// In the component-wise path, components up to this size are solved densely.
constexpr Index kSmallComponent = 300;
constexpr double kZeroEigenvalue = 1e-10;
constexpr double kZeroRow = 1e-10;

LaplacianSpectrum dense_bottom(const Eigen::SparseMatrix<double>& laplacian, Index count) {
  const Eigen::MatrixXd dense(laplacian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw NumericError("dense symmetric eigensolve failed (size " +
                       std::to_string(laplacian.rows()) + ", nonzeros " +
                       std::to_string(laplacian.nonZeros()) + ")");
  return {solver.eigenvalues().head(count), solver.eigenvectors().leftCols(count)};
}

// Bottom `count` eigenpairs of L via the top eigenpairs of 2I - L.
LaplacianSpectrum lanczos_bottom(const Eigen::SparseMatrix<double>& laplacian, Index count) {
  Eigen::SparseMatrix<double> shifted(laplacian.rows(), laplacian.cols());
  shifted.setIdentity();
  shifted = 2.0 * shifted - laplacian;
  LaplacianSpectrum top = detail::largest_eigenpairs(shifted, count);
  LaplacianSpectrum out;
  out.eigenvalues = (2.0 - top.eigenvalues.reverse().array()).matrix();
  out.eigenvectors = top.eigenvectors.rowwise().reverse();
  return out;
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Index k = 0; k < vectors.cols(); ++k) {
    Index at = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&at);
    if (vectors(at, k) < 0.0) vectors.col(k) *= -1.0;
  }
}

}  // namespace

LaplacianSpectrum laplacian_spectrum(const AffinityGraph& graph, Index count,
                                     const SpectralOptions& options) {
  const Index n = graph.size();
  require(count >= 1 && count <= n, "eigenpair count must lie in [1, N]");
  if (n <= options.dense_limit) {
    LaplacianSpectrum out = dense_bottom(normalized_laplacian(graph), count);
    fix_signs(out.eigenvectors);
    return out;
  }

  const Components components = connected_components(graph);
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(components.count));
  for (Index v = 0; v < n; ++v) members[static_cast<std::size_t>(components.id[static_cast<std::size_t>(v)])].push_back(v);

  // (eigenvalue key, -component size, component, local index)
  using Candidate = std::tuple<double, Index, Index, Index>;
  std::vector<Candidate> candidates;
  std::vector<LaplacianSpectrum> local(static_cast<std::size_t>(components.count));
  for (Index c = 0; c < components.count; ++c) {
    const auto& vertices = members[static_cast<std::size_t>(c)];
    const auto size = static_cast<Index>(vertices.size());
    const Index wanted = std::min(count, size);
    const Eigen::SparseMatrix<double> lap = normalized_laplacian(graph.induced(vertices));
    LaplacianSpectrum& s = local[static_cast<std::size_t>(c)];
    s = (size <= kSmallComponent || wanted >= size) ? dense_bottom(lap, wanted) : lanczos_bottom(lap, wanted);
    for (Index k = 0; k < wanted; ++k) {
      const double value = s.eigenvalues[k] < kZeroEigenvalue ? 0.0 : s.eigenvalues[k];
      candidates.emplace_back(value, -size, c, k);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  LaplacianSpectrum out;
  out.eigenvalues.resize(count);
  out.eigenvectors = Eigen::MatrixXd::Zero(n, count);
  for (Index k = 0; k < count; ++k) {
    const auto [key, neg_size, c, idx] = candidates[static_cast<std::size_t>(k)];
    const LaplacianSpectrum& s = local[static_cast<std::size_t>(c)];
    out.eigenvalues[k] = s.eigenvalues[idx];
    const auto& vertices = members[static_cast<std::size_t>(c)];
    for (std::size_t r = 0; r < vertices.size(); ++r)
      out.eigenvectors(vertices[r], k) = s.eigenvectors(static_cast<Index>(r), idx);
  }
  fix_signs(out.eigenvectors);
  return out;
}

double algebraic_connectivity(const AffinityGraph& graph, const SpectralOptions& options) {
  require(graph.size() >= 2, "algebraic connectivity needs at least two vertices");
  if (graph.size() <= options.dense_limit) {
    const Eigen::SparseMatrix<double> laplacian = normalized_laplacian(graph);
    const Eigen::MatrixXd dense(laplacian);
    // Eigenvalues only: far cheaper than the full decomposition.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericError("dense symmetric eigensolve failed (size " + std::to_string(laplacian.rows()) +
                         ", nonzeros " + std::to_string(laplacian.nonZeros()) + ")");
    return solver.eigenvalues()[1];
  }
  // A disconnected graph has a repeated zero eigenvalue, which Lanczos cannot
  // resolve reliably; the component count decides that case exactly.
  if (connected_components(graph).count > 1) return 0.0;
  return lanczos_bottom(normalized_laplacian(graph), 2).eigenvalues[1];
}

ClusteringResult spectral_clustering(const AffinityGraph& graph, int n_clusters, std::uint64_t seed,
                                     const SpectralOptions& options) {
  const Index n = graph.size();
  require(n_clusters >= 1 && n_clusters <= n, "cluster count must lie in [1, N]");
  const LaplacianSpectrum spectrum = laplacian_spectrum(graph, n_clusters, options);

  Eigen::MatrixXd embedding = spectrum.eigenvectors;
  for (Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > kZeroRow) embedding.row(i) /= norm;
    else embedding.row(i).setZero();
  }

  ClusteringResult out;
  const KMeansResult km = kmeans(embedding, n_clusters, seed, options.kmeans_restarts,
                                 options.kmeans_max_iterations, options.kmeans_tolerance);
  out.labels = km.labels;
  out.n_clusters = n_clusters;
  out.inertia = km.inertia;
  out.seed = seed;
  const auto& w = graph.weights();
  for (Index j = 0; j < n; ++j)
    if (w.col(j).nonZeros() == 0) ++out.isolated_vertices;
  return out;
}

}  // namespace sscomp

#include "sscomp/errors.hpp"
#include "sscomp/metrics.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/self_expressive.hpp"
#include "sscomp/spectral.hpp"

#include <doctest.h>

#include <queue>

using namespace sscomp;

namespace {

AffinityGraph complete_graph(Index n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  return AffinityGraph::from_dense(w);
}

AffinityGraph path_graph(Index n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  return AffinityGraph::from_dense(w);
}

Eigen::MatrixXd random_graph(Index n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < p) w(i, j) = w(j, i) = 0.1 + rng.uniform();
  return w;
}

// Breadth-first search on the support of W.
Index count_components(const Eigen::MatrixXd& w) {
  const Index n = w.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Index count = 0;
  for (Index s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    ++count;
    std::queue<Index> queue;
    queue.push(s);
    seen[static_cast<std::size_t>(s)] = 1;
    while (!queue.empty()) {
      const Index v = queue.front();
      queue.pop();
      for (Index u = 0; u < n; ++u)
        if (w(v, u) != 0.0 && !seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          queue.push(u);
        }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("two-vertex Laplacian") {
  Eigen::MatrixXd w(2, 2);
  w << 0, 1, 1, 0;
  const AffinityGraph g = AffinityGraph::from_dense(w);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(Eigen::MatrixXd(normalized_laplacian(g)).isApprox(expected, 1e-15));
  const LaplacianSpectrum s = laplacian_spectrum(g, 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("complete and path graphs on three vertices") {
  const LaplacianSpectrum k3 = laplacian_spectrum(complete_graph(3), 3);
  CHECK(std::abs(k3.eigenvalues[0]) <= 1e-12);
  CHECK(k3.eigenvalues[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(k3.eigenvalues[2] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(algebraic_connectivity(complete_graph(3)) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(algebraic_connectivity(path_graph(3)) == doctest::Approx(1.0).epsilon(1e-12));
  // K_n has lambda_2 = n / (n - 1).
  CHECK(algebraic_connectivity(complete_graph(7)) == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("isolated vertices get an empty row") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 2.0;
  const Eigen::MatrixXd l(normalized_laplacian(AffinityGraph::from_dense(w)));
  CHECK(l(0, 0) == 1.0);
  CHECK(l.row(2).isZero(0.0));
  CHECK(l.col(2).isZero(0.0));
  CHECK(algebraic_connectivity(AffinityGraph::from_dense(w)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectrum range and the zero eigenvalue") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Index n = 5 + static_cast<Index>(seed % 25);
    const Eigen::MatrixXd w = random_graph(n, 0.3, seed);
    const LaplacianSpectrum s = laplacian_spectrum(AffinityGraph::from_dense(w), n);
    CHECK(s.eigenvalues.minCoeff() >= -1e-8);
    CHECK(s.eigenvalues.maxCoeff() <= 2.0 + 1e-8);
    for (Index i = 1; i < n; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
    const bool no_isolated = ((w.rowwise().sum().array()) > 0).all();
    if (no_isolated) CHECK(s.eigenvalues[0] <= 1e-8);
  }
}

TEST_CASE("lambda_2 vanishes exactly when the graph is disconnected") {
  int disconnected = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Index n = 3 + static_cast<Index>(seed % 20);
    const double p = 0.05 + 0.3 * static_cast<double>(seed % 7) / 6.0;
    const Eigen::MatrixXd w = random_graph(n, p, seed * 13);
    const AffinityGraph g = AffinityGraph::from_dense(w);
    const Index components = count_components(w);
    disconnected += components > 1;
    CHECK((algebraic_connectivity(g) <= 1e-8) == (components > 1));
    CHECK(connected_components(g).count == components);
  }
  CHECK(disconnected > 20);
  CHECK(disconnected < 180);
}

TEST_CASE("sparse path agrees with the dense eigensolve") {
  // Components above the small-component size go through ARPACK.
  for (std::uint64_t seed : {3, 4}) {
    const Index n = 450;
    Eigen::MatrixXd w = random_graph(n, 0.03, seed);
    // Cut off 40 vertices into their own piece to exercise the merge; a path
    // inside each piece keeps exactly two components.
    w.block(0, 40, 40, n - 40).setZero();
    w.block(40, 0, n - 40, 40).setZero();
    w += Eigen::MatrixXd(path_graph(n).weights());
    w(39, 40) = w(40, 39) = 0.0;
    const AffinityGraph g = AffinityGraph::from_dense(w);
    SpectralOptions sparse;
    sparse.dense_limit = 10;
    const LaplacianSpectrum a = laplacian_spectrum(g, 6);
    const LaplacianSpectrum b = laplacian_spectrum(g, 6, sparse);
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(algebraic_connectivity(g, sparse) <= 1e-8);
    // The bottom invariant subspaces coincide.
    const Eigen::MatrixXd overlap = a.eigenvectors.leftCols(2).transpose() * b.eigenvectors.leftCols(2);
    CHECK(overlap.jacobiSvd().singularValues().minCoeff() >= 1 - 1e-8);
  }
}

TEST_CASE("ARPACK wrapper on a diagonal matrix") {
  Eigen::SparseMatrix<double> m(200, 200);
  for (int i = 0; i < 200; ++i) m.insert(i, i) = 1.0 + i;
  m.makeCompressed();
  const LaplacianSpectrum top = detail::largest_eigenpairs(m, 3);
  CHECK(top.eigenvalues[0] == doctest::Approx(198.0).epsilon(1e-10));
  CHECK(top.eigenvalues[2] == doctest::Approx(200.0).epsilon(1e-10));
}

TEST_CASE("spectral clustering separates disconnected blocks") {
  const Index block = 15;
  const int k = 4;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(block * k, block * k);
  std::vector<int> truth;
  for (int b = 0; b < k; ++b) {
    w.block(b * block, b * block, block, block) = random_graph(block, 0.4, 100 + b);
    w.block(b * block, b * block, block, block) += path_graph(block).weights();
    truth.insert(truth.end(), static_cast<std::size_t>(block), b);
  }
  const AffinityGraph g = AffinityGraph::from_dense(w);
  for (Index limit : {Index{5000}, Index{10}}) {
    SpectralOptions opts;
    opts.dense_limit = limit;
    const ClusteringResult r = spectral_clustering(g, k, 7, opts);
    CHECK(r.n_clusters == k);
    CHECK(clustering_accuracy(r.labels, truth) == 100.0);
    const ClusteringResult again = spectral_clustering(g, k, 7, opts);
    CHECK(r.labels == again.labels);
  }
}

TEST_CASE("k-means on separated clouds") {
  Rng rng(5);
  Eigen::MatrixXd pts(90, 2);
  std::vector<int> truth;
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (Index i = 0; i < 90; ++i) {
    const int c = static_cast<int>(i % 3);
    pts(i, 0) = centers[c][0] + rng.normal();
    pts(i, 1) = centers[c][1] + rng.normal();
    truth.push_back(c);
  }
  const KMeansResult r = kmeans(pts, 3, 11, 10, 300, 1e-6);
  CHECK(clustering_accuracy(r.labels, truth) == 100.0);
  CHECK(r.centers.rows() == 3);
  const KMeansResult again = kmeans(pts, 3, 11, 10, 300, 1e-6);
  CHECK(r.labels == again.labels);
  CHECK(r.inertia == again.inertia);
  CHECK_THROWS_AS(kmeans(pts, 0, 1, 1, 10, 1e-6), ContractViolation);
  CHECK_THROWS_AS(kmeans(pts, 91, 1, 1, 10, 1e-6), ContractViolation);
}

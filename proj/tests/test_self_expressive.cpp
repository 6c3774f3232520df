#include "sscomp/dataset.hpp"
#include "sscomp/errors.hpp"
#include "sscomp/self_expressive.hpp"
#include "sscomp/synth.hpp"

#include <doctest.h>

#include <numeric>

using namespace sscomp;

namespace {

Dataset synthetic(std::uint64_t seed, int n = 3, Index d = 3, Index ambient = 9, double rho = 5) {
  const SynthConfig cfg{.n_subspaces = n, .dim = d, .ambient_dim = ambient, .density = rho, .seed = seed};
  const std::vector<Index> counts(static_cast<std::size_t>(n), points_per_subspace(cfg, PointConvention::kExperiment));
  return sample_dataset(random_arrangement(cfg), counts, seed + 1);
}

}  // namespace

TEST_CASE("duplicated column represents its twin") {
  Eigen::MatrixXd x(2, 3);
  x << 1, 1, 0, 0, 0, 1;
  const CoefficientMatrix c = build_coefficient_matrix(make_dataset(x), {.k_max = 2, .epsilon = 0.0});
  const Eigen::MatrixXd dense = c.to_dense();
  CHECK(dense(1, 0) == doctest::Approx(1.0));
  CHECK(dense(0, 0) == 0.0);
  CHECK(dense(2, 0) == 0.0);
}

TEST_CASE("two orthogonal lines with k_max = 1 stay on their own line") {
  Eigen::MatrixXd x(3, 6);
  x << 1, -1, 1, 0, 0, 0,  //
      0, 0, 0, 1, 1, -1,   //
      0, 0, 0, 0, 0, 0;
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const CoefficientMatrix c = build_coefficient_matrix(make_dataset(x, labels), {.k_max = 1, .epsilon = 0.0});
  for (Index j = 0; j < 6; ++j) {
    int nonzeros = 0;
    c.for_each_in_column(j, [&](Index i, double v) {
      if (v == 0.0) return;
      ++nonzeros;
      CHECK(labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]);
    });
    CHECK(nonzeros == 1);
  }
}

TEST_CASE("each column is OMP on the data with that column deleted") {
  const Dataset data = synthetic(11);
  const CoefficientMatrix c = build_coefficient_matrix(data, {.k_max = 4, .epsilon = 1e-3});
  const Eigen::MatrixXd dense = c.to_dense();
  const Index n = data.size();
  CHECK(dense.diagonal().isZero(0.0));
  for (Index j : {Index{0}, n / 2, n - 1}) {
    Eigen::MatrixXd removed(data.ambient_dim(), n - 1);
    removed << data.points.leftCols(j), data.points.rightCols(n - 1 - j);
    const Eigen::VectorXd cj = omp(Dictionary(removed), data.points.col(j), {.k_max = 4, .epsilon = 1e-3})
                                   .coefficients.to_dense();
    Eigen::VectorXd expected(n);
    expected << cj.head(j), 0.0, cj.tail(n - 1 - j);
    CHECK((dense.col(j) - expected).norm() <= 1e-14);
    CHECK(c.iterations[static_cast<std::size_t>(j)] <= 4);
  }
}

TEST_CASE("parallel and serial builds are bit-identical") {
  const Dataset data = synthetic(21, 4, 4, 10, 20);
  const CoefficientMatrix serial = build_coefficient_matrix(data, {.k_max = 4, .epsilon = 1e-3, .threads = 1});
  const CoefficientMatrix parallel = build_coefficient_matrix(data, {.k_max = 4, .epsilon = 1e-3, .threads = 4});
  CHECK((serial.to_dense().array() == parallel.to_dense().array()).all());
  CHECK(serial.iterations == parallel.iterations);
}

TEST_CASE("permuting the columns permutes the coefficients") {
  const Dataset data = synthetic(31);
  const Index n = data.size();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 7, perm.end());
  Eigen::MatrixXd shuffled(data.ambient_dim(), n);
  for (Index k = 0; k < n; ++k) shuffled.col(k) = data.points.col(perm[static_cast<std::size_t>(k)]);

  const Eigen::MatrixXd c = build_coefficient_matrix(data, {.k_max = 3, .epsilon = 1e-3}).to_dense();
  const Eigen::MatrixXd cp =
      build_coefficient_matrix(make_dataset(shuffled), {.k_max = 3, .epsilon = 1e-3}).to_dense();
  double worst = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      worst = std::max(worst, std::abs(cp(a, b) - c(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)])));
  CHECK(worst <= 1e-12);
}

TEST_CASE("a single point cannot be self-expressed") {
  CHECK_THROWS_AS(build_coefficient_matrix(make_dataset(Eigen::MatrixXd::Ones(3, 1)), {}), ContractViolation);
  CHECK_THROWS_AS(lsr_coefficients(make_dataset(Eigen::MatrixXd::Ones(3, 1)), 1.0), ContractViolation);
}

TEST_CASE("affinity is |C| + |C^T|") {
  SUBCASE("zero") {
    const AffinityGraph w = affinity(CoefficientMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Zero(4, 4))));
    CHECK(w.weights().nonZeros() == 0);
  }
  SUBCASE("two entries") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
    c(0, 1) = 0.5;
    c(1, 0) = -0.25;
    const Eigen::MatrixXd w = Eigen::MatrixXd(affinity(CoefficientMatrix(c)).weights());
    CHECK(w(0, 1) == 0.75);
    CHECK(w(1, 0) == 0.75);
    CHECK(w.sum() == 1.5);
  }
  SUBCASE("exactly symmetric for OMP output") {
    const Dataset data = synthetic(41);
    const Eigen::MatrixXd w = Eigen::MatrixXd(affinity(build_coefficient_matrix(data, {})).weights());
    CHECK((w.array() == w.transpose().array()).all());
    CHECK((w.array() >= 0).all());
    CHECK(w.diagonal().isZero(0.0));
  }
}

TEST_CASE("affinity graphs reject invalid weights") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = 1.0;
  CHECK_THROWS_AS(AffinityGraph::from_dense(w), ContractViolation);
  w(1, 0) = 1.0;
  CHECK_NOTHROW(AffinityGraph::from_dense(w));
  w(0, 0) = 1.0;
  CHECK_THROWS_AS(AffinityGraph::from_dense(w), ContractViolation);
  w(0, 0) = 0.0;
  w(0, 1) = w(1, 0) = -1.0;
  CHECK_THROWS_AS(AffinityGraph::from_dense(w), ContractViolation);
  CHECK_THROWS_AS(AffinityGraph::from_dense(Eigen::MatrixXd::Zero(2, 3)), ContractViolation);
}

TEST_CASE("ridge coefficients") {
  SUBCASE("orthogonal columns do not represent each other") {
    const Eigen::MatrixXd c = lsr_coefficients(make_dataset(Eigen::MatrixXd::Identity(2, 2)), 0.7).dense();
    CHECK(c.isZero(1e-15));
  }
  SUBCASE("duplicated pair approaches 1 as lambda vanishes") {
    Eigen::MatrixXd x(2, 2);
    x << 1, 1, 0, 0;
    for (double lambda : {1.0, 1e-2, 1e-6}) {
      const Eigen::MatrixXd c = lsr_coefficients(make_dataset(x), lambda).dense();
      CHECK(c(1, 0) == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-12));
      CHECK(c(0, 1) == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-12));
      CHECK(c(0, 0) == 0.0);
    }
  }
  SUBCASE("matches a direct solve of the normal equations") {
    for (auto [n, d] : {std::pair<Index, Index>{3, 4}, {12, 5}, {30, 6}}) {
      Dataset data = make_dataset(Eigen::MatrixXd::Random(d, n));
      for (double lambda : {0.3, 60.0}) {
        const Eigen::MatrixXd c = lsr_coefficients(data, lambda).dense();
        for (Index j = 0; j < n; ++j) {
          Eigen::MatrixXd a(d, n - 1);
          a << data.points.leftCols(j), data.points.rightCols(n - 1 - j);
          const Eigen::MatrixXd gram = a.transpose() * a + lambda * Eigen::MatrixXd::Identity(n - 1, n - 1);
          const Eigen::VectorXd cj = gram.ldlt().solve(a.transpose() * data.points.col(j));
          Eigen::VectorXd expected(n);
          expected << cj.head(j), 0.0, cj.tail(n - 1 - j);
          CHECK((c.col(j) - expected).norm() <= 1e-8);
        }
      }
    }
  }
  SUBCASE("lambda must be positive") {
    CHECK_THROWS_AS(lsr_coefficients(make_dataset(Eigen::MatrixXd::Identity(2, 2)), 0.0), ContractViolation);
  }
}

TEST_CASE("datasets normalize and validate") {
  Eigen::MatrixXd x(2, 2);
  x << 3, 0, 4, 2;
  const Dataset d = make_dataset(x, std::vector<int>{0, 1});
  CHECK(d.points.col(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.label_count() == 2);
  x(0, 1) = x(1, 1) = 0.0;
  CHECK_THROWS_WITH_AS(make_dataset(x), doctest::Contains("zero-norm column 1"), ContractViolation);
  CHECK_THROWS_AS(make_dataset(Eigen::MatrixXd::Ones(2, 2), std::vector<int>{0}), ContractViolation);
  CHECK_THROWS_AS(make_dataset(Eigen::MatrixXd::Ones(2, 2), std::vector<int>{0, -1}), ContractViolation);
}

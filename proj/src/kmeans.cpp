#include "sscomp/errors.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/spectral.hpp"

#include <cmath>
#include <limits>

namespace sscomp {

namespace {

struct Assignment {
  std::vector<int> labels;
  Eigen::VectorXd distance;  // squared distance to assigned center
  double inertia = 0.0;
};

Assignment assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers) {
  const Index n = points.rows();
  Assignment a;
  a.labels.resize(static_cast<std::size_t>(n));
  a.distance.resize(n);
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centers.rows(); ++c) {
      const double d = (points.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    a.labels[static_cast<std::size_t>(i)] = best;
    a.distance[i] = best_d;
    a.inertia += best_d;
  }
  return a;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double running = 0.0;
      for (Index i = 0; i < n; ++i) {
        running += nearest[i];
        if (running > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    nearest = nearest.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers, int max_iterations,
                   double tolerance) {
  const int k = static_cast<int>(centers.rows());
  Assignment a = assign(points, centers);
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < points.rows(); ++i) {
      sums.row(a.labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(a.labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: restart it at the worst-fit point.
        Index far = 0;
        a.distance.maxCoeff(&far);
        centers.row(c) = points.row(far);
        a.distance[far] = 0.0;
      }
    }
    const double previous = a.inertia;
    Assignment next = assign(points, centers);
    const bool unchanged = next.labels == a.labels;
    a = std::move(next);
    if (unchanged || std::abs(previous - a.inertia) <= tolerance * previous) break;
  }
  return {std::move(a.labels), std::move(centers), a.inertia};
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts,
                    int max_iterations, double tolerance) {
  require(k >= 1 && k <= points.rows(), "k-means needs 1 <= k <= number of points");
  require(restarts >= 1 && max_iterations >= 1, "k-means needs positive restarts and iterations");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    KMeansResult run = lloyd(points, seed_plus_plus(points, k, rng), max_iterations, tolerance);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace sscomp

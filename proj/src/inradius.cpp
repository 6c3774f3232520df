#include "sscomp/errors.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sscomp {

namespace {

constexpr double kRankTolerance = 1e-10;

double support_value(const Eigen::MatrixXd& coords, const Eigen::VectorXd& w) {
  return (coords.transpose() * w).cwiseAbs().maxCoeff();
}

double binomial(Eigen::Index n, Eigen::Index k) {
  double out = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) out *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

// Every facet of conv(+-y) passes through d affinely independent signed
// points; its normal is among the hyperplanes through some d-subset with the
// first sign fixed. The support function at a non-facet normal only
// overestimates, so the minimum over all candidates is exact.
double facet_enumeration(const Eigen::MatrixXd& coords) {
  const Eigen::Index d = coords.rows();
  const Eigen::Index n = coords.cols();
  double best = std::numeric_limits<double>::infinity();

  if (d == 2) {
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        for (double sign : {-1.0, 1.0}) {
          const Eigen::Vector2d edge = coords.col(a) - sign * coords.col(b);
          const double len = edge.norm();
          if (len <= kRankTolerance) continue;
          const Eigen::Vector2d normal(-edge[1] / len, edge[0] / len);
          best = std::min(best, support_value(coords, normal));
        }
      }
    }
    return best;
  }

  std::vector<Eigen::Index> pick(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) pick[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd edges(d - 1, d);
  while (true) {
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << (d - 1)); ++signs) {
      for (Eigen::Index k = 1; k < d; ++k) {
        const double s = ((signs >> (k - 1)) & 1U) ? -1.0 : 1.0;
        edges.row(k - 1) = (s * coords.col(pick[static_cast<std::size_t>(k)]) - coords.col(pick[0])).transpose();
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv[d - 2] <= kRankTolerance * std::max(1.0, sv[0])) continue;
      best = std::min(best, support_value(coords, svd.matrixV().col(d - 1)));
    }
    // next combination
    Eigen::Index i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Eigen::Index k = i + 1; k < d; ++k)
      pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
  }
  return best;
}

// Projected subgradient descent on the sphere from many starts. Returns the
// best value seen, which upper-bounds the true minimum.
double multistart_minimum(const Eigen::MatrixXd& coords, const InradiusOptions& options) {
  const Eigen::Index d = coords.rows();
  Rng rng(options.seed);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.starts; ++s) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w[i] = rng.normal();
    w.normalize();
    for (int t = 0; t < 2000; ++t) {
      const Eigen::VectorXd values = coords.transpose() * w;
      Eigen::Index active = 0;
      const double h = values.cwiseAbs().maxCoeff(&active);
      best = std::min(best, h);
      Eigen::VectorXd g = (values[active] >= 0.0 ? 1.0 : -1.0) * coords.col(active);
      g -= g.dot(w) * w;
      const double step = 0.2 / (1.0 + 0.05 * t);
      w -= step * g;
      w.normalize();
    }
    best = std::min(best, support_value(coords, w));
  }
  return best;
}

}  // namespace

Inradius inradius(const Eigen::MatrixXd& points, std::optional<Eigen::Index> expected_dim,
                  const InradiusOptions& options) {
  require(points.cols() >= 1, "inradius needs at least one point");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(points, Eigen::ComputeThinU);
  svd.setThreshold(kRankTolerance);
  const Eigen::Index rank = svd.rank();
  require(rank >= 1, "inradius of a zero point set is undefined");
  if (expected_dim)
    require(rank >= *expected_dim, "points have rank " + std::to_string(rank) +
                                       ", below the subspace dimension " + std::to_string(*expected_dim));

  const Eigen::MatrixXd coords = svd.matrixU().leftCols(rank).transpose() * points;
  Inradius out;
  out.dim = rank;
  if (rank == 1) {
    out.radius = coords.cwiseAbs().maxCoeff();
    return out;
  }
  const double candidates = binomial(coords.cols(), rank) * std::ldexp(1.0, static_cast<int>(rank - 1));
  if (candidates <= options.max_candidates) {
    out.radius = facet_enumeration(coords);
  } else {
    out.radius = multistart_minimum(coords, options);
    out.exact = false;
  }
  return out;
}

double coherence(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require(a.cols() >= 1 && b.cols() >= 1, "coherence needs two nonempty sets");
  require(a.rows() == b.rows(), "coherence needs vectors of equal dimension");
  return (a.transpose() * b).cwiseAbs().maxCoeff();
}

double principal_angle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  require(u.rows() == v.rows(), "bases must share the ambient dimension");
  const double top = Eigen::JacobiSVD<Eigen::MatrixXd>(u.transpose() * v).singularValues()[0];
  return std::acos(std::clamp(top, 0.0, 1.0));
}

}  // namespace sscomp

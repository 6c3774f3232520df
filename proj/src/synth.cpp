#include "sscomp/synth.hpp"

#include "sscomp/errors.hpp"
#include "sscomp/rng.hpp"

#include <cmath>
#include <numeric>

namespace sscomp {

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  return q;
}

}  // namespace

std::vector<Eigen::Index> SubspaceArrangement::dims() const {
  std::vector<Eigen::Index> out;
  for (const auto& b : bases) out.push_back(b.cols());
  return out;
}

Eigen::Index points_per_subspace(const SynthConfig& config, PointConvention convention) {
  const auto base = static_cast<Eigen::Index>(std::llround(config.density * static_cast<double>(config.dim)));
  return convention == PointConvention::kTheory ? base + 1 : base;
}

SubspaceArrangement random_arrangement(const SynthConfig& config) {
  require(config.n_subspaces >= 1, "need at least one subspace");
  require(config.dim >= 1 && config.dim <= config.ambient_dim,
          "subspace dimension must lie in [1, ambient dimension]");
  require(config.density >= 1.0, "density must be at least 1");
  Rng rng(config.seed);
  SubspaceArrangement out;
  out.ambient_dim = config.ambient_dim;
  for (int i = 0; i < config.n_subspaces; ++i) {
    Eigen::MatrixXd directions = gaussian(config.ambient_dim, config.dim, rng);
    directions.colwise().normalize();
    out.bases.push_back(orthonormalize(directions));
  }
  return out;
}

SubspaceArrangement independent_arrangement(std::span<const Eigen::Index> dims, Eigen::Index ambient_dim,
                                            std::uint64_t seed) {
  require(!dims.empty(), "need at least one subspace");
  Eigen::Index total = 0;
  for (Eigen::Index d : dims) {
    require(d >= 1, "subspace dimensions must be positive");
    total += d;
  }
  require(total <= ambient_dim, "independent subspaces need sum of dimensions <= ambient dimension");
  Rng rng(seed);
  const Eigen::MatrixXd frame = orthonormalize(gaussian(ambient_dim, ambient_dim, rng));
  SubspaceArrangement out;
  out.ambient_dim = ambient_dim;
  out.independent = true;
  Eigen::Index offset = 0;
  for (Eigen::Index d : dims) {
    out.bases.push_back(frame.middleCols(offset, d));
    offset += d;
  }
  return out;
}

bool is_independent(const SubspaceArrangement& arrangement) {
  Eigen::Index total = 0;
  for (const auto& b : arrangement.bases) total += b.cols();
  if (total > arrangement.ambient_dim) return false;
  Eigen::MatrixXd stacked(arrangement.ambient_dim, total);
  Eigen::Index offset = 0;
  for (const auto& b : arrangement.bases) {
    stacked.middleCols(offset, b.cols()) = b;
    offset += b.cols();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  svd.setThreshold(1e-10);
  return svd.rank() == total;
}

Dataset sample_dataset(const SubspaceArrangement& arrangement, std::span<const Eigen::Index> counts,
                       std::uint64_t seed) {
  require(counts.size() == arrangement.count(), "one point count per subspace required");
  Eigen::Index total = 0;
  for (Eigen::Index c : counts) {
    require(c >= 1, "every subspace needs at least one point");
    total += c;
  }
  Rng rng(seed);
  Eigen::MatrixXd points(arrangement.ambient_dim, total);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(total));
  Eigen::Index column = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const Eigen::MatrixXd& basis = arrangement.bases[i];
    for (Eigen::Index k = 0; k < counts[i]; ++k) {
      Eigen::VectorXd g(basis.cols());
      do {
        for (Eigen::Index t = 0; t < g.size(); ++t) g[t] = rng.normal();
      } while (g.norm() == 0.0);
      points.col(column++) = basis * (g / g.norm());
      labels.push_back(static_cast<int>(i));
    }
  }
  return make_dataset(std::move(points), std::move(labels));
}

}  // namespace sscomp

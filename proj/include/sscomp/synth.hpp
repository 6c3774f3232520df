#pragma once

#include "sscomp/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace sscomp {

/// Orthonormal bases U_i (D x d_i) of a union of subspaces.
struct SubspaceArrangement {
  std::vector<Eigen::MatrixXd> bases;
  Eigen::Index ambient_dim = 0;
  /// Set only by constructions that guarantee independence.
  bool independent = false;

  std::size_t count() const { return bases.size(); }
  std::vector<Eigen::Index> dims() const;
};

/// Points per subspace under the two conventions in use: rho * d for the
/// experiments, rho * d + 1 for the random-model guarantee.
enum class PointConvention { kExperiment, kTheory };

struct SynthConfig {
  int n_subspaces = 5;
  Eigen::Index dim = 6;
  Eigen::Index ambient_dim = 9;
  double density = 5.0;
  std::uint64_t seed = 0;
};

/// Number of points per subspace for `config` under `convention`.
Eigen::Index points_per_subspace(const SynthConfig& config, PointConvention convention);

/// n subspaces, each spanned by d independent uniform directions of R^D.
SubspaceArrangement random_arrangement(const SynthConfig& config);

/// Splits one random orthonormal frame of R^D into blocks of the given sizes,
/// so the subspaces are independent by construction.
SubspaceArrangement independent_arrangement(std::span<const Eigen::Index> dims, Eigen::Index ambient_dim,
                                            std::uint64_t seed);

/// Rank test on the horizontally stacked bases.
bool is_independent(const SubspaceArrangement& arrangement);

/// For subspace i, counts[i] points U_i g / ||g|| with g standard normal.
/// Points are grouped by subspace and labelled 0..n-1.
Dataset sample_dataset(const SubspaceArrangement& arrangement, std::span<const Eigen::Index> counts,
                       std::uint64_t seed);

}  // namespace sscomp

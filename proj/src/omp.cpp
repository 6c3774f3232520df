#include "sscomp/omp.hpp"

#include "sscomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sscomp {

namespace {

constexpr double kUnitNormTolerance = 1e-8;
// A new column whose component orthogonal to the current basis is below this
// fraction of its norm is considered dependent on the selected columns.
constexpr double kDependentColumn = 1e-10;
// Once every correlation is below this fraction of ||q||, the residual is
// orthogonal to the range of A and no pick can reduce it.
constexpr double kOrthogonalResidual = 1e-12;

}  // namespace

Dictionary::Dictionary(const Eigen::MatrixXd& columns, bool normalized)
    : columns_(&columns), normalized_(normalized) {
  require(columns.rows() >= 1 && columns.cols() >= 1, "dictionary must be non-empty");
  if (normalized) {
    for (Index i = 0; i < columns.cols(); ++i) {
      const double norm = columns.col(i).norm();
      if (std::abs(norm - 1.0) > kUnitNormTolerance) {
        throw ContractViolation("dictionary column " + std::to_string(i) +
                                " is not unit norm (norm " + std::to_string(norm) + ")");
      }
    }
  }
}

Dictionary Dictionary::without_column(Index parent_column) const {
  require(excluded_ < 0, "dictionary already hides a column");
  require(parent_column >= 0 && parent_column < columns_->cols(),
          "hidden column index out of range");
  require(columns_->cols() >= 2, "cannot hide the only column of a dictionary");
  return Dictionary(columns_, parent_column, normalized_);
}

Eigen::VectorXd SparseCoefficients::to_dense() const {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(length);
  for (std::size_t k = 0; k < indices.size(); ++k) dense[indices[k]] = values[k];
  return dense;
}

Index SparseCoefficients::nonzeros() const {
  return static_cast<Index>(std::count_if(values.begin(), values.end(),
                                          [](double v) { return v != 0.0; }));
}

LeastSquaresFit least_squares_on_support(const Dictionary& dict,
                                         const Eigen::Ref<const Eigen::VectorXd>& target,
                                         std::span<const Index> support) {
  require(target.size() == dict.dim(), "target dimension does not match dictionary rows");
  LeastSquaresFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(dict.size());
  if (support.empty()) return fit;

  std::vector<Index> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "support indices must be distinct");
  require(sorted.front() >= 0 && sorted.back() < dict.size(), "support index out of range");

  Eigen::MatrixXd selected(dict.dim(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k)
    selected.col(static_cast<Index>(k)) = dict.column(support[k]);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kDependentColumn);
  cod.compute(selected);
  const Eigen::VectorXd local = cod.solve(target);
  fit.rank_deficient = cod.rank() < selected.cols();
  for (std::size_t k = 0; k < support.size(); ++k)
    fit.coefficients[support[k]] = local[static_cast<Index>(k)];
  return fit;
}

OmpResult omp(const Dictionary& dict, const Eigen::Ref<const Eigen::VectorXd>& target,
              const OmpOptions& options) {
  require(target.size() == dict.dim(), "target dimension does not match dictionary rows");
  require(options.k_max >= 1, "k_max must be at least 1");
  require(options.epsilon >= 0.0, "epsilon must be nonnegative");
  require(options.tie_tolerance >= 0.0, "tie tolerance must be nonnegative");

  const Eigen::MatrixXd& parent = dict.parent();
  const Index m = dict.dim();
  const Index cap = std::min({options.k_max, m, dict.size()});
  const double stop_norm = std::max(options.epsilon, kZeroResidual);
  const auto excluded = dict.excluded();

  OmpResult result;
  OmpTrace& trace = result.trace;
  std::vector<Index> picked_parent;

  // Orthonormal basis of the selected columns, with R such that
  // A_T = basis * R for the non-dependent picks.
  Eigen::MatrixXd basis(m, cap);
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(cap, cap);
  Eigen::VectorXd projected(cap);  // basis^T b
  Index rank = 0;

  Eigen::VectorXd residual = target;
  double residual_norm = residual.norm();
  trace.residual_norms.push_back(residual_norm);
  if (options.record_residuals) trace.residuals.push_back(residual);

  Eigen::VectorXd correlation(parent.cols());
  while (static_cast<Index>(trace.support.size()) < cap && residual_norm > stop_norm) {
    correlation.noalias() = parent.transpose() * residual;
    correlation = correlation.cwiseAbs();
    if (excluded) correlation[*excluded] = -1.0;
    for (Index p : picked_parent) correlation[p] = -1.0;

    const double best = correlation.maxCoeff();
    if (best <= kOrthogonalResidual * residual_norm) break;
    const double floor = best - options.tie_tolerance * best;
    Index pick = 0;
    while (correlation[pick] < floor) ++pick;

    picked_parent.push_back(pick);
    trace.support.push_back(dict.visible_index(pick));

    // Classical Gram-Schmidt with one reorthogonalization pass.
    const auto column = parent.col(pick);
    Eigen::VectorXd direction = column;
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(rank);
    for (int pass = 0; pass < 2 && rank > 0; ++pass) {
      const Eigen::VectorXd c = basis.leftCols(rank).transpose() * direction;
      direction.noalias() -= basis.leftCols(rank) * c;
      coeffs += c;
    }
    const double length = direction.norm();
    if (length <= kDependentColumn * column.norm()) {
      trace.rank_deficient = true;
    } else {
      basis.col(rank) = direction / length;
      upper.col(rank).head(rank) = coeffs;
      upper(rank, rank) = length;
      projected[rank] = basis.col(rank).dot(residual);
      residual.noalias() -= projected[rank] * basis.col(rank);
      ++rank;
      residual_norm = residual.norm();
    }
    trace.residual_norms.push_back(residual_norm);
    if (options.record_residuals) trace.residuals.push_back(residual);
  }
  trace.iterations = static_cast<Index>(trace.support.size());

  SparseCoefficients& out = result.coefficients;
  out.length = dict.size();
  out.indices = trace.support;
  if (trace.rank_deficient) {
    const LeastSquaresFit fit = least_squares_on_support(dict, target, trace.support);
    for (Index i : trace.support) out.values.push_back(fit.coefficients[i]);
  } else {
    const Eigen::VectorXd local =
        upper.topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(projected.head(rank));
    out.values.assign(local.data(), local.data() + local.size());
  }
  return result;
}

}  // namespace sscomp

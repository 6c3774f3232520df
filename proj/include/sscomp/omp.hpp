#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace sscomp {

using Index = Eigen::Index;

/// Residual norms at or below this are treated as exactly zero. An epsilon of
/// 0 passed to omp() therefore means "stop once the residual is numerically
/// zero".
inline constexpr double kZeroResidual = 1e-12;

/// Non-owning view of a column matrix A = [a_1, ..., a_M], optionally with one
/// column of the underlying matrix hidden. Hiding a column shifts the visible
/// indices past it down by one, so OMP on X_{-j} is run without copying X.
/// The underlying matrix must outlive every view onto it.
class Dictionary {
 public:
  /// Throws ContractViolation on an empty matrix, or, when `normalized` is
  /// set, on any column whose norm differs from 1 by more than 1e-8.
  explicit Dictionary(const Eigen::MatrixXd& columns, bool normalized = true);

  /// Same columns with `parent_column` (an index into the underlying matrix)
  /// hidden. No re-validation.
  Dictionary without_column(Index parent_column) const;

  Index dim() const { return columns_->rows(); }
  Index size() const { return columns_->cols() - (excluded_ >= 0 ? 1 : 0); }
  bool normalized() const { return normalized_; }
  std::optional<Index> excluded() const {
    return excluded_ >= 0 ? std::optional<Index>(excluded_) : std::nullopt;
  }

  Index parent_index(Index i) const {
    return (excluded_ >= 0 && i >= excluded_) ? i + 1 : i;
  }
  Index visible_index(Index parent) const {
    return (excluded_ >= 0 && parent > excluded_) ? parent - 1 : parent;
  }

  auto column(Index i) const { return columns_->col(parent_index(i)); }
  const Eigen::MatrixXd& parent() const { return *columns_; }

 private:
  Dictionary(const Eigen::MatrixXd* columns, Index excluded, bool normalized)
      : columns_(columns), excluded_(excluded), normalized_(normalized) {}

  const Eigen::MatrixXd* columns_;
  Index excluded_ = -1;
  bool normalized_ = true;
};

struct OmpOptions {
  Index k_max = 1;
  double epsilon = 0.0;
  /// Keep every residual vector q_0 ... q_k in the trace. Norms are always
  /// kept.
  bool record_residuals = true;
  /// Two correlations tie when they differ by at most this fraction of the
  /// largest one; the smallest index wins. 0 requires exact equality.
  double tie_tolerance = 1e-12;
};

/// Selection history of one OMP run.
struct OmpTrace {
  std::vector<Index> support;               // T_k in selection order
  std::vector<Eigen::VectorXd> residuals;   // q_0 ... q_k (if recorded)
  std::vector<double> residual_norms;       // ||q_0|| ... ||q_k||
  Index iterations = 0;
  /// A selected column was numerically dependent on earlier picks; the final
  /// coefficients are then the minimum-norm least-squares solution.
  bool rank_deficient = false;
};

/// Sparse vector of length `length`; `indices` follow selection order.
struct SparseCoefficients {
  std::vector<Index> indices;
  std::vector<double> values;
  Index length = 0;

  Eigen::VectorXd to_dense() const;
  Index nonzeros() const;
};

struct OmpResult {
  SparseCoefficients coefficients;
  OmpTrace trace;
};

/// Orthogonal matching pursuit: greedily picks argmax_i |a_i^T q_k| (smallest
/// index on ties) until k_max columns are chosen or ||q_k|| <= epsilon, then
/// returns the least-squares fit of `target` on the chosen columns. Indices
/// are in the dictionary's visible index space.
OmpResult omp(const Dictionary& dict, const Eigen::Ref<const Eigen::VectorXd>& target,
              const OmpOptions& options);

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;  // length dict.size(), zero off the support
  bool rank_deficient = false;
};

/// argmin ||b - Ac|| over c supported on `support`; minimum-norm when the
/// supported columns are dependent.
LeastSquaresFit least_squares_on_support(const Dictionary& dict,
                                         const Eigen::Ref<const Eigen::VectorXd>& target,
                                         std::span<const Index> support);

}  // namespace sscomp

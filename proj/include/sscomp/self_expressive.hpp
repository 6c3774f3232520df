#pragma once

#include "sscomp/dataset.hpp"
#include "sscomp/omp.hpp"

#include <Eigen/Sparse>

#include <variant>
#include <vector>

namespace sscomp {

/// N x N self-expression matrix C; column j holds c_j and c_jj = 0. OMP
/// output is stored sparse, ridge (LSR) output dense.
class CoefficientMatrix {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

  explicit CoefficientMatrix(Sparse values);
  explicit CoefficientMatrix(Eigen::MatrixXd values);

  Index size() const;
  bool is_sparse() const { return std::holds_alternative<Sparse>(values_); }
  const Sparse& sparse() const { return std::get<Sparse>(values_); }
  const Eigen::MatrixXd& dense() const { return std::get<Eigen::MatrixXd>(values_); }
  Eigen::MatrixXd to_dense() const;

  /// Calls f(row, value) for every stored entry of column j.
  template <class F>
  void for_each_in_column(Index j, F&& f) const {
    if (is_sparse()) {
      for (Sparse::InnerIterator it(sparse(), j); it; ++it) f(it.row(), it.value());
    } else {
      const auto& c = dense();
      for (Index i = 0; i < c.rows(); ++i) f(i, c(i, j));
    }
  }

  /// Per-column OMP iteration counts and degeneracy flags (empty for LSR).
  std::vector<Index> iterations;
  std::vector<char> rank_deficient;

 private:
  std::variant<Sparse, Eigen::MatrixXd> values_;
};

/// Symmetric, nonnegative, zero-diagonal weight matrix.
class AffinityGraph {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

  /// Throws ContractViolation unless `weights` is square, exactly symmetric,
  /// entrywise nonnegative and zero on the diagonal.
  explicit AffinityGraph(Sparse weights);
  static AffinityGraph from_dense(const Eigen::MatrixXd& weights);

  Index size() const { return weights_.rows(); }
  const Sparse& weights() const { return weights_; }

  /// Subgraph induced by `vertices` (in the given order).
  AffinityGraph induced(std::span<const Index> vertices) const;

 private:
  Sparse weights_;
};

struct SelfExpressionOptions {
  Index k_max = 6;
  double epsilon = 1e-3;
  /// 0 uses the OpenMP default.
  int threads = 0;
};

/// c_j = OMP(X_{-j}, x_j) with a zero re-inserted at j.
CoefficientMatrix build_coefficient_matrix(const Dataset& data, const SelfExpressionOptions& options);

/// W = |C| + |C^T|.
AffinityGraph affinity(const CoefficientMatrix& coefficients);

/// Per-column ridge regression with the self column removed:
/// c_j = argmin ||x_j - X_{-j} c||^2 + lambda ||c||^2, zero at j.
CoefficientMatrix lsr_coefficients(const Dataset& data, double lambda);

}  // namespace sscomp

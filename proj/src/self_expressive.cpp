#include "sscomp/self_expressive.hpp"

#include "sscomp/errors.hpp"

#include <omp.h>

#include <cmath>

namespace sscomp {

CoefficientMatrix::CoefficientMatrix(Sparse values) : values_(std::move(values)) {
  require(sparse().rows() == sparse().cols(), "coefficient matrix must be square");
}

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require(dense().rows() == dense().cols(), "coefficient matrix must be square");
}

Index CoefficientMatrix::size() const {
  return is_sparse() ? sparse().rows() : dense().rows();
}

Eigen::MatrixXd CoefficientMatrix::to_dense() const {
  return is_sparse() ? Eigen::MatrixXd(sparse()) : dense();
}

AffinityGraph::AffinityGraph(Sparse weights) : weights_(std::move(weights)) {
  require(weights_.rows() == weights_.cols(), "affinity must be square");
  weights_.prune(0.0, 0.0);
  weights_.makeCompressed();
  const Sparse transposed = weights_.transpose();
  for (Index j = 0; j < weights_.outerSize(); ++j) {
    Sparse::InnerIterator a(weights_, j), b(transposed, j);
    for (; a && b; ++a, ++b) {
      if (a.row() != b.row() || a.value() != b.value())
        throw ContractViolation("affinity is not symmetric");
      require(a.value() >= 0.0, "affinity must be nonnegative");
      require(a.row() != j || a.value() == 0.0, "affinity diagonal must be zero");
    }
    if (a || b) throw ContractViolation("affinity is not symmetric");
  }
}

AffinityGraph AffinityGraph::from_dense(const Eigen::MatrixXd& weights) {
  return AffinityGraph(Sparse(weights.sparseView(0.0, 0.0)));
}

AffinityGraph AffinityGraph::induced(std::span<const Index> vertices) const {
  std::vector<Index> position(static_cast<std::size_t>(size()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    require(vertices[k] >= 0 && vertices[k] < size(), "vertex out of range");
    position[static_cast<std::size_t>(vertices[k])] = static_cast<Index>(k);
  }
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (Sparse::InnerIterator it(weights_, vertices[k]); it; ++it) {
      const Index row = position[static_cast<std::size_t>(it.row())];
      if (row >= 0) entries.emplace_back(row, static_cast<Index>(k), it.value());
    }
  }
  const auto n = static_cast<Index>(vertices.size());
  Sparse sub(n, n);
  sub.setFromTriplets(entries.begin(), entries.end());
  return AffinityGraph(std::move(sub));
}

CoefficientMatrix build_coefficient_matrix(const Dataset& data, const SelfExpressionOptions& options) {
  const Index n_points = data.size();
  require(n_points >= 2, "self-expression needs at least two points");
  const Dictionary full(data.points);
  const OmpOptions omp_options{.k_max = options.k_max,
                               .epsilon = options.epsilon,
                               .record_residuals = false};

  std::vector<SparseCoefficients> columns(static_cast<std::size_t>(n_points));
  std::vector<Index> iterations(static_cast<std::size_t>(n_points));
  std::vector<char> degenerate(static_cast<std::size_t>(n_points));
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (Index j = 0; j < n_points; ++j) {
    const Dictionary others = full.without_column(j);
    OmpResult r = omp(others, data.points.col(j), omp_options);
    for (Index& i : r.coefficients.indices) i = others.parent_index(i);
    const auto slot = static_cast<std::size_t>(j);
    iterations[slot] = r.trace.iterations;
    degenerate[slot] = r.trace.rank_deficient ? 1 : 0;
    columns[slot] = std::move(r.coefficients);
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (Index j = 0; j < n_points; ++j) {
    const SparseCoefficients& c = columns[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < c.indices.size(); ++k)
      if (c.values[k] != 0.0) entries.emplace_back(c.indices[k], j, c.values[k]);
  }
  CoefficientMatrix::Sparse values(n_points, n_points);
  values.setFromTriplets(entries.begin(), entries.end());
  CoefficientMatrix out(std::move(values));
  out.iterations = std::move(iterations);
  out.rank_deficient = std::move(degenerate);
  return out;
}

AffinityGraph affinity(const CoefficientMatrix& coefficients) {
  const Index n = coefficients.size();
  CoefficientMatrix::Sparse magnitude =
      coefficients.is_sparse() ? CoefficientMatrix::Sparse(coefficients.sparse().cwiseAbs())
                               : CoefficientMatrix::Sparse(coefficients.dense().cwiseAbs().sparseView(0.0, 0.0));
  magnitude.prune([](Index i, Index j, double) { return i != j; });
  CoefficientMatrix::Sparse transposed = magnitude.transpose();
  CoefficientMatrix::Sparse w = magnitude + transposed;
  w.prune(0.0, 0.0);
  require(w.rows() == n, "affinity size mismatch");
  return AffinityGraph(std::move(w));
}

CoefficientMatrix lsr_coefficients(const Dataset& data, double lambda) {
  require(lambda > 0.0, "ridge parameter must be positive");
  const Eigen::MatrixXd& x = data.points;
  const Index n = x.cols();
  const Index dim = x.rows();
  require(n >= 2, "self-expression needs at least two points");

  // P = (X^T X + lambda I)^{-1}. For c_jj = 0 the constrained minimizer is
  // c_ij = -P_ij / P_jj (i != j).
  // The Woodbury form divides by lambda, so it is used only when that loses
  // little precision.
  Eigen::MatrixXd p;
  if (dim < n && lambda >= 1e-4) {
    Eigen::MatrixXd small = x * x.transpose();
    small.diagonal().array() += lambda;
    const Eigen::MatrixXd inner = Eigen::LLT<Eigen::MatrixXd>(small).solve(x);
    p = -(x.transpose() * inner);
    p.diagonal().array() += 1.0;
    p /= lambda;
  } else {
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += lambda;
    p = Eigen::LLT<Eigen::MatrixXd>(gram).solve(Eigen::MatrixXd::Identity(n, n));
  }
  Eigen::MatrixXd c(n, n);
  for (Index j = 0; j < n; ++j) {
    c.col(j) = -p.col(j) / p(j, j);
    c(j, j) = 0.0;
  }
  return CoefficientMatrix(std::move(c));
}

}  // namespace sscomp

#include "sscomp/spectral.hpp"

#include <cmath>
#include <numeric>

namespace sscomp {

Eigen::SparseMatrix<double> normalized_laplacian(const AffinityGraph& graph) {
  const auto& w = graph.weights();
  const Index n = graph.size();
  Eigen::VectorXd inv_sqrt_degree(n);
  for (Index j = 0; j < n; ++j) {
    const double degree = w.col(j).sum();
    inv_sqrt_degree[j] = degree > 0.0 ? 1.0 / std::sqrt(degree) : 0.0;
  }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(w.nonZeros() + n));
  for (Index j = 0; j < n; ++j) {
    if (inv_sqrt_degree[j] > 0.0) entries.emplace_back(j, j, 1.0);
    for (AffinityGraph::Sparse::InnerIterator it(w, j); it; ++it)
      entries.emplace_back(it.row(), j, -inv_sqrt_degree[it.row()] * it.value() * inv_sqrt_degree[j]);
  }
  Eigen::SparseMatrix<double> laplacian(n, n);
  laplacian.setFromTriplets(entries.begin(), entries.end());
  return laplacian;
}

namespace {

Index find_root(std::vector<Index>& parent, Index v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    auto& p = parent[static_cast<std::size_t>(v)];
    p = parent[static_cast<std::size_t>(p)];
    v = p;
  }
  return v;
}

}  // namespace

Components connected_components(const AffinityGraph& graph) {
  const Index n = graph.size();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  const auto& w = graph.weights();
  for (Index j = 0; j < n; ++j) {
    for (AffinityGraph::Sparse::InnerIterator it(w, j); it; ++it) {
      const Index a = find_root(parent, it.row());
      const Index b = find_root(parent, j);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  Components out;
  out.id.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> root_id(static_cast<std::size_t>(n), -1);
  for (Index v = 0; v < n; ++v) {
    const auto root = static_cast<std::size_t>(find_root(parent, v));
    if (root_id[root] < 0) root_id[root] = out.count++;
    out.id[static_cast<std::size_t>(v)] = root_id[root];
  }
  return out;
}

}  // namespace sscomp

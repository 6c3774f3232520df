#include "sscomp/errors.hpp"
#include "sscomp/metrics.hpp"

#include <limits>

namespace sscomp {

// Shortest augmenting path Hungarian algorithm with row/column potentials,
// run on cost = -score. O(n^3).
std::vector<int> optimal_assignment(const Eigen::MatrixXd& score) {
  require(score.rows() == score.cols(), "assignment needs a square matrix");
  const int n = static_cast<int>(score.rows());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is a virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -score(r - 1, col - 1) - u[r] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> perm(n);
  for (int col = 1; col <= n; ++col) perm[match[col] - 1] = col - 1;
  return perm;
}

}  // namespace sscomp

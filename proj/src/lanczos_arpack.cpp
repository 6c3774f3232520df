#include "sscomp/errors.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/spectral.hpp"

#include <arpack.h>

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>

namespace sscomp::detail {

namespace {

// ARPACK keeps SAVE'd Fortran state between calls.
std::mutex arpack_mutex;

constexpr double kTolerance = 1e-12;
constexpr a_int kMaxRestarts = 20000;

}  // namespace

LaplacianSpectrum largest_eigenpairs(const Eigen::SparseMatrix<double>& matrix, Index count) {
  const auto n = static_cast<a_int>(matrix.rows());
  const auto nev = static_cast<a_int>(count);
  require(matrix.rows() == matrix.cols(), "eigensolver needs a square matrix");
  require(nev >= 1 && nev < n, "Lanczos needs 1 <= count < size");
  const a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, 40));
  const a_int lworkl = ncv * (ncv + 8);

  // Fixed pseudo-random start vector so results do not depend on call order.
  std::vector<double> resid(static_cast<std::size_t>(n));
  Rng rng(0x5EED5EEDULL);
  for (double& r : resid) r = rng.uniform() - 0.5;

  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(ncv));
  std::vector<double> workd(3 * static_cast<std::size_t>(n));
  std::vector<double> workl(static_cast<std::size_t>(lworkl));
  a_int iparam[11] = {};
  a_int ipntr[14] = {};
  iparam[0] = 1;
  iparam[2] = kMaxRestarts;
  iparam[6] = 1;
  a_int ido = 0;
  a_int info = 1;

  std::lock_guard lock(arpack_mutex);
  while (true) {
    dsaupd_c(&ido, "I", n, "LA", nev, kTolerance, resid.data(), ncv, v.data(), n, iparam, ipntr,
             workd.data(), workl.data(), lworkl, &info);
    if (ido != -1 && ido != 1) break;
    Eigen::Map<const Eigen::VectorXd> x(workd.data() + ipntr[0] - 1, n);
    Eigen::Map<Eigen::VectorXd> y(workd.data() + ipntr[1] - 1, n);
    y.noalias() = matrix * x;
  }
  const std::string report = " (size " + std::to_string(n) + ", nonzeros " +
                             std::to_string(matrix.nonZeros()) + ", requested " +
                             std::to_string(nev) + ", converged " + std::to_string(iparam[4]) + ")";
  if (info < 0 || (info == 1 && iparam[4] < nev))
    throw NumericError("Lanczos eigensolver failed with code " + std::to_string(info) + report);

  std::vector<a_int> select(static_cast<std::size_t>(ncv));
  std::vector<double> values(static_cast<std::size_t>(nev));
  std::vector<double> vectors(static_cast<std::size_t>(n) * static_cast<std::size_t>(nev));
  dseupd_c(1, "A", select.data(), values.data(), vectors.data(), n, 0.0, "I", n, "LA", nev, kTolerance,
           resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, &info);
  if (info != 0)
    throw NumericError("Lanczos eigenvector extraction failed with code " + std::to_string(info) +
                       report);

  std::vector<Index> order(static_cast<std::size_t>(nev));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
  });
  LaplacianSpectrum out;
  out.eigenvalues.resize(nev);
  out.eigenvectors.resize(n, nev);
  Eigen::Map<const Eigen::MatrixXd> z(vectors.data(), n, nev);
  for (Index k = 0; k < nev; ++k) {
    out.eigenvalues[k] = values[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    out.eigenvectors.col(k) = z.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace sscomp::detail

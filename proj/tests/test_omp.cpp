#include "sscomp/errors.hpp"
#include "sscomp/omp.hpp"
#include "sscomp/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sscomp;

namespace {

Eigen::MatrixXd random_unit_columns(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd a(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a(i, j) = rng.normal();
    a.col(j).normalize();
  }
  return a;
}

// Textbook OMP: full least-squares re-solve each step, linear scan for the
// first maximal |correlation|. Stops once the residual is orthogonal to every
// column, where further picks could not change it.
std::vector<Index> brute_force_support(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Index k_max) {
  std::vector<Index> support;
  Eigen::VectorXd q = b;
  const Index cap = std::min({k_max, a.rows(), a.cols()});
  while (static_cast<Index>(support.size()) < cap && q.norm() > 1e-12) {
    Index pick = -1;
    double best = -1;
    for (Index i = 0; i < a.cols(); ++i) {
      if (std::find(support.begin(), support.end(), i) != support.end()) continue;
      const double v = std::abs(a.col(i).dot(q));
      if (v > best) best = v, pick = i;
    }
    if (best <= 1e-12 * q.norm()) break;
    support.push_back(pick);
    Eigen::MatrixXd sel(a.rows(), static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) sel.col(static_cast<Index>(k)) = a.col(support[k]);
    const Eigen::VectorXd c = sel.colPivHouseholderQr().solve(b);
    q = b - sel * c;
  }
  return support;
}

}  // namespace

TEST_CASE("target equal to a column is recovered in one step") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::Vector3d b(0, 1, 0);
  const OmpResult r = omp(Dictionary(a), b, {.k_max = 2, .epsilon = 0.0});
  CHECK(r.trace.iterations == 1);
  const Eigen::VectorXd c = r.coefficients.to_dense();
  CHECK(c.isApprox(Eigen::Vector3d(0, 1, 0)));
  CHECK(r.trace.residuals.back().norm() == doctest::Approx(0.0));
}

TEST_CASE("two-dimensional tie example picks the diagonal then the first axis") {
  Eigen::MatrixXd a(2, 3);
  const double h = 1.0 / std::sqrt(2.0);
  a << 1, 0, h, 0, 1, h;
  const Eigen::Vector2d b(0.8, 0.6);
  const OmpResult r = omp(Dictionary(a), b, {.k_max = 2, .epsilon = 0.0});
  REQUIRE(r.trace.support.size() == 2);
  CHECK(r.trace.support[0] == 2);
  CHECK(r.trace.support[1] == 0);
  CHECK(r.trace.residuals[1].isApprox(Eigen::Vector2d(0.1, -0.1), 1e-12));
  const Eigen::VectorXd c = r.coefficients.to_dense();
  CHECK(c[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(c[1] == 0.0);
  CHECK(c[2] == doctest::Approx(0.6 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("the tie survives either rounding of 1/sqrt(2)") {
  // |a1'q1| and |a2'q1| differ only by rounding; both spellings of the
  // diagonal must still resolve to the smaller index.
  for (double h : {1.0 / std::sqrt(2.0), std::sqrt(0.5), std::sqrt(2.0) / 2.0}) {
    Eigen::MatrixXd a(2, 3);
    a << 1, 0, h, 0, 1, h;
    const OmpResult r = omp(Dictionary(a), Eigen::Vector2d(0.8, 0.6), {.k_max = 2, .epsilon = 0.0});
    CHECK(r.trace.support == std::vector<Index>{2, 0});
  }
}

TEST_CASE("greedy trace matches a brute-force scan on small dictionaries") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Index m = 2 + static_cast<Index>(seed % 4);
    const Index n = 2 + static_cast<Index>(seed % 5);
    const Eigen::MatrixXd a = random_unit_columns(m, n, seed);
    const Eigen::VectorXd b = random_unit_columns(m, 1, seed + 1000).col(0);
    const Index k_max = 1 + static_cast<Index>(seed % 6);
    const OmpResult r = omp(Dictionary(a), b, {.k_max = k_max, .epsilon = 0.0});
    CHECK(r.trace.support == brute_force_support(a, b, k_max));
  }
}

TEST_CASE("trace invariants hold on random instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Index m = 3 + static_cast<Index>(seed % 8);
    const Index n = 5 + static_cast<Index>(seed % 20);
    const Eigen::MatrixXd a = random_unit_columns(m, n, seed);
    const Eigen::VectorXd b = random_unit_columns(m, 1, seed + 7).col(0);
    const Index k_max = 1 + static_cast<Index>(seed % 12);
    const OmpResult r = omp(Dictionary(a), b, {.k_max = k_max, .epsilon = 0.0});
    const OmpTrace& t = r.trace;

    CHECK(t.iterations <= std::min({k_max, m, n}));
    CHECK(std::set<Index>(t.support.begin(), t.support.end()).size() == t.support.size());
    CHECK(r.coefficients.nonzeros() <= k_max);
    REQUIRE(t.residuals.size() == t.support.size() + 1);
    for (std::size_t k = 0; k + 1 < t.residual_norms.size(); ++k)
      CHECK(t.residual_norms[k + 1] <= t.residual_norms[k] + 1e-15);
    for (std::size_t k = 1; k < t.residuals.size(); ++k)
      for (std::size_t s = 0; s < k; ++s) CHECK(std::abs(a.col(t.support[s]).dot(t.residuals[k])) <= 1e-8);

    // Final coefficients are the least-squares fit on the support.
    const Eigen::VectorXd c = r.coefficients.to_dense();
    const Eigen::VectorXd residual = b - a * c;
    for (Index s : t.support) CHECK(std::abs(a.col(s).dot(residual)) <= 1e-8);
    CHECK((residual - t.residuals.back()).norm() <= 1e-10);
  }
}

TEST_CASE("epsilon stops the loop early") {
  const Eigen::MatrixXd a = random_unit_columns(6, 30, 5);
  const Eigen::VectorXd b = random_unit_columns(6, 1, 6).col(0);
  const OmpResult full = omp(Dictionary(a), b, {.k_max = 6, .epsilon = 0.0});
  const double stop = full.trace.residual_norms[2] * 1.0001;
  const OmpResult early = omp(Dictionary(a), b, {.k_max = 6, .epsilon = stop});
  CHECK(early.trace.iterations == 2);
  CHECK(early.trace.residual_norms.back() <= stop);
}

TEST_CASE("identical inputs give identical outputs") {
  const Eigen::MatrixXd a = random_unit_columns(9, 200, 42);
  const Eigen::VectorXd b = random_unit_columns(9, 1, 43).col(0);
  const OmpResult r1 = omp(Dictionary(a), b, {.k_max = 6, .epsilon = 1e-3});
  const OmpResult r2 = omp(Dictionary(a), b, {.k_max = 6, .epsilon = 1e-3});
  CHECK(r1.trace.support == r2.trace.support);
  CHECK(r1.coefficients.values == r2.coefficients.values);
}

TEST_CASE("hiding a column is equivalent to deleting it") {
  const Eigen::MatrixXd a = random_unit_columns(5, 12, 9);
  for (Index j : {0, 4, 11}) {
    Eigen::MatrixXd removed(5, 11);
    removed << a.leftCols(j), a.rightCols(11 - j);
    const OmpResult viewed = omp(Dictionary(a).without_column(j), a.col(j), {.k_max = 5, .epsilon = 0.0});
    const OmpResult copied = omp(Dictionary(removed), a.col(j), {.k_max = 5, .epsilon = 0.0});
    CHECK(viewed.trace.support == copied.trace.support);
    CHECK((viewed.coefficients.to_dense() - copied.coefficients.to_dense()).norm() <= 1e-14);
  }
}

TEST_CASE("contract violations") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(omp(Dictionary(a), Eigen::Vector2d(1, 0), {.k_max = 1}), ContractViolation);
  CHECK_THROWS_AS(omp(Dictionary(a), Eigen::Vector3d(1, 0, 0), {.k_max = 0}), ContractViolation);
  CHECK_THROWS_AS(omp(Dictionary(a), Eigen::Vector3d(1, 0, 0), {.k_max = 1, .epsilon = -1}), ContractViolation);
  CHECK_THROWS_AS(Dictionary(Eigen::MatrixXd(3, 0)), ContractViolation);
  CHECK_THROWS_AS(Dictionary(Eigen::MatrixXd::Constant(2, 2, 1.0)), ContractViolation);
  CHECK_NOTHROW(Dictionary(Eigen::MatrixXd::Constant(2, 2, 1.0), false));
  CHECK_THROWS_AS(Dictionary(a).without_column(3), ContractViolation);
}

TEST_CASE("least squares on a support") {
  Eigen::MatrixXd a(2, 3);
  const double h = 1.0 / std::sqrt(2.0);
  a << 1, 0, h, 0, 1, h;
  const Dictionary dict(a);

  SUBCASE("single exact column") {
    const std::vector<Index> s{1};
    const LeastSquaresFit fit = least_squares_on_support(dict, a.col(1), s);
    CHECK(fit.coefficients.isApprox(Eigen::Vector3d(0, 1, 0)));
  }
  SUBCASE("two columns of the tie example") {
    const std::vector<Index> s{0, 2};
    const LeastSquaresFit fit = least_squares_on_support(dict, Eigen::Vector2d(0.8, 0.6), s);
    CHECK(fit.coefficients[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(fit.coefficients[1] == 0.0);
    CHECK(fit.coefficients[2] == doctest::Approx(0.848528137423857).epsilon(1e-12));
    CHECK_FALSE(fit.rank_deficient);
  }
  SUBCASE("empty support") {
    const LeastSquaresFit fit = least_squares_on_support(dict, Eigen::Vector2d(0.8, 0.6), {});
    CHECK(fit.coefficients.isZero());
  }
  SUBCASE("dependent columns give the minimum-norm solution") {
    Eigen::MatrixXd dup(2, 2);
    dup << 1, 1, 0, 0;
    const std::vector<Index> s{0, 1};
    const LeastSquaresFit fit = least_squares_on_support(Dictionary(dup), Eigen::Vector2d(1, 0), s);
    CHECK(fit.rank_deficient);
    CHECK(fit.coefficients[0] == doctest::Approx(0.5));
    CHECK(fit.coefficients[1] == doctest::Approx(0.5));
  }
  SUBCASE("residual is orthogonal to the support") {
    const Eigen::MatrixXd r = random_unit_columns(7, 10, 77);
    const std::vector<Index> s{1, 3, 8};
    const Eigen::VectorXd b = random_unit_columns(7, 1, 78).col(0);
    const LeastSquaresFit fit = least_squares_on_support(Dictionary(r), b, s);
    const Eigen::VectorXd q = b - r * fit.coefficients;
    for (Index i : s) CHECK(std::abs(r.col(i).dot(q)) <= 1e-8);
  }
  SUBCASE("bad supports") {
    const std::vector<Index> repeated{0, 0};
    const std::vector<Index> outside{5};
    CHECK_THROWS_AS(least_squares_on_support(dict, Eigen::Vector2d(1, 0), repeated), ContractViolation);
    CHECK_THROWS_AS(least_squares_on_support(dict, Eigen::Vector2d(1, 0), outside), ContractViolation);
  }
}

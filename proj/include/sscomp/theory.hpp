#pragma once

#include "sscomp/dataset.hpp"
#include "sscomp/synth.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace sscomp {

// ---------------------------------------------------------------------------
// Geometry primitives
// ---------------------------------------------------------------------------

/// Largest |<x, y>| over columns x of `a` and y of `b` (both unit norm).
double coherence(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct InradiusOptions {
  /// Facet enumeration is exact but combinatorial; above this many candidate
  /// normals the estimate falls back to multi-start local minimization.
  double max_candidates = 2e6;
  int starts = 64;
  std::uint64_t seed = 0x1A2B3C4DULL;
};

struct Inradius {
  double radius = 0.0;
  Eigen::Index dim = 0;
  /// false when the value came from local minimization (an upper bound).
  bool exact = true;
};

/// Inradius of conv(+-points) inside span(points):
///   r = min over unit w in span of max_j |x_j^T w|.
/// Throws ContractViolation if the points have rank below `expected_dim`
/// (or rank 0).
Inradius inradius(const Eigen::MatrixXd& points, std::optional<Eigen::Index> expected_dim = std::nullopt,
                  const InradiusOptions& options = {});

/// Smallest principal angle between span(u) and span(v), orthonormal bases.
double principal_angle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

// ---------------------------------------------------------------------------
// Residual directions
// ---------------------------------------------------------------------------

/// Normalized nonzero OMP residuals of the in-subspace runs OMP(X^i_{-j}, x_j).
struct ResidualDirectionSet {
  int subspace = 0;
  Eigen::MatrixXd directions;         // D x K, unit columns
  std::vector<Eigen::Index> source;   // data column j that produced each direction
};

/// W_j^i for the single point j (i is its label).
ResidualDirectionSet residual_directions_for_point(const Dataset& data, Eigen::Index j);

/// W^i, the union of W_j^i over the points of subspace i.
ResidualDirectionSet residual_directions(const Dataset& data, int subspace);

// ---------------------------------------------------------------------------
// Deterministic conditions
// ---------------------------------------------------------------------------

/// Strict inequalities must hold with at least this margin.
inline constexpr double kStrictMargin = 1e-10;

struct SubspaceCondition {
  int subspace = 0;
  Eigen::Index dim = 0;
  double inradius = 0.0;  // r_i = min_j r(P^i_{-j})
  bool inradius_exact = true;
  std::optional<double> residual_coherence;  // max_{k != i} mu(W^i, X^k)
  std::optional<double> data_coherence;      // max_{k != i} mu(X^i, X^k)
  std::optional<double> max_cos_angle;       // max_{k != i} cos theta*_{ik}
  std::optional<Eigen::Index> residual_direction_count;
  /// rhs - lhs for each condition; the condition passes when margin > kStrictMargin.
  std::optional<double> residual_margin;
  std::optional<double> coherence_margin;
  std::optional<double> angle_margin;
};

/// Which of the sufficient conditions were evaluated and whether each held for
/// every subspace.
struct ConditionReport {
  std::vector<SubspaceCondition> subspaces;
  std::optional<bool> residual;    // max mu(W^i, X^k) < r_i
  std::optional<bool> coherence;  // max mu(X^i, X^k) < r_i^2
  std::optional<bool> angle;       // max mu(X^i, X^k) < r_i - 2 sqrt(1 - r_i^2) / 12^{1/4} max cos theta*
  bool inradius_exact = true;
};

bool passes(const std::optional<double>& margin);

ConditionReport check_residual_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                               const InradiusOptions& options = {});
ConditionReport check_coherence_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                                 const InradiusOptions& options = {});
ConditionReport check_angle_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                                      const InradiusOptions& options = {});
/// All three at once, sharing the inradius and coherence work.
ConditionReport check_all_conditions(const Dataset& data, const SubspaceArrangement& arrangement,
                                     const InradiusOptions& options = {});

// ---------------------------------------------------------------------------
// Inequality chain for one point
// ---------------------------------------------------------------------------

/// Worst slack (rhs - lhs, negative means violated) over w in W_j^i of:
///   [0] max_{x in other subspaces} |w^T x|  <= max_k mu(W^i, X^k)
///   [1] max_k mu(W^i, X^k)                  <= max_k mu(X^i, X^k) / r_i
///   [2] r(P^i_{-j})                          <= max_{x in X^i \ x_j} |w^T x|
///   [3] r_i                                  <= r(P^i_{-j})
struct ChainReport {
  Eigen::Index point = 0;
  std::array<double, 4> slack{};
  bool exact = true;
  bool holds(double tolerance = 1e-8) const;
};

ChainReport verify_inequality_chain(const Dataset& data, const SubspaceArrangement& arrangement, Eigen::Index j,
                                const InradiusOptions& options = {});
/// Same for every point, sharing the per-subspace work.
std::vector<ChainReport> verify_inequality_chain_all(const Dataset& data, const SubspaceArrangement& arrangement,
                                                 const InradiusOptions& options = {});

// ---------------------------------------------------------------------------
// Random model
// ---------------------------------------------------------------------------

struct RandomModelReport {
  double total_points = 0.0;   // N = n (rho d + 1)
  double dimension_bound = 0.0;  // c^2 log(rho) / 12 * D / log(N)
  bool holds = false;          // d < dimension_bound
  double probability_bound = 0.0;  // 1 - 2d/N - N exp(-sqrt(rho) d)
};

/// Default c(rho) for densities above the (unspecified) threshold rho_0.
inline const double kDefaultDensityConstant = 1.0 / std::sqrt(8.0);

RandomModelReport check_random_model(double dim, double ambient_dim, double n_subspaces, double density,
                                     double density_constant = kDefaultDensityConstant);

// ---------------------------------------------------------------------------
// Scalar comparison of the angle-based condition
// ---------------------------------------------------------------------------

/// Over a (steps x steps x steps) grid of (mu, r, cos theta) in [0, 1]^3,
/// wherever mu < r - sqrt(2 - 2r) cos theta holds, checks cos theta < r for
/// r <= 1/2 and mu < r^2 for r > 1/2. Coherence between unit vectors of two
/// subspaces never exceeds the cosine of their smallest principal angle, so
/// only triples with mu <= cos theta are admissible.
struct ScalarSweepReport {
  std::int64_t evaluated = 0;
  std::int64_t admissible = 0;
  std::int64_t premise_holds = 0;
  std::int64_t violations = 0;
  /// Counterexamples among inadmissible triples (mu > cos theta); reported
  /// for reference only.
  std::int64_t inadmissible_violations = 0;
};

ScalarSweepReport angle_condition_sweep(int steps);

}  // namespace sscomp

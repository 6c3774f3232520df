#include "sscomp/theory.hpp"

#include "sscomp/errors.hpp"
#include "sscomp/omp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sscomp {

namespace {

Eigen::MatrixXd gather(const Eigen::MatrixXd& points, std::span<const Eigen::Index> columns) {
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = points.col(columns[k]);
  return out;
}

Eigen::MatrixXd drop_column(const Eigen::MatrixXd& m, Eigen::Index j) {
  Eigen::MatrixXd out(m.rows(), m.cols() - 1);
  out.leftCols(j) = m.leftCols(j);
  out.rightCols(m.cols() - 1 - j) = m.rightCols(m.cols() - 1 - j);
  return out;
}

// Normalized nonzero residuals of OMP(X^i_{-local}, x_local) with epsilon = 0
// and k_max = N_i - 1.
Eigen::MatrixXd in_subspace_residuals(const Eigen::MatrixXd& group, Eigen::Index local) {
  const Dictionary others = Dictionary(group).without_column(local);
  const OmpOptions options{.k_max = others.size(), .epsilon = 0.0, .record_residuals = true};
  const OmpResult r = omp(others, group.col(local), options);
  Eigen::MatrixXd out(group.rows(), static_cast<Eigen::Index>(r.trace.residuals.size()));
  Eigen::Index count = 0;
  for (const Eigen::VectorXd& q : r.trace.residuals) {
    const double norm = q.norm();
    if (norm > kZeroResidual) out.col(count++) = q / norm;
  }
  return out.leftCols(count);
}

Eigen::MatrixXd hstack(const std::vector<Eigen::MatrixXd>& blocks, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.middleCols(offset, b.cols()) = b;
    offset += b.cols();
  }
  return out;
}

double max_abs_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  return coherence(a, b);
}

double max_cos_angle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  return std::min(1.0, Eigen::JacobiSVD<Eigen::MatrixXd>(u.transpose() * v).singularValues()[0]);
}

// Per-subspace quantities shared by the condition checks and the chain.
struct Geometry {
  std::vector<std::vector<Eigen::Index>> members;
  std::vector<Eigen::MatrixXd> groups;
  std::vector<std::vector<Inradius>> leave_one_out;  // r(P^i_{-j}) per local j
  std::vector<double> min_inradius;                   // r_i
  bool exact = true;
};

Geometry build_geometry(const Dataset& data, const SubspaceArrangement& arrangement,
                        const InradiusOptions& options) {
  require(data.has_labels(), "condition checks need ground-truth labels");
  const auto n = static_cast<int>(arrangement.count());
  require(n >= 1, "arrangement has no subspaces");
  require(data.label_count() <= n, "labels exceed the number of subspaces");
  require(data.ambient_dim() == arrangement.ambient_dim, "data and arrangement dimensions differ");
  Geometry g;
  for (int i = 0; i < n; ++i) {
    g.members.push_back(data.members(i));
    require(g.members.back().size() >= 2,
            "subspace " + std::to_string(i) + " needs at least two points");
    g.groups.push_back(gather(data.points, g.members.back()));
    const Eigen::Index dim = arrangement.bases[static_cast<std::size_t>(i)].cols();
    std::vector<Inradius> radii;
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < g.groups.back().cols(); ++j) {
      radii.push_back(inradius(drop_column(g.groups.back(), j), dim, options));
      smallest = std::min(smallest, radii.back().radius);
      g.exact = g.exact && radii.back().exact;
    }
    g.leave_one_out.push_back(std::move(radii));
    g.min_inradius.push_back(smallest);
  }
  return g;
}

Eigen::MatrixXd others_of(const Geometry& g, std::size_t i, Eigen::Index rows) {
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t k = 0; k < g.groups.size(); ++k)
    if (k != i) blocks.push_back(g.groups[k]);
  return hstack(blocks, rows);
}

double max_over_others(const Geometry& g, std::size_t i, const Eigen::MatrixXd& set) {
  double best = 0.0;
  for (std::size_t k = 0; k < g.groups.size(); ++k)
    if (k != i) best = std::max(best, max_abs_inner(set, g.groups[k]));
  return best;
}

struct Wanted {
  bool residual = false;
  bool coherence = false;
  bool angle = false;
};

ConditionReport evaluate(const Dataset& data, const SubspaceArrangement& arrangement, Wanted wanted,
                         const InradiusOptions& options) {
  const Geometry g = build_geometry(data, arrangement, options);
  ConditionReport report;
  report.inradius_exact = g.exact;
  bool residual_ok = true, coherence_ok = true, angle_ok = true;
  const double angle_factor = 2.0 / std::pow(12.0, 0.25);
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    SubspaceCondition s;
    s.subspace = static_cast<int>(i);
    s.dim = arrangement.bases[i].cols();
    s.inradius = g.min_inradius[i];
    s.inradius_exact = std::all_of(g.leave_one_out[i].begin(), g.leave_one_out[i].end(),
                                   [](const Inradius& r) { return r.exact; });
    const double r = s.inradius;
    if (wanted.residual) {
      std::vector<Eigen::MatrixXd> dirs;
      for (Eigen::Index j = 0; j < g.groups[i].cols(); ++j) dirs.push_back(in_subspace_residuals(g.groups[i], j));
      const Eigen::MatrixXd all = hstack(dirs, data.ambient_dim());
      s.residual_direction_count = all.cols();
      s.residual_coherence = max_over_others(g, i, all);
      s.residual_margin = r - *s.residual_coherence;
      residual_ok = residual_ok && passes(s.residual_margin);
    }
    if (wanted.coherence || wanted.angle) s.data_coherence = max_over_others(g, i, g.groups[i]);
    if (wanted.coherence) {
      s.coherence_margin = r * r - *s.data_coherence;
      coherence_ok = coherence_ok && passes(s.coherence_margin);
    }
    if (wanted.angle) {
      double cos_max = 0.0;
      for (std::size_t k = 0; k < arrangement.count(); ++k)
        if (k != i) cos_max = std::max(cos_max, max_cos_angle(arrangement.bases[i], arrangement.bases[k]));
      s.max_cos_angle = cos_max;
      s.angle_margin = r - angle_factor * std::sqrt(std::max(0.0, 1.0 - r * r)) * cos_max - *s.data_coherence;
      angle_ok = angle_ok && passes(s.angle_margin);
    }
    report.subspaces.push_back(s);
  }
  if (wanted.residual) report.residual = residual_ok;
  if (wanted.coherence) report.coherence = coherence_ok;
  if (wanted.angle) report.angle = angle_ok;
  return report;
}

}  // namespace

bool passes(const std::optional<double>& margin) { return margin && *margin > kStrictMargin; }

ResidualDirectionSet residual_directions_for_point(const Dataset& data, Eigen::Index j) {
  require(data.has_labels(), "residual directions need ground-truth labels");
  require(j >= 0 && j < data.size(), "point index out of range");
  const int label = (*data.labels)[static_cast<std::size_t>(j)];
  const auto members = data.members(label);
  require(members.size() >= 2, "subspace " + std::to_string(label) + " needs at least two points");
  const auto local = static_cast<Eigen::Index>(std::find(members.begin(), members.end(), j) - members.begin());
  ResidualDirectionSet out;
  out.subspace = label;
  out.directions = in_subspace_residuals(gather(data.points, members), local);
  out.source.assign(static_cast<std::size_t>(out.directions.cols()), j);
  return out;
}

ResidualDirectionSet residual_directions(const Dataset& data, int subspace) {
  require(data.has_labels(), "residual directions need ground-truth labels");
  const auto members = data.members(subspace);
  require(members.size() >= 2, "subspace " + std::to_string(subspace) + " needs at least two points");
  const Eigen::MatrixXd group = gather(data.points, members);
  std::vector<Eigen::MatrixXd> blocks;
  ResidualDirectionSet out;
  out.subspace = subspace;
  for (std::size_t k = 0; k < members.size(); ++k) {
    blocks.push_back(in_subspace_residuals(group, static_cast<Eigen::Index>(k)));
    out.source.insert(out.source.end(), static_cast<std::size_t>(blocks.back().cols()), members[k]);
  }
  out.directions = hstack(blocks, data.ambient_dim());
  return out;
}

ConditionReport check_residual_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                               const InradiusOptions& options) {
  return evaluate(data, arrangement, {.residual = true}, options);
}

ConditionReport check_coherence_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                                 const InradiusOptions& options) {
  return evaluate(data, arrangement, {.coherence = true}, options);
}

ConditionReport check_angle_condition(const Dataset& data, const SubspaceArrangement& arrangement,
                                      const InradiusOptions& options) {
  return evaluate(data, arrangement, {.angle = true}, options);
}

ConditionReport check_all_conditions(const Dataset& data, const SubspaceArrangement& arrangement,
                                     const InradiusOptions& options) {
  return evaluate(data, arrangement, {.residual = true, .coherence = true, .angle = true}, options);
}

bool ChainReport::holds(double tolerance) const {
  return std::all_of(slack.begin(), slack.end(), [&](double s) { return s >= -tolerance; });
}

std::vector<ChainReport> verify_inequality_chain_all(const Dataset& data, const SubspaceArrangement& arrangement,
                                                 const InradiusOptions& options) {
  const Geometry g = build_geometry(data, arrangement, options);
  std::vector<ChainReport> out(static_cast<std::size_t>(data.size()));
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    const Eigen::MatrixXd& group = g.groups[i];
    const Eigen::MatrixXd others = others_of(g, i, data.ambient_dim());
    std::vector<Eigen::MatrixXd> dirs;
    for (Eigen::Index j = 0; j < group.cols(); ++j) dirs.push_back(in_subspace_residuals(group, j));
    const double mu_w = max_over_others(g, i, hstack(dirs, data.ambient_dim()));
    const double mu_x = max_over_others(g, i, group);
    const double r_i = g.min_inradius[i];

    for (Eigen::Index j = 0; j < group.cols(); ++j) {
      ChainReport report;
      report.point = g.members[i][static_cast<std::size_t>(j)];
      const Inradius& r_j = g.leave_one_out[i][static_cast<std::size_t>(j)];
      report.exact = g.exact;
      const Eigen::MatrixXd rest = drop_column(group, j);
      double s0 = std::numeric_limits<double>::infinity();
      double s2 = std::numeric_limits<double>::infinity();
      const Eigen::MatrixXd& w = dirs[static_cast<std::size_t>(j)];
      for (Eigen::Index t = 0; t < w.cols(); ++t) {
        const double outside = others.cols() > 0 ? (others.transpose() * w.col(t)).cwiseAbs().maxCoeff() : 0.0;
        const double inside = (rest.transpose() * w.col(t)).cwiseAbs().maxCoeff();
        s0 = std::min(s0, mu_w - outside);
        s2 = std::min(s2, inside - r_j.radius);
      }
      report.slack = {w.cols() > 0 ? s0 : 0.0, mu_x / r_i - mu_w, w.cols() > 0 ? s2 : 0.0, r_j.radius - r_i};
      out[static_cast<std::size_t>(report.point)] = report;
    }
  }
  return out;
}

ChainReport verify_inequality_chain(const Dataset& data, const SubspaceArrangement& arrangement, Eigen::Index j,
                                const InradiusOptions& options) {
  require(j >= 0 && j < data.size(), "point index out of range");
  return verify_inequality_chain_all(data, arrangement, options)[static_cast<std::size_t>(j)];
}

RandomModelReport check_random_model(double dim, double ambient_dim, double n_subspaces, double density,
                                     double density_constant) {
  require(density > 1.0, "density must exceed 1");
  require(dim >= 1.0 && ambient_dim >= 1.0 && n_subspaces >= 1.0, "dimensions and counts must be positive");
  require(density_constant > 0.0, "density constant must be positive");
  RandomModelReport out;
  out.total_points = n_subspaces * (density * dim + 1.0);
  const double log_n = std::log(out.total_points);
  out.dimension_bound = density_constant * density_constant * std::log(density) / 12.0 * ambient_dim / log_n;
  out.holds = dim < out.dimension_bound;
  out.probability_bound =
      1.0 - 2.0 * dim / out.total_points - out.total_points * std::exp(-std::sqrt(density) * dim);
  return out;
}

ScalarSweepReport angle_condition_sweep(int steps) {
  require(steps >= 2, "sweep needs at least two steps per axis");
  ScalarSweepReport out;
  const double scale = 1.0 / static_cast<double>(steps - 1);
  for (int a = 0; a < steps; ++a) {
    const double mu = a * scale;
    for (int b = 0; b < steps; ++b) {
      const double r = b * scale;
      const double factor = std::sqrt(2.0 - 2.0 * r);
      for (int c = 0; c < steps; ++c) {
        const double cosine = c * scale;
        ++out.evaluated;
        const bool admissible = mu <= cosine;
        if (admissible) ++out.admissible;
        if (!(mu < r - factor * cosine)) continue;
        const bool conclusion = r <= 0.5 ? cosine < r : mu < r * r;
        if (admissible) {
          ++out.premise_holds;
          if (!conclusion) ++out.violations;
        } else if (!conclusion) {
          ++out.inadmissible_violations;
        }
      }
    }
  }
  return out;
}

}  // namespace sscomp

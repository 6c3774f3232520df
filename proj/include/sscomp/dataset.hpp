#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace sscomp {

/// Column-major point set X = [x_1, ..., x_N] with unit-norm columns and
/// optional ground-truth subspace labels in [0, n).
struct Dataset {
  Eigen::MatrixXd points;
  std::optional<std::vector<int>> labels;

  Eigen::Index size() const { return points.cols(); }
  Eigen::Index ambient_dim() const { return points.rows(); }
  bool has_labels() const { return labels.has_value(); }
  /// max label + 1, or 0 without labels.
  int label_count() const;
  /// Column indices carrying `label`, in increasing order.
  std::vector<Eigen::Index> members(int label) const;
};

/// Validates labels and scales each column to unit norm. A zero column cannot
/// be normalized and raises ContractViolation("zero-norm column ...").
Dataset make_dataset(Eigen::MatrixXd points, std::optional<std::vector<int>> labels = std::nullopt,
                     bool normalize = true);

}  // namespace sscomp

#include "sscomp/dataset.hpp"

#include "sscomp/errors.hpp"

#include <algorithm>
#include <string>

namespace sscomp {

int Dataset::label_count() const {
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

std::vector<Eigen::Index> Dataset::members(int label) const {
  require(labels.has_value(), "dataset has no labels");
  std::vector<Eigen::Index> out;
  for (std::size_t j = 0; j < labels->size(); ++j)
    if ((*labels)[j] == label) out.push_back(static_cast<Eigen::Index>(j));
  return out;
}

Dataset make_dataset(Eigen::MatrixXd points, std::optional<std::vector<int>> labels, bool normalize) {
  require(points.rows() >= 1, "dataset needs at least one dimension");
  if (labels) {
    require(static_cast<Eigen::Index>(labels->size()) == points.cols(),
            "label count " + std::to_string(labels->size()) + " does not match point count " +
                std::to_string(points.cols()));
    for (int l : *labels) require(l >= 0, "labels must be nonnegative");
  }
  if (normalize) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      const double norm = points.col(j).norm();
      if (!(norm > 0.0)) throw ContractViolation("zero-norm column " + std::to_string(j));
      points.col(j) /= norm;
    }
  }
  return Dataset{std::move(points), std::move(labels)};
}

}  // namespace sscomp

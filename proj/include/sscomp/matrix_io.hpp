#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <vector>

namespace sscomp {

/// CSV matrix, one point per column: each line is one coordinate across all
/// points. A non-numeric first line is taken as a header and skipped; blank
/// lines and lines starting with '#' are ignored.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

/// Binary matrix: uint64 rows, uint64 cols, then rows*cols float64 values in
/// column-major order, all little-endian.
Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path);
void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

/// Dispatches on extension: ".bin" is binary, anything else CSV.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

/// One integer label per line.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, std::span<const int> labels);

}  // namespace sscomp

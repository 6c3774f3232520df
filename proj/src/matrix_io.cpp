#include "sscomp/matrix_io.hpp"

#include "sscomp/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

namespace sscomp {

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view field, double& value) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFU) << (8 * (7 - i));
  return out;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    std::vector<double> values;
    std::size_t pos = 0;
    bool numeric = true;
    std::size_t bad_at = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string_view field(line.data() + pos, (comma == std::string::npos ? line.size() : comma) - pos);
      double v = 0.0;
      if (!parse_double(field, v)) {
        numeric = false;
        bad_at = line_start + pos;
        break;
      }
      values.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!numeric) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw ParseError(path.string() + ": non-numeric field", line_no, bad_at);
    }
    seen_content = true;
    if (!rows.empty() && values.size() != rows.front().size())
      throw ParseError(path.string() + ": expected " + std::to_string(rows.front().size()) + " fields, found " +
                           std::to_string(values.size()),
                       line_no, line_start);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no numeric rows", line_no, offset);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out = open_out(path);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << matrix(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  std::uint64_t header[2] = {};
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header)))
    throw ParseError(path.string() + ": truncated header", 1, static_cast<std::size_t>(in.gcount()));
  const std::uint64_t rows = to_little(header[0]);
  const std::uint64_t cols = to_little(header[1]);
  if (rows == 0 || cols == 0 || rows > (std::uint64_t{1} << 40) / cols)
    throw ParseError(path.string() + ": implausible shape " + std::to_string(rows) + "x" + std::to_string(cols), 1, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const auto bytes = static_cast<std::streamsize>(rows * cols * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(m.data()), bytes))
    throw ParseError(path.string() + ": truncated data, expected " + std::to_string(bytes) + " bytes", 1,
                     sizeof(header) + static_cast<std::size_t>(in.gcount()));
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError(path.string() + ": trailing bytes after matrix data", 1,
                     sizeof(header) + static_cast<std::size_t>(bytes));
  if constexpr (std::endian::native != std::endian::little) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      std::uint64_t bits;
      std::memcpy(&bits, m.data() + k, 8);
      bits = to_little(bits);
      std::memcpy(m.data() + k, &bits, 8);
    }
  }
  return m;
}

void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out = open_out(path, std::ios::binary);
  const std::uint64_t header[2] = {to_little(static_cast<std::uint64_t>(matrix.rows())),
                                   to_little(static_cast<std::uint64_t>(matrix.cols()))};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (Eigen::Index k = 0; k < matrix.size(); ++k) {
    std::uint64_t bits;
    std::memcpy(&bits, matrix.data() + k, 8);
    bits = to_little(bits);
    out.write(reinterpret_cast<const char*>(&bits), 8);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? read_matrix_binary(path) : read_matrix_csv(path);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  if (path.extension() == ".bin") write_matrix_binary(path, matrix);
  else write_matrix_csv(path, matrix);
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (!text.empty() && text.front() != '#') {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(path.string() + ": expected one integer label", line_no, offset);
      labels.push_back(v);
    }
    offset += line.size() + 1;
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels) {
  std::ofstream out = open_out(path);
  for (int l : labels) out << l << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace sscomp

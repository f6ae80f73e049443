#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ncsattack::csv {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Throws InvalidInput when the text is not a complete number.
double parse_double(std::string_view text);

using Row = std::vector<std::string>;

/// Comma-separated fields per line; blank lines skipped. Throws IoError with the path.
std::vector<Row> read_rows(const std::filesystem::path& path);

/// Writes the rows joined by commas. Throws IoError with the path.
void write_rows(const std::filesystem::path& path, const std::vector<Row>& rows);

/// Headerless numeric matrix.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

}  // namespace ncsattack::csv

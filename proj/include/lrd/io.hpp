#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrd/hypothesis.hpp"

namespace lrd {

/// Reads one numeric column from CSV text (LF or CRLF, optional header).
/// Without `column` the file must have a single column. Rows that are not
/// finite numbers raise DataError with their 1-based line numbers.
std::vector<double> parse_csv_column(std::istream& in, const std::optional<std::string>& column = {});
std::vector<double> read_csv_column(const std::string& path,
                                    const std::optional<std::string>& column = {});

enum class Transform { none, log_return, square, square_log_return };

Transform parse_transform(const std::string& name);
std::string to_string(Transform t);

/// log_return drops the first observation and needs positive input.
std::vector<double> apply_transform(const std::vector<double>& x, Transform t);

std::string report_json(const TestReport& report);
std::string report_tsv(const TestReport& report);

}  // namespace lrd

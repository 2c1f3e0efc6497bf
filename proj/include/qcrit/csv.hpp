#pragma once

#include <string>
#include <vector>

namespace qcrit {

// Shortest decimal representation that round-trips to the same double;
// infinities print as inf/-inf, NaN as nan.
std::string format_double(double v);

// One CSV table: a header row and numeric rows, written with format_double.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

// Writes content to path, throwing std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace qcrit

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pospart {

/// Rectangular table serialized as UTF-8 CSV with LF line endings.
/// Floating-point cells carry 17 significant digits so values round-trip.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws if the row width does not match the header.
  void add_row(std::vector<std::string> row);
};

std::string format_double(double value);
std::string format_int(long long value);

/// Throws std::runtime_error carrying the path on I/O failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace pospart

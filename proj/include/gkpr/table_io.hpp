#pragma once

// Rectangular result tables and their CSV rendering.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gkpr {

/// Shortest text of at most 17 significant digits that reads back as the
/// same double. Locale independent.
std::string format_double(double value);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Rendered as "# key: value" lines before the header.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Throws DomainError if the row width differs from the header.
  void add_row(std::vector<double> row);
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
  std::string to_csv() const;
};

/// Writes to a sibling temporary file and renames it into place, so readers
/// never see a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace gkpr

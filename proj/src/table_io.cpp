#include "gkpr/table_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "gkpr/errors.hpp"

namespace gkpr {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general);
  if (res.ec != std::errc{}) throw InternalError("to_chars failed");
  return std::string(buf, res.ptr);
}

void SweepTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw DomainError("row has " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t SweepTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("no column named " + std::string(name));
}

std::vector<double> SweepTable::column(std::string_view name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

std::string SweepTable::to_csv() const {
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += "# " + key + ": " + value + "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DomainError("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gkpr

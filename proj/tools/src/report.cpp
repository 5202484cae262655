#include "dropsim_cli/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "dropsim_cli/config.hpp"

namespace dropsim::cli {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::logic_error("csv row has " + std::to_string(row.size()) + " fields, header has " +
                           std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw ConfigError("write to " + path.string() + " failed");
}

}  // namespace dropsim::cli

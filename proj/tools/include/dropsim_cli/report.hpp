#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dropsim::cli {

// RFC 4180 CSV writer: CRLF line ends, fields quoted when they contain a
// comma, quote, CR or LF.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

// Shortest decimal text that round-trips the double.
std::string format_number(double x);

// Writes the file in one go; throws ConfigError on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace dropsim::cli

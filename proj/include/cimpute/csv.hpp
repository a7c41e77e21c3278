#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cimpute/table.hpp"

namespace cimpute {

std::vector<std::string> default_missing_tokens();
std::vector<std::string> default_date_formats();

struct CsvOptions {
  /// Matched case-insensitively. The first token is used when writing Missing.
  std::vector<std::string> missing_tokens = default_missing_tokens();
  /// Tried in order; first match wins.
  std::vector<std::string> date_formats = default_date_formats();
  char delimiter = ',';
};

/// Turns raw field text into a Cell: missing token, integer, real, date, text, in that order.
class CellParser {
 public:
  explicit CellParser(const CsvOptions& options);

  Cell parse(std::string_view raw) const;

 private:
  std::vector<std::string> missing_lower_;
  std::vector<std::pair<std::string, std::size_t>> formats_;
};

Table load_csv(std::istream& source, const CsvOptions& options = {});
Table load_csv_file(const std::filesystem::path& path, const CsvOptions& options = {});

void write_csv(const Table& table, std::ostream& sink, const CsvOptions& options = {});
/// Writes to a sibling temp file and renames it over `path`.
void write_csv_file(const Table& table, const std::filesystem::path& path,
                    const CsvOptions& options = {});

}  // namespace cimpute

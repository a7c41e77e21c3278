#include "cimpute/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "cimpute/date_format.hpp"
#include "cimpute/error.hpp"
#include "cimpute/io.hpp"

namespace cimpute {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC 4180 tokenizer: quoted fields may contain delimiters, doubled quotes and newlines.
std::vector<Record> tokenize(std::string_view text, char delimiter) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
      field_started = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw DataError(fmt::format("unterminated quoted field starting near line {}", current.line));
  if (field_started || !current.fields.empty()) end_record();
  return records;
}

bool needs_quoting(std::string_view s, char delimiter) {
  return s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view s, char delimiter) {
  if (!needs_quoting(s, delimiter)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::vector<std::string> default_missing_tokens() { return {"", "NA", "N/A", "?", "null", "NaN"}; }

std::vector<std::string> default_date_formats() {
  return {"%Y-%m-%d", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%d/%m/%Y", "%m/%d/%Y"};
}

CellParser::CellParser(const CsvOptions& options) {
  for (const auto& token : options.missing_tokens) missing_lower_.push_back(lowercase(token));
  for (const auto& pattern : options.date_formats) {
    formats_.emplace_back(pattern, intern_date_format(pattern));
  }
}

Cell CellParser::parse(std::string_view raw) const {
  const std::string lowered = lowercase(raw);
  if (std::find(missing_lower_.begin(), missing_lower_.end(), lowered) != missing_lower_.end()) {
    return Cell::missing();
  }
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();

  std::int64_t iv = 0;
  if (auto [p, ec] = std::from_chars(first, last, iv); ec == std::errc{} && p == last) {
    return Cell::integer(iv);
  }
  double dv = 0;
  if (auto [p, ec] = std::from_chars(first, last, dv); ec == std::errc{} && p == last && std::isfinite(dv)) {
    return Cell::real(dv);
  }
  for (const auto& [pattern, id] : formats_) {
    if (auto secs = parse_date(raw, pattern)) return Cell::date(DateTime{*secs, id});
  }
  return Cell::text(std::string(raw));
}

Table load_csv(std::istream& source, const CsvOptions& options) {
  const std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  auto records = tokenize(text, options.delimiter);
  if (records.empty()) return Table{};

  const auto& header = records.front().fields;
  std::vector<Column> columns(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    columns[c].name = header[c];
    for (std::size_t prev = 0; prev < c; ++prev) {
      if (header[prev] == header[c]) {
        throw DataError(fmt::format("duplicate header '{}' in columns {} and {}", header[c], prev + 1, c + 1));
      }
    }
    columns[c].cells.reserve(records.size() - 1);
  }

  const CellParser parser(options);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw DataError(fmt::format("row {} (line {}) has {} fields, expected {}", r, rec.line,
                                  rec.fields.size(), header.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      columns[c].cells.push_back(parser.parse(rec.fields[c]));
    }
  }
  return Table(std::move(columns));
}

Table load_csv_file(const std::filesystem::path& path, const CsvOptions& options) {
  std::istringstream in(read_file(path));
  return load_csv(in, options);
}

void write_csv(const Table& table, std::ostream& sink, const CsvOptions& options) {
  const std::string missing = options.missing_tokens.empty() ? std::string{} : options.missing_tokens.front();
  const char delim = options.delimiter;
  const std::size_t ncols = table.column_count();
  if (ncols == 0) return;

  for (std::size_t c = 0; c < ncols; ++c) {
    if (c) sink << delim;
    write_field(sink, table.column(c).name, delim);
  }
  sink << '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c) sink << delim;
      const Cell& cell = table.at(r, c);
      const std::string text = cell.is_missing() ? missing : to_text(cell);
      // A lone empty field in a one-column table would read back as a blank line.
      if (ncols == 1 && text.empty()) {
        sink << "\"\"";
      } else {
        write_field(sink, text, delim);
      }
    }
    sink << '\n';
  }
  if (!sink) throw std::runtime_error("CSV write failed");
}

void write_csv_file(const Table& table, const std::filesystem::path& path, const CsvOptions& options) {
  std::ostringstream out;
  write_csv(table, out, options);
  write_file_atomic(path, out.str());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path.string(), ec.message()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace cimpute

#pragma once

#include <sstream>
#include <string>

#include "cimpute/csv.hpp"
#include "cimpute/table.hpp"

namespace fixtures {

inline cimpute::Table csv(const std::string& text, const cimpute::CsvOptions& options = {}) {
  std::istringstream in(text);
  return cimpute::load_csv(in, options);
}

inline std::string to_csv(const cimpute::Table& table, const cimpute::CsvOptions& options = {}) {
  std::ostringstream out;
  cimpute::write_csv(table, out, options);
  return out.str();
}

inline cimpute::Table iris() { return cimpute::load_csv_file(std::string(CIMPUTE_TEST_DATA) + "/iris.csv"); }

}  // namespace fixtures

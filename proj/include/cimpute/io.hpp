#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cimpute {

/// Writes `content` to `path` via temp file + rename. Throws std::runtime_error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Throws DataError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace cimpute

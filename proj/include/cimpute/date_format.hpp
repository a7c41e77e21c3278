#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cimpute {

// Date patterns understand %Y (4 digits), %m %d %H %M %S (1 or 2 digits) and
// literal characters. Times are interpreted as UTC.

/// Interns a pattern in the process-wide registry and returns its stable id.
std::size_t intern_date_format(std::string_view pattern);

/// Pattern registered under `id`. Throws std::out_of_range for unknown ids.
std::string date_format_pattern(std::size_t id);

/// Parses `text` against `pattern`; the whole string must match.
std::optional<std::int64_t> parse_date(std::string_view text, std::string_view pattern);

std::string format_date(std::int64_t epoch_seconds, std::string_view pattern);

}  // namespace cimpute

#include "cimpute/date_format.hpp"

#include <chrono>
#include <deque>
#include <mutex>
#include <stdexcept>

#include <fmt/format.h>

namespace cimpute {

namespace {

struct FormatRegistry {
  std::mutex mutex;
  std::deque<std::string> patterns;
};

FormatRegistry& registry() {
  static FormatRegistry instance;
  return instance;
}

// Reads between min_digits and max_digits decimal digits starting at pos.
std::optional<int> read_number(std::string_view text, std::size_t& pos, int min_digits,
                               int max_digits) {
  int value = 0;
  int digits = 0;
  while (pos < text.size() && digits < max_digits && text[pos] >= '0' && text[pos] <= '9') {
    value = value * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  if (digits < min_digits) return std::nullopt;
  return value;
}

}  // namespace

std::size_t intern_date_format(std::string_view pattern) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  for (std::size_t i = 0; i < reg.patterns.size(); ++i) {
    if (reg.patterns[i] == pattern) return i;
  }
  reg.patterns.emplace_back(pattern);
  return reg.patterns.size() - 1;
}

std::string date_format_pattern(std::size_t id) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  return reg.patterns.at(id);
}

std::optional<std::int64_t> parse_date(std::string_view text, std::string_view pattern) {
  int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0;
  bool has_year = false, has_month = false, has_day = false;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '%' && i + 1 < pattern.size()) {
      const char spec = pattern[++i];
      std::optional<int> v;
      switch (spec) {
        case 'Y':
          v = read_number(text, pos, 4, 4);
          if (v) year = *v, has_year = true;
          break;
        case 'm':
          v = read_number(text, pos, 1, 2);
          if (v) month = *v, has_month = true;
          break;
        case 'd':
          v = read_number(text, pos, 1, 2);
          if (v) day = *v, has_day = true;
          break;
        case 'H':
          v = read_number(text, pos, 1, 2);
          if (v) hour = *v;
          break;
        case 'M':
          v = read_number(text, pos, 1, 2);
          if (v) minute = *v;
          break;
        case 'S':
          v = read_number(text, pos, 1, 2);
          if (v) second = *v;
          break;
        case '%':
          if (pos < text.size() && text[pos] == '%') ++pos, v = 0;
          break;
        default:
          return std::nullopt;
      }
      if (!v) return std::nullopt;
    } else {
      if (pos >= text.size() || text[pos] != pattern[i]) return std::nullopt;
      ++pos;
    }
  }
  if (pos != text.size()) return std::nullopt;
  if (!has_year || !has_month || !has_day) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_date(std::int64_t epoch_seconds, std::string_view pattern) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{epoch_seconds}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};

  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '%' && i + 1 < pattern.size()) {
      switch (pattern[++i]) {
        case 'Y': out += fmt::format("{:04d}", static_cast<int>(ymd.year())); break;
        case 'm': out += fmt::format("{:02d}", static_cast<unsigned>(ymd.month())); break;
        case 'd': out += fmt::format("{:02d}", static_cast<unsigned>(ymd.day())); break;
        case 'H': out += fmt::format("{:02d}", hms.hours().count()); break;
        case 'M': out += fmt::format("{:02d}", hms.minutes().count()); break;
        case 'S': out += fmt::format("{:02d}", hms.seconds().count()); break;
        case '%': out += '%'; break;
        default: throw std::invalid_argument(fmt::format("unsupported date directive in '{}'", pattern));
      }
    } else {
      out += pattern[i];
    }
  }
  return out;
}

}  // namespace cimpute

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

namespace cimpute {

struct Missing {
  friend bool operator==(Missing, Missing) = default;
};

/// Calendar date-time as UTC epoch seconds, tagged with the registry id of
/// the pattern it was parsed from so it is written back the same way.
struct DateTime {
  std::int64_t epoch_seconds = 0;
  std::size_t format_id = 0;

  friend bool operator==(const DateTime&, const DateTime&) = default;
};

/// One table cell: missing, integer, real, text or date.
class Cell {
 public:
  using Storage = std::variant<Missing, std::int64_t, double, std::string, DateTime>;

  Cell() = default;

  static Cell missing() { return Cell{}; }
  static Cell integer(std::int64_t v) { return Cell{Storage{v}}; }
  static Cell real(double v) { return Cell{Storage{v}}; }
  static Cell text(std::string v) { return Cell{Storage{std::move(v)}}; }
  static Cell date(DateTime v) { return Cell{Storage{v}}; }

  bool is_missing() const { return std::holds_alternative<Missing>(value_); }
  bool is_present() const { return !is_missing(); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_real() const { return std::holds_alternative<double>(value_); }
  bool is_numeric() const { return is_integer() || is_real(); }
  bool is_text() const { return std::holds_alternative<std::string>(value_); }
  bool is_date() const { return std::holds_alternative<DateTime>(value_); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
  double as_real() const { return std::get<double>(value_); }
  const std::string& as_text() const { return std::get<std::string>(value_); }
  const DateTime& as_date() const { return std::get<DateTime>(value_); }

  /// Integer or real widened to double. Throws std::bad_variant_access otherwise.
  double as_number() const;

  const Storage& storage() const { return value_; }

  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  explicit Cell(Storage v) : value_(std::move(v)) {}

  Storage value_;
};

/// Canonical text of a cell. Integers print without a fraction, reals always
/// carry one ("3.0"), dates use their source pattern, missing is "".
std::string to_text(const Cell& cell);

/// Shortest round-trip decimal for a real, always containing '.', 'e' or a
/// non-finite marker.
std::string format_real(double v);

}  // namespace cimpute

#include "cimpute/cell.hpp"

#include <charconv>
#include <cmath>

#include "cimpute/date_format.hpp"

namespace cimpute {

double Cell::as_number() const {
  if (is_integer()) return static_cast<double>(as_integer());
  return as_real();
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string to_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(Missing) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const DateTime& v) const {
      return format_date(v.epoch_seconds, date_format_pattern(v.format_id));
    }
  };
  return std::visit(Visitor{}, cell.storage());
}

}  // namespace cimpute

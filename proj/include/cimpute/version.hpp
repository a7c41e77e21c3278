#pragma once

namespace cimpute {
inline constexpr const char* kVersion = "0.1.0";
}

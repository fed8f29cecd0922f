#pragma once

namespace sevrank {

inline constexpr const char* version_string = "0.1.0";

}  // namespace sevrank
